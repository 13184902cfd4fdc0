//! Small dense linear programming.
//!
//! [`solve_lp`] is a two-phase tableau simplex method with Bland's rule —
//! slow but deterministic, and it returns basic solutions whose zero entries
//! are exact, which is what the support-identification front-ends need.
//!
//! The two front-ends are [`solve_exact_e`] (minimum-locality reconstruction
//! over the probability simplex) and [`chlp_locate`] (point location through
//! the lifted convex-hull LP).

mod delaunay;
mod simplex;

pub use delaunay::{chlp_locate, solve_exact_e, ChlpResult, ChlpStatus, CHLP_ACTIVE_TOL_REL};
pub use simplex::{solve_lp, LinearProgram, LpOptions, LpSolution, LpStatus};

/// Feasibility/pivot tolerance for the simplex method.
pub const LP_TOL: f64 = 1e-9;
