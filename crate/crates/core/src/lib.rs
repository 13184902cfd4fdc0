//! Local sparse coding over a fixed dictionary, with Delaunay-simplex
//! identification.
//!
//! Given a dictionary of `n` points in `R^d` and a query `y`, this crate
//! computes simplex-constrained representations `w` of `y` whose support is
//! local: the nonzero weights sit on the vertices of the Delaunay simplex
//! containing `y`. Four routes are provided and cross-checked:
//!
//! * [`qp::solve_relaxed_r`] — the central solver: least-squares fit plus a
//!   locality penalty, solved by a primal-dual interior-point method whose
//!   Newton systems are reduced to `d x d` solves via block elimination.
//! * [`lp::solve_exact_e`] — the exact problem (minimum locality subject to
//!   exact reconstruction), solved by a two-phase dense simplex method.
//! * [`lp::chlp_locate`] — point location through the lifted convex-hull
//!   linear program.
//! * [`oracle::enumerate_delaunay`] — a brute-force empty-circumsphere
//!   oracle used as ground truth for everything else.
//!
//! The [`api`] module ties the theory together (support extraction, the
//! regularization threshold `rho* = d_Sy / C`, stability bounds, solution
//! paths), and [`experiments`] reproduces the desk-scale experiment suite
//! behind the `dl` command-line tool.

pub mod api;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod qp;
pub mod report;

pub use error::{Error, Result};
pub use geometry::{
    BarycentricSystem, Circumsphere, Dictionary, GeneralPositionReport, SimplexWeights, VertexSet,
};
pub use report::{Residuals, SolveReport, SolveStatus};
