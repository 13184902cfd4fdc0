//! Simplex-constrained quadratic programming.
//!
//! The relaxed locality problem is the QP
//!
//! ```text
//!     minimize   1/2 w' X'X w + w' (rho c - X' y)
//!     subject to 1' w = 1,  w >= 0
//! ```
//!
//! with `c_i = ||x_i - y||^2`. [`solve_relaxed_r`] runs a primal-dual
//! path-following interior-point method on it. The bottleneck of every
//! Newton step is a saddle system with blocks `[X'X, 1, -I; 1', 0, 0;
//! -I, 0, D]`; [`kkt_reduced_solve`] eliminates it down to a `d x d` solve
//! without ever forming `X'X`, and [`kkt_direct_solve`] assembles the full
//! `(2n+1)`-dimensional system as the correctness oracle for that
//! elimination.

mod ipm;
mod kkt;

pub use ipm::{project_onto_hull, solve_relaxed_r, QpOptions, QpProblem};
pub use kkt::{kkt_direct_solve, kkt_reduced_solve, KktRhs, KktSolution, ReducedKkt, ReducedSolve};
