use ndarray::Array2;

use crate::error::{Error, Result};
use crate::geometry::{Dictionary, VertexSet};
use crate::lp::simplex::{solve_lp, LinearProgram, LpOptions, LpStatus};
use crate::report::{Residuals, SolveReport, SolveStatus};

/// Relative tolerance for deciding that a lifted-hull constraint is tight.
pub const CHLP_ACTIVE_TOL_REL: f64 = 1e-7;

fn check_query(x: &Dictionary, y: &[f64]) -> Result<()> {
    if y.len() != x.d() {
        return Err(Error::invalid(format!(
            "query dimension {} does not match d={}",
            y.len(),
            x.d()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite query point"));
    }
    Ok(())
}

/// Minimum-locality reconstruction: minimize `sum_i w_i ||x_i - y||^2` over
/// the probability simplex subject to `X w = y`.
///
/// The simplex method returns a basic solution, so at most `d+1` entries are
/// nonzero and the zeros are exact. A query outside the hull surfaces as the
/// `infeasible` status.
pub fn solve_exact_e(x: &Dictionary, y: &[f64]) -> Result<SolveReport> {
    check_query(x, y)?;
    let d = x.d();
    let n = x.n();
    let cost = x.sq_dists(y);

    let mut eq = Array2::zeros((d + 1, n));
    for i in 0..n {
        for row in 0..d {
            eq[(row, i)] = x.atom(i)[row];
        }
        eq[(d, i)] = 1.0;
    }
    let mut rhs = y.to_vec();
    rhs.push(1.0);

    let lp = LinearProgram {
        cost: cost.clone(),
        eq_lhs: eq,
        eq_rhs: rhs,
        ineq_lhs: Array2::zeros((0, n)),
        ineq_rhs: vec![],
        nonneg: vec![true; n],
    };
    let sol = solve_lp(&lp, &LpOptions::default())?;

    let status = match sol.status {
        LpStatus::Optimal => SolveStatus::Optimal,
        LpStatus::Infeasible => SolveStatus::Infeasible,
        LpStatus::IterationLimit => SolveStatus::IterationLimit,
        LpStatus::Unbounded => {
            return Err(Error::SolverFailure(
                "locality LP reported unbounded on a compact feasible set".into(),
            ))
        }
    };

    let w = sol.x;
    let recon = x.combine(&w);
    let fit = 0.5
        * recon
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
    let loc: f64 = cost.iter().zip(&w).map(|(c, v)| c * v).sum();
    let sum_w: f64 = w.iter().sum();
    let min_w = w.iter().fold(0.0f64, |m, &v| m.min(v));
    let primal = if status == SolveStatus::Optimal {
        let recon_err = recon
            .iter()
            .zip(y)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        recon_err.max((sum_w - 1.0).abs()).max(-min_w)
    } else {
        f64::INFINITY
    };
    let dual_obj: f64 = sol
        .eq_duals
        .iter()
        .zip(lp.eq_rhs.iter())
        .map(|(a, b)| a * b)
        .sum();
    let gap = if status == SolveStatus::Optimal {
        (sol.objective - dual_obj).abs()
    } else {
        f64::INFINITY
    };

    Ok(SolveReport {
        w,
        objective: loc,
        fit,
        locality: loc,
        rho: None,
        iters: sol.iterations,
        status,
        residuals: Residuals { primal, dual: gap, gap },
        kkt_fallbacks: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChlpStatus {
    /// Exactly `d+1` tight constraints: the containing simplex.
    Identified,
    /// More (or fewer) than `d+1` tight constraints; with more, the query
    /// sits under a lower face spanned by cocircular atoms.
    Degenerate,
    /// The LP is unbounded: the query is outside the hull.
    OutsideHull,
}

#[derive(Debug, Clone)]
pub struct ChlpResult {
    pub vertex_set: VertexSet,
    pub status: ChlpStatus,
    pub iterations: usize,
}

/// Point location through the lifted convex hull: find the hyperplane
/// `(c, z)` maximizing `c . y + z` subject to `x_i . c + z <= ||x_i||^2`;
/// the tight constraints name the vertices of the lower face hit by the
/// vertical ray through `y`.
pub fn chlp_locate(x: &Dictionary, y: &[f64]) -> Result<ChlpResult> {
    check_query(x, y)?;
    x.require_triangulation_scale()?;
    let d = x.d();
    let n = x.n();

    let mut cost = y.iter().map(|v| -v).collect::<Vec<f64>>();
    cost.push(-1.0);
    let mut ineq = Array2::zeros((n, d + 1));
    for i in 0..n {
        for row in 0..d {
            ineq[(i, row)] = x.atom(i)[row];
        }
        ineq[(i, d)] = 1.0;
    }
    let lp = LinearProgram {
        cost,
        eq_lhs: Array2::zeros((0, d + 1)),
        eq_rhs: vec![],
        ineq_lhs: ineq,
        ineq_rhs: x.sq_norms().to_vec(),
        nonneg: vec![false; d + 1],
    };
    let sol = solve_lp(&lp, &LpOptions::default())?;

    match sol.status {
        LpStatus::Unbounded => Ok(ChlpResult {
            vertex_set: VertexSet::new(vec![]),
            status: ChlpStatus::OutsideHull,
            iterations: sol.iterations,
        }),
        LpStatus::Optimal => {
            // Recompute tightness at the looser location tolerance; the
            // solver's own active set uses the pivot tolerance.
            let mut tight = Vec::new();
            for i in 0..n {
                let lhs: f64 = x
                    .atom(i)
                    .iter()
                    .zip(&sol.x[..d])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    + sol.x[d];
                let b = x.sq_norms()[i];
                if (lhs - b).abs() <= CHLP_ACTIVE_TOL_REL * (1.0 + b.abs()) {
                    tight.push(i);
                }
            }
            let status = if tight.len() == d + 1 {
                ChlpStatus::Identified
            } else {
                ChlpStatus::Degenerate
            };
            Ok(ChlpResult {
                vertex_set: VertexSet::new(tight),
                status,
                iterations: sol.iterations,
            })
        }
        LpStatus::Infeasible => Err(Error::SolverFailure(
            "lifted-hull LP reported infeasible, but it always has feasible points".into(),
        )),
        LpStatus::IterationLimit => Err(Error::SolverFailure(
            "lifted-hull LP hit its pivot budget".into(),
        )),
    }
}
