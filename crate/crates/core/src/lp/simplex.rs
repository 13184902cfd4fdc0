use ndarray::Array2;

use crate::error::{Error, Result};
use crate::lp::LP_TOL;

/// A dense LP: minimize `cost . x` subject to `eq_lhs x = eq_rhs`,
/// `ineq_lhs x <= ineq_rhs`, and `x_j >= 0` wherever `nonneg[j]`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub cost: Vec<f64>,
    pub eq_lhs: Array2<f64>,
    pub eq_rhs: Vec<f64>,
    pub ineq_lhs: Array2<f64>,
    pub ineq_rhs: Vec<f64>,
    pub nonneg: Vec<bool>,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    fn validate(&self) -> Result<()> {
        let m = self.num_vars();
        if m == 0 {
            return Err(Error::invalid("LP with no variables"));
        }
        if self.eq_lhs.ncols() != m && self.eq_lhs.nrows() > 0 {
            return Err(Error::invalid("eq_lhs column count mismatch"));
        }
        if self.ineq_lhs.ncols() != m && self.ineq_lhs.nrows() > 0 {
            return Err(Error::invalid("ineq_lhs column count mismatch"));
        }
        if self.eq_lhs.nrows() != self.eq_rhs.len() {
            return Err(Error::invalid("eq rhs length mismatch"));
        }
        if self.ineq_lhs.nrows() != self.ineq_rhs.len() {
            return Err(Error::invalid("ineq rhs length mismatch"));
        }
        if self.nonneg.len() != m {
            return Err(Error::invalid("nonneg mask length mismatch"));
        }
        let finite = self.cost.iter().all(|v| v.is_finite())
            && self.eq_lhs.iter().all(|v| v.is_finite())
            && self.eq_rhs.iter().all(|v| v.is_finite())
            && self.ineq_lhs.iter().all(|v| v.is_finite())
            && self.ineq_rhs.iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("LP contains non-finite entries"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
    /// Inequality constraints tight at the solution, within
    /// `tol * (1 + |rhs|)` per constraint.
    pub active_set: Vec<usize>,
    pub iterations: usize,
    /// Duals of the equality rows (original orientation).
    pub eq_duals: Vec<f64>,
    /// Duals of the inequality rows (original orientation).
    pub ineq_duals: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    pub tol: f64,
    /// Defaults to `50 * (vars + eq rows + ineq rows)` when `None`.
    pub max_iter: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { tol: LP_TOL, max_iter: None }
    }
}

/// Tableau state for the two-phase method. Columns are laid out as
/// `[structural vars | slacks | artificials]`.
struct Tableau {
    body: Array2<f64>,
    rhs: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    n_struct: usize,
    n_slack: usize,
    n_art: usize,
    tol: f64,
}

impl Tableau {
    fn cols(&self) -> usize {
        self.n_struct + self.n_slack + self.n_art
    }

    fn art_start(&self) -> usize {
        self.n_struct + self.n_slack
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let rows = self.body.nrows();
        let piv = self.body[(row, col)];
        for j in 0..self.cols() {
            self.body[(row, j)] /= piv;
        }
        self.rhs[row] /= piv;
        for i in 0..rows {
            if i == row {
                continue;
            }
            let f = self.body[(i, col)];
            if f != 0.0 {
                for j in 0..self.cols() {
                    let sub = f * self.body[(row, j)];
                    self.body[(i, j)] -= sub;
                }
                self.rhs[i] -= f * self.rhs[row];
                self.body[(i, col)] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for j in 0..self.cols() {
                let sub = f * self.body[(row, j)];
                self.obj[j] -= sub;
            }
            self.obj[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering column is the lowest-index eligible column with
    /// a negative reduced cost; the leaving row breaks ratio ties by lowest
    /// basic variable index. Returns the iteration count consumed, or an
    /// unbounded/iteration-limit signal.
    fn run(&mut self, allow_artificial: bool, budget: &mut usize) -> PivotOutcome {
        loop {
            let limit = if allow_artificial { self.cols() } else { self.art_start() };
            let mut entering = None;
            for j in 0..limit {
                if self.obj[j] < -self.tol {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return PivotOutcome::Optimal;
            };

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.body.nrows() {
                let a = self.body[(i, col)];
                if a > self.tol {
                    let ratio = self.rhs[i] / a;
                    let better = match leave {
                        None => true,
                        Some((best_row, best_ratio)) => {
                            let eps = 1e-12 * (1.0 + best_ratio.abs());
                            ratio < best_ratio - eps
                                || ((ratio - best_ratio).abs() <= eps
                                    && self.basis[i] < self.basis[best_row])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return PivotOutcome::Unbounded;
            };

            if *budget == 0 {
                return PivotOutcome::IterationLimit;
            }
            *budget -= 1;
            self.pivot(row, col);
        }
    }
}

enum PivotOutcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

/// Solves an LP by the two-phase dense simplex method.
///
/// On `Optimal` the returned point is a basic feasible solution: nonbasic
/// variables are exactly zero. Infeasible and unbounded problems come back as
/// statuses, and an exhausted pivot budget is reported as `IterationLimit`
/// rather than a silently wrong answer.
pub fn solve_lp(lp: &LinearProgram, opts: &LpOptions) -> Result<LpSolution> {
    lp.validate()?;
    let m = lp.num_vars();
    let p = lp.eq_rhs.len();
    let q = lp.ineq_rhs.len();
    let rows = p + q;
    let tol = opts.tol;
    let mut budget = opts.max_iter.unwrap_or(50 * (m + p + q));
    let total_iters_allowed = budget;

    // Standardize: split free variables, add slacks, normalize rhs signs.
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(m);
    let mut n_struct = 0;
    for &nn in &lp.nonneg {
        if nn {
            col_of.push((n_struct, None));
            n_struct += 1;
        } else {
            col_of.push((n_struct, Some(n_struct + 1)));
            n_struct += 2;
        }
    }

    // Row scan: orientation flips and artificial needs.
    let mut flip = vec![1.0f64; rows];
    let mut needs_art = vec![false; rows];
    for r in 0..rows {
        let rhs = if r < p { lp.eq_rhs[r] } else { lp.ineq_rhs[r - p] };
        if rhs < 0.0 {
            flip[r] = -1.0;
        }
        needs_art[r] = r < p || flip[r] < 0.0;
    }
    let n_slack = q;
    let n_art = needs_art.iter().filter(|&&b| b).count();

    let mut body = Array2::zeros((rows, n_struct + n_slack + n_art));
    let mut rhs = vec![0.0; rows];
    let mut basis = vec![usize::MAX; rows];
    let mut art_col = n_struct + n_slack;
    let mut art_of_row = vec![None; rows];
    for r in 0..rows {
        let (coeffs, b) = if r < p {
            (lp.eq_lhs.row(r), lp.eq_rhs[r])
        } else {
            (lp.ineq_lhs.row(r - p), lp.ineq_rhs[r - p])
        };
        for (j, &v) in coeffs.iter().enumerate() {
            let (pos, neg) = col_of[j];
            body[(r, pos)] = flip[r] * v;
            if let Some(neg) = neg {
                body[(r, neg)] = -flip[r] * v;
            }
        }
        if r >= p {
            body[(r, n_struct + (r - p))] = flip[r];
        }
        rhs[r] = flip[r] * b;
        if needs_art[r] {
            body[(r, art_col)] = 1.0;
            basis[r] = art_col;
            art_of_row[r] = Some(art_col);
            art_col += 1;
        } else {
            basis[r] = n_struct + (r - p);
        }
    }

    let mut t = Tableau { body, rhs, obj: vec![], basis, n_struct, n_slack, n_art, tol };

    // Phase 1: minimize the artificial sum.
    if n_art > 0 {
        let mut obj = vec![0.0; t.cols()];
        for j in t.art_start()..t.cols() {
            obj[j] = 1.0;
        }
        t.obj = obj;
        // Price out the basic artificials.
        for r in 0..rows {
            if art_of_row[r].is_some() {
                for j in 0..t.cols() {
                    let sub = t.body[(r, j)];
                    t.obj[j] -= sub;
                }
            }
        }
        match t.run(true, &mut budget) {
            PivotOutcome::Optimal => {}
            PivotOutcome::IterationLimit => {
                return Ok(limit_solution(lp, iterations_budget_used(total_iters_allowed, budget)));
            }
            PivotOutcome::Unbounded => {
                return Err(Error::SolverFailure(
                    "phase-1 objective reported unbounded".into(),
                ));
            }
        }
        let phase1: f64 = (0..rows)
            .filter(|&r| t.basis[r] >= t.art_start())
            .map(|r| t.rhs[r])
            .sum();
        if phase1 > tol {
            return Ok(LpSolution {
                x: vec![0.0; m],
                objective: 0.0,
                status: LpStatus::Infeasible,
                active_set: vec![],
                iterations: iterations_budget_used(total_iters_allowed, budget),
                eq_duals: vec![0.0; p],
                ineq_duals: vec![0.0; q],
            });
        }
        // Drive leftover artificials out of the basis where possible.
        for r in 0..rows {
            if t.basis[r] >= t.art_start() {
                if let Some(col) = (0..t.art_start()).find(|&j| t.body[(r, j)].abs() > tol) {
                    t.pivot(r, col);
                }
            }
        }
    }

    // Phase 2 objective over structural columns.
    let mut obj = vec![0.0; t.cols()];
    for (j, &c) in lp.cost.iter().enumerate() {
        let (pos, neg) = col_of[j];
        obj[pos] += c;
        if let Some(neg) = neg {
            obj[neg] -= c;
        }
    }
    let cost_std = obj.clone();
    for r in 0..rows {
        let b = t.basis[r];
        let cb = cost_std[b];
        if cb != 0.0 {
            for j in 0..t.cols() {
                let sub = cb * t.body[(r, j)];
                obj[j] -= sub;
            }
        }
    }
    t.obj = obj;

    let status = match t.run(false, &mut budget) {
        PivotOutcome::Optimal => LpStatus::Optimal,
        PivotOutcome::Unbounded => LpStatus::Unbounded,
        PivotOutcome::IterationLimit => LpStatus::IterationLimit,
    };
    let iterations_used = iterations_budget_used(total_iters_allowed, budget);
    if status != LpStatus::Optimal {
        let mut sol = limit_solution(lp, iterations_used);
        sol.status = status;
        return Ok(sol);
    }

    // Extract the basic solution.
    let mut x_std = vec![0.0; t.cols()];
    for r in 0..rows {
        x_std[t.basis[r]] = t.rhs[r];
    }
    let mut x = vec![0.0; m];
    for (j, &(pos, neg)) in col_of.iter().enumerate() {
        x[j] = x_std[pos] - neg.map_or(0.0, |c| x_std[c]);
    }
    let objective: f64 = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();

    // Duals from the reduced costs of identity columns, unflipped.
    let mut duals = vec![0.0; rows];
    for r in 0..rows {
        let y_std = if let Some(a) = art_of_row[r] {
            -t.obj[a]
        } else {
            // Row has its +1 slack column.
            -t.obj[n_struct + (r - p)]
        };
        duals[r] = flip[r] * y_std;
    }
    let eq_duals = duals[..p].to_vec();
    let ineq_duals = duals[p..].to_vec();

    let mut active_set = Vec::new();
    for i in 0..q {
        let gx: f64 = lp.ineq_lhs.row(i).iter().zip(&x).map(|(a, v)| a * v).sum();
        if (gx - lp.ineq_rhs[i]).abs() <= tol * (1.0 + lp.ineq_rhs[i].abs()) {
            active_set.push(i);
        }
    }

    Ok(LpSolution {
        x,
        objective,
        status,
        active_set,
        iterations: iterations_used,
        eq_duals,
        ineq_duals,
    })
}

fn iterations_budget_used(total: usize, remaining: usize) -> usize {
    total - remaining
}

fn limit_solution(lp: &LinearProgram, iterations: usize) -> LpSolution {
    LpSolution {
        x: vec![0.0; lp.num_vars()],
        objective: 0.0,
        status: LpStatus::IterationLimit,
        active_set: vec![],
        iterations,
        eq_duals: vec![0.0; lp.eq_rhs.len()],
        ineq_duals: vec![0.0; lp.ineq_rhs.len()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::{array, Array2};

    fn no_eq(m: usize) -> (Array2<f64>, Vec<f64>) {
        (Array2::zeros((0, m)), vec![])
    }

    #[test]
    fn lower_bounded_single_variable() {
        // min x s.t. x >= 1, i.e. -x <= -1, x free.
        let (eq, eqr) = no_eq(1);
        let lp = LinearProgram {
            cost: vec![1.0],
            eq_lhs: eq,
            eq_rhs: eqr,
            ineq_lhs: array![[-1.0]],
            ineq_rhs: vec![-1.0],
            nonneg: vec![false],
        };
        let sol = solve_lp(&lp, &LpOptions::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_relative_eq!(sol.x[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(sol.objective, 1.0, epsilon = 1e-9);
        assert_eq!(sol.active_set, vec![0]);
    }

    #[test]
    fn optimum_on_facet() {
        // min -x - y s.t. x + y <= 1, x,y >= 0.
        let (eq, eqr) = no_eq(2);
        let lp = LinearProgram {
            cost: vec![-1.0, -1.0],
            eq_lhs: eq,
            eq_rhs: eqr,
            ineq_lhs: array![[1.0, 1.0]],
            ineq_rhs: vec![1.0],
            nonneg: vec![true, true],
        };
        let sol = solve_lp(&lp, &LpOptions::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_relative_eq!(sol.objective, -1.0, epsilon = 1e-9);
        assert_relative_eq!(sol.x[0] + sol.x[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn unbounded_ray() {
        // min -x s.t. x >= 0.
        let (eq, eqr) = no_eq(1);
        let lp = LinearProgram {
            cost: vec![-1.0],
            eq_lhs: eq,
            eq_rhs: eqr,
            ineq_lhs: Array2::zeros((0, 1)),
            ineq_rhs: vec![],
            nonneg: vec![true],
        };
        let sol = solve_lp(&lp, &LpOptions::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_equalities() {
        // x = 1 and x = 2.
        let lp = LinearProgram {
            cost: vec![0.0],
            eq_lhs: array![[1.0], [1.0]],
            eq_rhs: vec![1.0, 2.0],
            ineq_lhs: Array2::zeros((0, 1)),
            ineq_rhs: vec![],
            nonneg: vec![true],
        };
        let sol = solve_lp(&lp, &LpOptions::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_with_free_variable_and_duals() {
        // min x + 2y s.t. x + y = 1, y <= 0.7, x free, y >= 0.
        let lp = LinearProgram {
            cost: vec![1.0, 2.0],
            eq_lhs: array![[1.0, 1.0]],
            eq_rhs: vec![1.0],
            ineq_lhs: array![[0.0, 1.0]],
            ineq_rhs: vec![0.7],
            nonneg: vec![false, true],
        };
        let sol = solve_lp(&lp, &LpOptions::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_relative_eq!(sol.x[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(sol.x[1], 0.0, epsilon = 1e-9);
        // Strong duality: c.x = y_eq . b + y_ineq . h.
        let dual_obj = sol.eq_duals[0] * 1.0 + sol.ineq_duals[0] * 0.7;
        assert_relative_eq!(sol.objective, dual_obj, epsilon = 1e-9);
    }

    #[test]
    fn negative_rhs_rows_are_handled() {
        // min x + y s.t. x + y >= 2 (as -x - y <= -2), x,y >= 0.
        let (eq, eqr) = no_eq(2);
        let lp = LinearProgram {
            cost: vec![1.0, 1.0],
            eq_lhs: eq,
            eq_rhs: eqr,
            ineq_lhs: array![[-1.0, -1.0]],
            ineq_rhs: vec![-2.0],
            nonneg: vec![true, true],
        };
        let sol = solve_lp(&lp, &LpOptions::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_relative_eq!(sol.objective, 2.0, epsilon = 1e-9);
        let dual_obj = sol.ineq_duals[0] * -2.0;
        assert_relative_eq!(sol.objective, dual_obj, epsilon = 1e-9);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let (eq, eqr) = no_eq(2);
        let lp = LinearProgram {
            cost: vec![-1.0, -2.0],
            eq_lhs: eq,
            eq_rhs: eqr,
            ineq_lhs: array![[1.0, 1.0], [1.0, 2.0], [2.0, 1.0]],
            ineq_rhs: vec![1.0, 1.5, 1.5],
            nonneg: vec![true, true],
        };
        let sol = solve_lp(&lp, &LpOptions { tol: LP_TOL, max_iter: Some(0) }).unwrap();
        assert_eq!(sol.status, LpStatus::IterationLimit);
    }
}
