//! Small dense linear-algebra kernels.
//!
//! Everything here operates on matrices of desk-scale size (the largest
//! systems are the assembled KKT oracles). LU with partial pivoting covers
//! the solves; singular values come from one-sided Jacobi, which is slow but
//! dependably accurate at these sizes.

use ndarray::{Array1, Array2, ArrayView2};

/// Relative pivot threshold below which a factorization is declared singular.
pub const SINGULARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularMatrix;

impl std::fmt::Display for SingularMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "matrix is singular within tolerance")
    }
}

/// LU factorization with partial pivoting, PA = LU.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Array2<f64>,
    perm: Vec<usize>,
}

impl LuFactors {
    /// Factorizes `a`, failing when the largest available pivot in some
    /// column falls below `rel_tol` times the largest entry of `a`.
    pub fn new(a: ArrayView2<'_, f64>, rel_tol: f64) -> Result<Self, SingularMatrix> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU requires a square matrix");
        let mut lu = a.to_owned();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = lu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if n == 0 {
            return Ok(LuFactors { lu, perm });
        }
        let threshold = rel_tol * scale.max(f64::MIN_POSITIVE);
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in (k + 1)..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best.is_nan() || best <= threshold {
                return Err(SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    lu.swap((k, j), (p, j));
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }
        Ok(LuFactors { lu, perm })
    }

    /// Solves `A x = b` using the stored factors.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.nrows();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }
}

/// One-shot linear solve.
pub fn solve(a: ArrayView2<'_, f64>, b: &[f64], rel_tol: f64) -> Result<Vec<f64>, SingularMatrix> {
    Ok(LuFactors::new(a, rel_tol)?.solve(b))
}

/// Singular values of `a` (any shape), descending, via one-sided Jacobi.
pub fn singular_values(a: ArrayView2<'_, f64>) -> Vec<f64> {
    // Work on the tall orientation so columns are the short dimension.
    let mut m = if a.nrows() >= a.ncols() {
        a.to_owned()
    } else {
        a.t().to_owned()
    };
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows == 0 || cols == 0 {
        return vec![];
    }
    let eps = f64::EPSILON;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..rows {
                    let xp = m[(i, p)];
                    let xq = m[(i, q)];
                    app += xp * xp;
                    aqq += xq * xq;
                    apq += xp * xq;
                }
                if apq.abs() <= eps * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let xp = m[(i, p)];
                    let xq = m[(i, q)];
                    m[(i, p)] = c * xp - s * xq;
                    m[(i, q)] = s * xp + c * xq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma: Vec<f64> = (0..cols)
        .map(|j| m.column(j).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sigma
}

/// Numerical rank by Gaussian elimination with full pivoting.
pub fn rank(a: ArrayView2<'_, f64>, rel_tol: f64) -> usize {
    let mut m = a.to_owned();
    let (rows, cols) = (m.nrows(), m.ncols());
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let threshold = rel_tol * scale;
    let mut r = 0;
    let mut used_rows = vec![false; rows];
    for _ in 0..cols.min(rows) {
        let mut best = threshold;
        let mut pivot: Option<(usize, usize)> = None;
        for i in 0..rows {
            if used_rows[i] {
                continue;
            }
            for j in 0..cols {
                if m[(i, j)].abs() > best {
                    best = m[(i, j)].abs();
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        used_rows[pi] = true;
        r += 1;
        let pv = m[(pi, pj)];
        for i in 0..rows {
            if used_rows[i] {
                continue;
            }
            let f = m[(i, pj)] / pv;
            if f != 0.0 {
                for j in 0..cols {
                    let sub = f * m[(pi, j)];
                    m[(i, j)] -= sub;
                }
            }
        }
    }
    r
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `a - b` elementwise.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Dense matrix-vector product for an ndarray view.
pub fn matvec(a: ArrayView2<'_, f64>, x: &[f64]) -> Vec<f64> {
    let xv = Array1::from_vec(x.to_vec());
    a.dot(&xv).to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;

    #[test]
    fn lu_solves_small_system() {
        let a = array![[2.0, 1.0], [1.0, 3.0]];
        let x = solve(a.view(), &[5.0, 10.0], SINGULARITY_TOL).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn lu_rejects_singular() {
        let a = array![[1.0, 2.0], [2.0, 4.0]];
        assert!(solve(a.view(), &[1.0, 2.0], SINGULARITY_TOL).is_err());
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = array![[3.0, 0.0], [0.0, -2.0]];
        let s = singular_values(a.view());
        assert_relative_eq!(s[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(s[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_values_match_frobenius_and_det() {
        // For a random-ish fixed matrix: sum sigma_i^2 = ||A||_F^2 and
        // prod sigma_i = |det A|.
        let a = array![[1.0, 2.0, -1.0], [0.5, -3.0, 2.0], [2.0, 0.25, 1.5]];
        let s = singular_values(a.view());
        let fro: f64 = a.iter().map(|v| v * v).sum();
        assert_relative_eq!(s.iter().map(|v| v * v).sum::<f64>(), fro, epsilon = 1e-10);
        let det: f64 =
            (-3.0 * 1.5 - 2.0 * 0.25) - 2.0 * (0.5 * 1.5 - 2.0 * 2.0) - (0.5 * 0.25 + 3.0 * 2.0);
        assert_relative_eq!(s.iter().product::<f64>(), det.abs(), epsilon = 1e-9);
    }

    #[test]
    fn rank_detects_deficiency() {
        let a = array![[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [1.0, 0.0, 1.0]];
        assert_eq!(rank(a.view(), 1e-12), 2);
        let b = array![[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(rank(b.view(), 1e-12), 2);
    }
}
