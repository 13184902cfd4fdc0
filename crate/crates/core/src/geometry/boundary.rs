use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::geometry::{barycentric, Dictionary, VertexSet};
use crate::linalg;

/// Exact projection of `y` onto the simplex spanned by the columns of
/// `points`: minimizes `||P a - y||^2` over coefficient vectors `a` on the
/// probability simplex.
///
/// Solved by enumerating supports: for each nonempty subset of columns the
/// affinely-constrained least-squares problem is solved through its bordered
/// normal equations, and candidates whose coefficients are nonnegative
/// compete on distance. Exponential in the column count, exact, and cheap at
/// the facet sizes that occur here.
pub fn project_onto_spanned_simplex(points: ArrayView2<'_, f64>, y: &[f64]) -> Result<(Vec<f64>, f64)> {
    let d = points.nrows();
    let k = points.ncols();
    if d != y.len() {
        return Err(Error::invalid("projection dimension mismatch"));
    }
    if k == 0 {
        return Err(Error::invalid("cannot project onto an empty vertex set"));
    }
    if k > 20 {
        return Err(Error::ResourceLimit(format!(
            "simplex projection by support enumeration is limited to 20 vertices, got {k}"
        )));
    }

    let feas_tol = 1e-12;
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 1u32..(1u32 << k) {
        let support: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let m = support.len();
        // Bordered normal equations: [G^T G, 1; 1^T, 0] [a; nu] = [G^T y; 1].
        let mut sys = Array2::zeros((m + 1, m + 1));
        let mut rhs = vec![0.0; m + 1];
        for (r, &i) in support.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                sys[(r, c)] = points
                    .column(i)
                    .iter()
                    .zip(points.column(j).iter())
                    .map(|(a, b)| a * b)
                    .sum();
            }
            sys[(r, m)] = 1.0;
            sys[(m, r)] = 1.0;
            rhs[r] = points.column(i).iter().zip(y).map(|(a, b)| a * b).sum();
        }
        rhs[m] = 1.0;
        let Ok(sol) = linalg::solve(sys.view(), &rhs, 1e-13) else {
            continue;
        };
        if sol[..m].iter().any(|&a| a < -feas_tol) {
            continue;
        }
        let mut full = vec![0.0; k];
        for (r, &i) in support.iter().enumerate() {
            full[i] = sol[r].max(0.0);
        }
        let mut dist2 = 0.0;
        for row in 0..d {
            let mut p = 0.0;
            for (i, &a) in full.iter().enumerate() {
                p += a * points[(row, i)];
            }
            let diff = p - y[row];
            dist2 += diff * diff;
        }
        if best.as_ref().is_none_or(|(_, b)| dist2 < *b) {
            best = Some((full, dist2));
        }
    }
    best.ok_or_else(|| Error::SolverFailure("no feasible support in simplex projection".into()))
}

/// Squared distance from a strictly interior `y` to the boundary of the
/// simplex spanned by `set`: the minimum over the `d+1` facets of the exact
/// facet-projection distance.
pub fn boundary_distance(x: &Dictionary, set: &VertexSet, y: &[f64]) -> Result<f64> {
    let d = x.d();
    if set.len() != d + 1 {
        return Err(Error::invalid(format!(
            "boundary distance needs a {}-vertex simplex, got {}",
            d + 1,
            set.len()
        )));
    }
    let coords = barycentric(x, set, y)?;
    if let Some((k, &a)) = coords.iter().enumerate().find(|(_, &a)| a <= 0.0) {
        return Err(Error::NotInterior(format!(
            "barycentric coordinate {a:.3e} at vertex {} is not positive",
            set.as_slice()[k]
        )));
    }

    let atoms = x.gather(set)?;
    let mut min_dist2 = f64::INFINITY;
    for drop in 0..=d {
        let mut facet = Array2::zeros((d, d));
        let mut c = 0;
        for col in 0..=d {
            if col == drop {
                continue;
            }
            facet.column_mut(c).assign(&atoms.column(col));
            c += 1;
        }
        let (_, dist2) = project_onto_spanned_simplex(facet.view(), y)?;
        min_dist2 = min_dist2.min(dist2);
    }
    Ok(min_dist2)
}
