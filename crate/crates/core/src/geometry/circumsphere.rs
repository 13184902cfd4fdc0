use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::geometry::{Dictionary, VertexSet, GEOM_TOL_REL};
use crate::linalg;

/// Center and radius of the hypersphere through `d+1` affinely independent
/// points.
#[derive(Debug, Clone, PartialEq)]
pub struct Circumsphere {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Circumsphere {
    /// Distance from `p` to the sphere surface (signed: negative inside).
    pub fn surface_offset<'a, I>(&self, p: I) -> f64
    where
        I: IntoIterator<Item = &'a f64>,
    {
        let dist: f64 = self
            .center
            .iter()
            .zip(p)
            .map(|(c, x)| (x - c) * (x - c))
            .sum::<f64>()
            .sqrt();
        dist - self.radius
    }
}

/// Circumsphere of the columns of `vertices` (`d x (d+1)`).
///
/// The center solves the `d` equations `2 (x_i - x_0) . c = ||x_i||^2 -
/// ||x_0||^2`; affinely dependent input makes that system singular and is
/// reported as a degenerate simplex.
pub fn circumsphere(vertices: ArrayView2<'_, f64>) -> Result<Circumsphere> {
    let d = vertices.nrows();
    if vertices.ncols() != d + 1 {
        return Err(Error::invalid(format!(
            "circumsphere needs d+1 points in R^d, got {} points in R^{d}",
            vertices.ncols()
        )));
    }
    if vertices.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite vertex coordinates"));
    }

    let x0 = vertices.column(0);
    let x0_sq: f64 = x0.iter().map(|v| v * v).sum();
    let mut a = Array2::zeros((d, d));
    let mut b = vec![0.0; d];
    for i in 0..d {
        let xi = vertices.column(i + 1);
        let xi_sq: f64 = xi.iter().map(|v| v * v).sum();
        for j in 0..d {
            a[(i, j)] = 2.0 * (xi[j] - x0[j]);
        }
        b[i] = xi_sq - x0_sq;
    }
    let center = linalg::solve(a.view(), &b, GEOM_TOL_REL)
        .map_err(|_| Error::DegenerateSimplex("affinely dependent circumsphere input".into()))?;

    let radius: f64 = x0
        .iter()
        .zip(&center)
        .map(|(x, c)| (x - c) * (x - c))
        .sum::<f64>()
        .sqrt();

    // Every generating vertex must sit on the sphere; a violation means the
    // input was too close to degenerate for the solve to be trusted.
    let mut diameter2: f64 = 0.0;
    for i in 0..=d {
        for j in (i + 1)..=d {
            let dist2: f64 = vertices
                .column(i)
                .iter()
                .zip(vertices.column(j).iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            diameter2 = diameter2.max(dist2);
        }
    }
    let tol = GEOM_TOL_REL * diameter2.sqrt().max(radius);
    let sphere = Circumsphere { center, radius };
    for i in 0..=d {
        let off = sphere.surface_offset(vertices.column(i).iter());
        if off.abs() > tol {
            return Err(Error::DegenerateSimplex(format!(
                "circumsphere residual {off:.3e} exceeds tolerance {tol:.3e}"
            )));
        }
    }
    Ok(sphere)
}

/// Circumsphere of a (d+1)-element vertex set of a dictionary.
pub fn circumsphere_of(x: &Dictionary, set: &VertexSet) -> Result<Circumsphere> {
    if set.len() != x.d() + 1 {
        return Err(Error::invalid(format!(
            "vertex set of size {} cannot span a {}-simplex",
            set.len(),
            x.d()
        )));
    }
    circumsphere(x.gather(set)?.view())
}
