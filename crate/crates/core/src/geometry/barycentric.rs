use ndarray::Array2;

use crate::error::{Error, Result};
use crate::geometry::{Dictionary, VertexSet, GEOM_TOL_REL};
use crate::linalg::{self, LuFactors};

/// The `(d+1) x (d+1)` system `B = [X_S; 1^T]` whose solution against
/// `[y; 1]` gives barycentric coordinates, together with its smallest
/// singular value (positive exactly when the vertices are affinely
/// independent).
#[derive(Debug, Clone)]
pub struct BarycentricSystem {
    b: Array2<f64>,
    sigma_min: f64,
    lu: Option<LuFactors>,
}

impl BarycentricSystem {
    pub fn new(x: &Dictionary, set: &VertexSet) -> Result<Self> {
        let d = x.d();
        if set.len() != d + 1 {
            return Err(Error::invalid(format!(
                "barycentric system needs {} vertices, got {}",
                d + 1,
                set.len()
            )));
        }
        let atoms = x.gather(set)?;
        let mut b = Array2::ones((d + 1, d + 1));
        for col in 0..=d {
            for row in 0..d {
                b[(row, col)] = atoms[(row, col)];
            }
        }
        let sigma_min = *linalg::singular_values(b.view())
            .last()
            .expect("nonempty spectrum");
        let lu = LuFactors::new(b.view(), 1e-14).ok();
        Ok(BarycentricSystem { b, sigma_min, lu })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.b
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    fn degeneracy_tol(&self) -> f64 {
        let scale = self.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        GEOM_TOL_REL * scale.max(1.0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma_min <= self.degeneracy_tol() || self.lu.is_none()
    }

    /// Coordinates of `y`: the solution of `B a = [y; 1]`. Entries may be
    /// negative when `y` lies outside the simplex.
    pub fn coordinates(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() + 1 != self.b.nrows() {
            return Err(Error::invalid("query dimension mismatch"));
        }
        if self.is_degenerate() {
            return Err(Error::DegenerateSimplex(format!(
                "sigma_min {:.3e} below tolerance",
                self.sigma_min
            )));
        }
        let mut rhs = y.to_vec();
        rhs.push(1.0);
        Ok(self.lu.as_ref().expect("checked non-degenerate").solve(&rhs))
    }
}

/// Barycentric coordinates of `y` in the simplex spanned by `set`.
pub fn barycentric(x: &Dictionary, set: &VertexSet, y: &[f64]) -> Result<Vec<f64>> {
    BarycentricSystem::new(x, set)?.coordinates(y)
}
