use ndarray::{Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::geometry::GEOM_TOL_REL;

/// A fixed dictionary of `n` atoms in `R^d`, stored column-major (column `i`
/// is atom `x_i`) with cached squared norms.
///
/// Construction rejects non-finite coordinates and duplicate atoms. The
/// diameter (largest pairwise atom distance) is precomputed and anchors all
/// relative geometric tolerances.
#[derive(Debug, Clone)]
pub struct Dictionary {
    points: Array2<f64>,
    sq_norms: Vec<f64>,
    diameter: f64,
}

impl Dictionary {
    /// Builds a dictionary from a `d x n` matrix whose columns are atoms.
    pub fn new(points: Array2<f64>) -> Result<Self> {
        let (d, n) = (points.nrows(), points.ncols());
        if d == 0 || n == 0 {
            return Err(Error::invalid(format!(
                "dictionary must be nonempty, got d={d}, n={n}"
            )));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("dictionary contains non-finite coordinates"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if points.column(i) == points.column(j) {
                    return Err(Error::invalid(format!("duplicate atoms at indices {i} and {j}")));
                }
            }
        }
        let sq_norms: Vec<f64> = (0..n)
            .map(|i| points.column(i).iter().map(|v| v * v).sum())
            .collect();
        let mut diameter: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let dist2: f64 = points
                    .column(i)
                    .iter()
                    .zip(points.column(j).iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                diameter = diameter.max(dist2);
            }
        }
        diameter = diameter.sqrt();
        Ok(Dictionary { points, sq_norms, diameter })
    }

    /// Builds a dictionary from atom rows (row `i` = atom `x_i`), the file
    /// convention.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("no atoms given"));
        }
        let d = rows[0].len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("atoms have inconsistent dimensions"));
        }
        let mut points = Array2::zeros((d, rows.len()));
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                points[(j, i)] = v;
            }
        }
        Self::new(points)
    }

    pub fn d(&self) -> usize {
        self.points.nrows()
    }

    pub fn n(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> ArrayView2<'_, f64> {
        self.points.view()
    }

    pub fn atom(&self, i: usize) -> ArrayView1<'_, f64> {
        self.points.column(i)
    }

    pub fn sq_norms(&self) -> &[f64] {
        &self.sq_norms
    }

    /// Largest pairwise atom distance.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Absolute cocircularity/degeneracy tolerance: relative tolerance times
    /// the diameter.
    pub fn tol_geom(&self) -> f64 {
        GEOM_TOL_REL * self.diameter
    }

    /// Squared distance from atom `i` to `y`, using the cached norms:
    /// `||x_i||^2 - 2 x_i.y + ||y||^2`, clamped at zero.
    pub fn sq_dist(&self, i: usize, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.d());
        let cross: f64 = self.points.column(i).iter().zip(y).map(|(a, b)| a * b).sum();
        let y_sq: f64 = y.iter().map(|v| v * v).sum();
        (self.sq_norms[i] - 2.0 * cross + y_sq).max(0.0)
    }

    /// Squared distances from every atom to `y`.
    pub fn sq_dists(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|i| self.sq_dist(i, y)).collect()
    }

    /// `X w` for a full-length weight vector.
    pub fn combine(&self, w: &[f64]) -> Vec<f64> {
        debug_assert_eq!(w.len(), self.n());
        let mut out = vec![0.0; self.d()];
        for (i, &wi) in w.iter().enumerate() {
            if wi != 0.0 {
                for (o, v) in out.iter_mut().zip(self.points.column(i).iter()) {
                    *o += wi * v;
                }
            }
        }
        out
    }

    /// `X^T v` for a length-d vector.
    pub fn transpose_apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.d());
        (0..self.n())
            .map(|i| self.points.column(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Errors unless `n >= d + 1`, the minimum for triangulation work.
    pub fn require_triangulation_scale(&self) -> Result<()> {
        if self.n() < self.d() + 1 {
            Err(Error::invalid(format!(
                "need n >= d+1 atoms for triangulation operations, got n={}, d={}",
                self.n(),
                self.d()
            )))
        } else {
            Ok(())
        }
    }

    /// Atoms of `set` as a `d x |set|` matrix.
    pub fn gather(&self, set: &VertexSet) -> Result<Array2<f64>> {
        let d = self.d();
        let mut out = Array2::zeros((d, set.len()));
        for (k, &i) in set.iter().enumerate() {
            if i >= self.n() {
                return Err(Error::invalid(format!(
                    "vertex index {i} out of range for n={}",
                    self.n()
                )));
            }
            out.column_mut(k).assign(&self.points.column(i));
        }
        Ok(out)
    }
}

/// A weight vector on (a tolerance neighborhood of) the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights {
    w: Vec<f64>,
    tol_feas: f64,
}

impl SimplexWeights {
    pub const DEFAULT_TOL_FEAS: f64 = 1e-6;

    /// Validates `w_i >= -tol_feas` and `|sum w - 1| <= tol_feas`.
    pub fn new(w: Vec<f64>, tol_feas: f64) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::invalid("empty weight vector"));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite weight"));
        }
        if let Some(v) = w.iter().find(|&&v| v < -tol_feas) {
            return Err(Error::invalid(format!("weight {v} below -{tol_feas}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > tol_feas {
            return Err(Error::invalid(format!("weights sum to {sum}, not 1")));
        }
        Ok(SimplexWeights { w, tol_feas })
    }

    pub fn with_default_tol(w: Vec<f64>) -> Result<Self> {
        Self::new(w, Self::DEFAULT_TOL_FEAS)
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn tol_feas(&self) -> f64 {
        self.tol_feas
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.w
    }

    /// Hard projection: clamp negatives to zero and renormalize, landing
    /// exactly on the simplex.
    pub fn projected(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.w.iter().map(|&v| v.max(0.0)).collect();
        let sum: f64 = p.iter().sum();
        if sum > 0.0 {
            for v in &mut p {
                *v /= sum;
            }
        } else {
            // All weights clamped away; fall back to uniform.
            let u = 1.0 / p.len() as f64;
            for v in &mut p {
                *v = u;
            }
        }
        p
    }
}

/// A sorted, duplicate-free set of atom indices identifying a simplex or a
/// support.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    indices: Vec<usize>,
}

impl VertexSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        VertexSet { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.indices.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(
            self.indices
                .iter()
                .copied()
                .filter(|i| other.contains(*i))
                .collect(),
        )
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v = self.indices.clone();
        v.extend_from_slice(&other.indices);
        VertexSet::new(v)
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

impl std::fmt::Display for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(VertexSet::new(Vec::<usize>::deserialize(deserializer)?))
    }
}

impl serde::Serialize for SimplexWeights {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.w.serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for SimplexWeights {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let w = Vec::<f64>::deserialize(deserializer)?;
        SimplexWeights::with_default_tol(w).map_err(serde::de::Error::custom)
    }
}
