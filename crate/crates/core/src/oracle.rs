//! Brute-force Delaunay triangulation by the empty-circumsphere property.
//!
//! Deliberately slow and trusted: every `(d+1)`-subset of atoms is tested for
//! an empty circumsphere, so the output can serve as ground truth for the
//! optimization-based identification routes. Guarded by a subset budget;
//! roughly `n <= 40` for `d <= 3` stays comfortable.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    circumsphere, BarycentricSystem, Circumsphere, Dictionary, VertexSet, LOCATE_TOL,
};
use crate::linalg;

/// Default cap on the number of enumerated `(d+1)`-subsets.
pub const DEFAULT_SUBSET_BUDGET: u64 = 2_000_000;

/// The full list of empty-circumsphere simplices of a dictionary.
///
/// When `unique` is false some empty sphere touches at least `d+2` atoms; the
/// simplex list is then overcomplete (all empty-sphere subsets are kept) and
/// callers decide how to interpret it.
#[derive(Debug, Clone)]
pub struct DelaunayComplex {
    simplices: Vec<VertexSet>,
    spheres: Vec<Circumsphere>,
    unique: bool,
}

/// Serialized form of a complex: only the combinatorics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub unique: bool,
    pub simplices: Vec<Vec<usize>>,
}

impl DelaunayComplex {
    pub fn simplices(&self) -> &[VertexSet] {
        &self.simplices
    }

    pub fn spheres(&self) -> &[Circumsphere] {
        &self.spheres
    }

    pub fn unique(&self) -> bool {
        self.unique
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            unique: self.unique,
            simplices: self.simplices.iter().map(|s| s.as_slice().to_vec()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("complex serializes")
    }
}

fn binomial_capped(n: u64, k: u64, cap: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return cap + 1;
        }
    }
    acc as u64
}

/// Enumerates the Delaunay simplices of `x` under the default budget.
pub fn enumerate_delaunay(x: &Dictionary) -> Result<DelaunayComplex> {
    enumerate_delaunay_with_budget(x, DEFAULT_SUBSET_BUDGET)
}

/// Enumerates the Delaunay simplices of `x`, erroring when the number of
/// `(d+1)`-subsets exceeds `max_subsets`.
pub fn enumerate_delaunay_with_budget(x: &Dictionary, max_subsets: u64) -> Result<DelaunayComplex> {
    x.require_triangulation_scale()?;
    let d = x.d();
    let n = x.n();

    let subsets = binomial_capped(n as u64, (d + 1) as u64, max_subsets);
    if subsets > max_subsets {
        return Err(Error::ResourceLimit(format!(
            "C({n}, {}) exceeds the subset budget {max_subsets}",
            d + 1
        )));
    }

    // The affine hull must be d-dimensional for any triangulation to exist.
    let mut centered = ndarray::Array2::zeros((d, n));
    let mut mean = vec![0.0; d];
    for i in 0..n {
        for (m, v) in mean.iter_mut().zip(x.atom(i).iter()) {
            *m += v / n as f64;
        }
    }
    for i in 0..n {
        for row in 0..d {
            centered[(row, i)] = x.atom(i)[row] - mean[row];
        }
    }
    if linalg::rank(centered.view(), crate::geometry::GEOM_TOL_REL) < d {
        return Err(Error::DegenerateInput(
            "affine hull of the dictionary is not d-dimensional".into(),
        ));
    }

    let tol = x.tol_geom();
    let mut simplices = Vec::new();
    let mut spheres = Vec::new();
    let mut unique = true;
    for combo in (0..n).combinations(d + 1) {
        let set = VertexSet::new(combo);
        let Ok(sphere) = circumsphere(x.gather(&set)?.view()) else {
            continue;
        };
        let mut empty = true;
        let mut cocircular = false;
        for j in 0..n {
            if set.contains(j) {
                continue;
            }
            let off = sphere.surface_offset(x.atom(j).iter());
            if off < -tol {
                empty = false;
                break;
            }
            if off.abs() <= tol {
                cocircular = true;
            }
        }
        if empty {
            if cocircular {
                unique = false;
            }
            simplices.push(set);
            spheres.push(sphere);
        }
    }
    Ok(DelaunayComplex { simplices, spheres, unique })
}

/// All simplices of `complex` containing `y`: barycentric coordinates at
/// least `-LOCATE_TOL` in every vertex. Interior points match exactly one
/// simplex, points on shared faces match every incident simplex, and points
/// outside the hull match none.
pub fn locate_simplex(complex: &DelaunayComplex, x: &Dictionary, y: &[f64]) -> Result<Vec<VertexSet>> {
    if y.len() != x.d() {
        return Err(Error::invalid("query dimension mismatch"));
    }
    let mut hits = Vec::new();
    for set in &complex.simplices {
        let sys = BarycentricSystem::new(x, set)?;
        if sys.is_degenerate() {
            continue;
        }
        let coords = sys.coordinates(y)?;
        if coords.iter().all(|&a| a >= -LOCATE_TOL) {
            hits.push(set.clone());
        }
    }
    Ok(hits)
}

/// The strict empty-sphere test for a single candidate simplex: true exactly
/// when every atom outside `set` lies strictly outside its circumsphere
/// (`||x_j - c|| >= R + tol`). Cocircular atoms fail the strict test.
pub fn is_delaunay_simplex(x: &Dictionary, set: &VertexSet) -> Result<bool> {
    let sphere = circumsphere(x.gather(set)?.view())?;
    if set.len() != x.d() + 1 {
        return Err(Error::invalid("vertex set does not span a d-simplex"));
    }
    let tol = x.tol_geom();
    for j in 0..x.n() {
        if set.contains(j) {
            continue;
        }
        if sphere.surface_offset(x.atom(j).iter()) < tol {
            return Ok(false);
        }
    }
    Ok(true)
}
