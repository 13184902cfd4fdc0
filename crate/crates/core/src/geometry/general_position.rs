use itertools::Itertools;
use ndarray::Array2;

use crate::error::Result;
use crate::geometry::{circumsphere, Dictionary, VertexSet, GEOM_TOL_REL};
use crate::linalg;

/// Outcome of the exhaustive general-position check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralPositionReport {
    pub in_general_position: bool,
    /// `d+2` indices lying on a common hypersphere, when found.
    pub witness: Option<VertexSet>,
    /// True when the affine hull of the atoms has dimension below `d`.
    pub affine_hull_deficient: bool,
}

/// Checks whether any `d+2` atoms are cocircular and whether the affine hull
/// is full-dimensional. Exhaustive over all `(d+1)`-subsets; desk scale only.
pub fn general_position_check(x: &Dictionary) -> Result<GeneralPositionReport> {
    let d = x.d();
    let n = x.n();

    // Affine-hull rank of the centered atom matrix.
    let mut centered = Array2::zeros((d, n));
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
    if linalg::rank(centered.view(), GEOM_TOL_REL) < d {
        return Ok(GeneralPositionReport {
            in_general_position: false,
            witness: None,
            affine_hull_deficient: true,
        });
    }

    if n >= d + 2 {
        let tol = x.tol_geom();
        for combo in (0..n).combinations(d + 1) {
            let set = VertexSet::new(combo.clone());
            let Ok(sphere) = circumsphere(x.gather(&set)?.view()) else {
                // Affinely dependent subsets define no sphere.
                continue;
            };
            for j in 0..n {
                if set.contains(j) {
                    continue;
                }
                let off = sphere.surface_offset(x.atom(j).iter());
                if off.abs() <= tol {
                    let mut witness = combo;
                    witness.push(j);
                    return Ok(GeneralPositionReport {
                        in_general_position: false,
                        witness: Some(VertexSet::new(witness)),
                        affine_hull_deficient: false,
                    });
                }
            }
        }
    }

    Ok(GeneralPositionReport {
        in_general_position: true,
        witness: None,
        affine_hull_deficient: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_points_on_unit_circle() {
        let x = Dictionary::from_rows(&[
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ])
        .unwrap();
        let r = general_position_check(&x).unwrap();
        assert!(!r.in_general_position);
        assert_eq!(r.witness.unwrap().as_slice(), &[0, 1, 2, 3]);
        assert!(!r.affine_hull_deficient);
    }

    #[test]
    fn generic_four_points_pass() {
        // Verified by the exhaustive check itself: no circumcircle of any
        // triple passes through the fourth point.
        let x = Dictionary::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![2.0, 2.0],
        ])
        .unwrap();
        let r = general_position_check(&x).unwrap();
        assert!(r.in_general_position);
        assert!(r.witness.is_none());
    }

    #[test]
    fn collinear_points_fail_on_affine_hull() {
        let x = Dictionary::from_rows(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        let r = general_position_check(&x).unwrap();
        assert!(!r.in_general_position);
        assert!(r.affine_hull_deficient);
        assert!(r.witness.is_none());
    }
}
