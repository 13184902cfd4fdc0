//! The user-facing theory layer: support extraction, the identification
//! threshold `rho* = d_Sy / C`, stability bounds, Jaccard support accuracy,
//! solution paths, and unified simplex identification across methods.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    boundary_distance, locality_gap_constant, BarycentricSystem, Dictionary, SimplexWeights,
    VertexSet, LOCATE_TOL,
};
use crate::lp::{chlp_locate, solve_exact_e, ChlpStatus};
use crate::oracle::{enumerate_delaunay, locate_simplex, DelaunayComplex};
use crate::qp::{solve_relaxed_r, QpOptions};
use crate::report::{SolveReport, SolveStatus};

/// Default threshold for calling an interior-point weight "nonzero".
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-6;

/// Regularization used when the identification bound is not computable.
pub const DEFAULT_RHO_FALLBACK: f64 = 1e-7;

/// Indices of the weights above `threshold`.
pub fn support(w: &[f64], threshold: f64) -> Result<VertexSet> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(format!(
            "support threshold must lie in (0,1), got {threshold}"
        )));
    }
    Ok(w.iter()
        .enumerate()
        .filter(|(_, &v)| v > threshold)
        .map(|(i, _)| i)
        .collect())
}

/// Jaccard index of two index sets; two empty sets count as identical.
pub fn jaccard(a: &VertexSet, b: &VertexSet) -> f64 {
    let union = a.union(b).len();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).len() as f64 / union as f64
}

/// The identification threshold and its ingredients.
#[derive(Debug, Clone)]
pub struct RhoBound {
    /// `d_Sy / C`: below this value the relaxed support equals the simplex.
    pub rho_star: f64,
    /// The Delaunay simplex strictly containing the query.
    pub simplex: VertexSet,
    /// Locality gap constant `C`.
    pub c: f64,
    /// Squared distance from the query to the simplex boundary.
    pub d_sy: f64,
}

/// Computes the identification threshold for a query strictly interior to a
/// Delaunay simplex, enumerating the triangulation first.
pub fn rho_bound(x: &Dictionary, y: &[f64]) -> Result<RhoBound> {
    let complex = enumerate_delaunay(x)?;
    rho_bound_with(x, &complex, y)
}

/// As [`rho_bound`], against a precomputed complex.
pub fn rho_bound_with(x: &Dictionary, complex: &DelaunayComplex, y: &[f64]) -> Result<RhoBound> {
    let hits = locate_simplex(complex, x, y)?;
    match hits.len() {
        0 => Err(Error::NotApplicable(
            "query lies outside the convex hull".into(),
        )),
        1 => {
            let simplex = hits.into_iter().next().unwrap();
            let coords = crate::geometry::barycentric(x, &simplex, y)?;
            if coords.iter().any(|&a| a <= LOCATE_TOL) {
                return Err(Error::NotApplicable(
                    "query sits on a face of its containing simplex".into(),
                ));
            }
            let c = locality_gap_constant(x, y)?;
            if c <= 0.0 {
                return Err(Error::NotApplicable(
                    "all atoms are equidistant from the query; the gap constant vanishes".into(),
                ));
            }
            let d_sy = boundary_distance(x, &simplex, y)?;
            Ok(RhoBound { rho_star: d_sy / c, simplex, c, d_sy })
        }
        n => Err(Error::NotApplicable(format!(
            "query lies on a face shared by {n} simplices"
        ))),
    }
}

/// Right-hand side of the perturbation bound
/// `(sqrt(rho)(sqrt(C_y) + sqrt(C_yt)) + eps) / sigma_min(B)`, where `B`
/// stacks the simplex atoms over a row of ones.
pub fn stability_bound(
    x: &Dictionary,
    set: &VertexSet,
    rho: f64,
    eps: f64,
    c_y: f64,
    c_yt: f64,
) -> Result<f64> {
    for (name, v) in [("rho", rho), ("eps", eps), ("c_y", c_y), ("c_yt", c_yt)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    let sys = BarycentricSystem::new(x, set)?;
    if sys.is_degenerate() {
        return Err(Error::DegenerateSimplex(format!(
            "sigma_min {:.3e} too small for a stability bound",
            sys.sigma_min()
        )));
    }
    Ok((rho.sqrt() * (c_y.sqrt() + c_yt.sqrt()) + eps) / sys.sigma_min())
}

/// One solve along a regularization sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathEntry {
    pub rho: f64,
    pub support: Option<VertexSet>,
    /// `||X w - y||` at this entry.
    pub recon_error: Option<f64>,
    pub report: Option<SolveReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionPath {
    pub entries: Vec<PathEntry>,
}

#[derive(Debug, Clone, Copy)]
pub struct PathOptions {
    pub threshold: f64,
    pub qp: QpOptions,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions { threshold: DEFAULT_SUPPORT_THRESHOLD, qp: QpOptions::default() }
    }
}

/// Solves the relaxed problem at every grid value (strictly decreasing,
/// positive), recording per-entry supports and reconstruction errors.
/// Per-entry failures are recorded in place rather than aborting the sweep.
pub fn solution_path(
    x: &Dictionary,
    y: &[f64],
    rho_grid: &[f64],
    opts: &PathOptions,
) -> Result<SolutionPath> {
    if rho_grid.is_empty() {
        return Err(Error::invalid("empty rho grid"));
    }
    if rho_grid.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::invalid("rho grid must be positive and finite"));
    }
    if rho_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("rho grid must be strictly decreasing"));
    }
    let mut entries = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        match solve_relaxed_r(x, y, rho, &opts.qp) {
            Ok(report) => {
                let xw = x.combine(&report.w);
                let recon = xw
                    .iter()
                    .zip(y)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                entries.push(PathEntry {
                    rho,
                    support: Some(support(&report.w, opts.threshold)?),
                    recon_error: Some(recon),
                    report: Some(report),
                    error: None,
                });
            }
            Err(e) => entries.push(PathEntry {
                rho,
                support: None,
                recon_error: None,
                report: None,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok(SolutionPath { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Relaxed,
    Exact,
    Chlp,
    Oracle,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relaxed" => Ok(Method::Relaxed),
            "exact" => Ok(Method::Exact),
            "chlp" => Ok(Method::Chlp),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::invalid(format!(
                "unknown method '{other}' (expected relaxed|exact|chlp|oracle)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Relaxed => "relaxed",
            Method::Exact => "exact",
            Method::Chlp => "chlp",
            Method::Oracle => "oracle",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct IdentifyOpts<'a> {
    /// Regularization for the relaxed route. Defaults to half the
    /// identification threshold when that is computable, else to
    /// [`DEFAULT_RHO_FALLBACK`].
    pub rho: Option<f64>,
    pub threshold: f64,
    pub qp: QpOptions,
    /// Also run the oracle and record agreement.
    pub verify: bool,
    /// Reuse a precomputed complex for oracle work.
    pub complex: Option<&'a DelaunayComplex>,
}

impl Default for IdentifyOpts<'_> {
    fn default() -> Self {
        IdentifyOpts {
            rho: None,
            threshold: DEFAULT_SUPPORT_THRESHOLD,
            qp: QpOptions::default(),
            verify: false,
            complex: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentificationResult {
    pub method: Method,
    pub support: VertexSet,
    pub weights: Option<SimplexWeights>,
    pub agrees_with_oracle: Option<bool>,
}

/// The oracle's answer for a query: the containing simplex, or — for a query
/// on a shared face — the vertices of that face (the intersection of all
/// incident simplices). `None` when the query is outside the hull.
fn oracle_support(x: &Dictionary, complex: &DelaunayComplex, y: &[f64]) -> Result<Option<VertexSet>> {
    let hits = locate_simplex(complex, x, y)?;
    Ok(match hits.len() {
        0 => None,
        1 => Some(hits.into_iter().next().unwrap()),
        _ => {
            let mut iter = hits.into_iter();
            let first = iter.next().unwrap();
            Some(iter.fold(first, |acc, s| acc.intersection(&s)))
        }
    })
}

/// Identifies the local support of `y` by the requested method.
///
/// Methods never fall back to one another silently; cross-method comparison
/// happens only through `opts.verify`. Queries outside the hull surface as
/// [`Error::OutsideHull`] for the exact and lifted-hull routes, while the
/// relaxed route returns the support of the projection regime.
pub fn identify(
    x: &Dictionary,
    y: &[f64],
    method: Method,
    opts: &IdentifyOpts<'_>,
) -> Result<IdentificationResult> {
    let need_oracle = opts.verify
        || method == Method::Oracle
        || (method == Method::Relaxed && opts.rho.is_none());
    let mut owned_complex: Option<DelaunayComplex> = None;
    if need_oracle && opts.complex.is_none() {
        match enumerate_delaunay(x) {
            Ok(c) => owned_complex = Some(c),
            // The oracle is optional for the relaxed default-rho path (the
            // fallback rho applies); it is mandatory for oracle work.
            Err(e) if method == Method::Oracle || opts.verify => return Err(e),
            Err(_) => {}
        }
    }
    let complex_ref: Option<&DelaunayComplex> = opts.complex.or(owned_complex.as_ref());

    let result = match method {
        Method::Relaxed => {
            // Half the identification bound, floored at the fallback value:
            // when rho* sinks toward the solver's numerical floor the
            // guaranteed regime is unidentifiable anyway (interior-point
            // near-zeros grow like gap/rho), and the fallback is the value
            // that works in practice.
            let rho = match opts.rho {
                Some(r) => r,
                None => match complex_ref
                    .map(|c| rho_bound_with(x, c, y))
                    .transpose()
                {
                    Ok(Some(b)) => (0.5 * b.rho_star).max(DEFAULT_RHO_FALLBACK),
                    _ => DEFAULT_RHO_FALLBACK,
                },
            };
            let report = solve_relaxed_r(x, y, rho, &opts.qp)?;
            if report.status != SolveStatus::Optimal {
                return Err(Error::SolverFailure(format!(
                    "relaxed solve ended with status {:?}",
                    report.status
                )));
            }
            let sup = support(&report.w, opts.threshold)?;
            IdentificationResult {
                method,
                support: sup,
                weights: Some(SimplexWeights::new(report.w, 10.0 * opts.qp.tol.max(1e-12))?),
                agrees_with_oracle: None,
            }
        }
        Method::Exact => {
            let report = solve_exact_e(x, y)?;
            match report.status {
                SolveStatus::Optimal => {}
                SolveStatus::Infeasible => {
                    return Err(Error::OutsideHull(
                        "exact reconstruction is infeasible outside the hull".into(),
                    ))
                }
                other => {
                    return Err(Error::SolverFailure(format!(
                        "exact solve ended with status {other:?}"
                    )))
                }
            }
            // Basic solutions carry exact zeros; no thresholding.
            let sup: VertexSet = report
                .w
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, _)| i)
                .collect();
            IdentificationResult {
                method,
                support: sup,
                weights: Some(SimplexWeights::new(report.w, 1e-9)?),
                agrees_with_oracle: None,
            }
        }
        Method::Chlp => {
            let r = chlp_locate(x, y)?;
            match r.status {
                ChlpStatus::OutsideHull => {
                    return Err(Error::OutsideHull(
                        "the lifted-hull program is unbounded outside the hull".into(),
                    ))
                }
                ChlpStatus::Identified | ChlpStatus::Degenerate => IdentificationResult {
                    method,
                    support: r.vertex_set,
                    weights: None,
                    agrees_with_oracle: None,
                },
            }
        }
        Method::Oracle => {
            let complex = complex_ref.expect("oracle complex was ensured above");
            match oracle_support(x, complex, y)? {
                Some(sup) => IdentificationResult {
                    method,
                    support: sup,
                    weights: None,
                    agrees_with_oracle: None,
                },
                None => {
                    return Err(Error::OutsideHull(
                        "query is in no simplex of the triangulation".into(),
                    ))
                }
            }
        }
    };

    let mut result = result;
    if opts.verify {
        let complex = complex_ref.expect("verification requires the oracle");
        result.agrees_with_oracle =
            oracle_support(x, complex, y)?.map(|oracle| oracle == result.support);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_triangle() -> Dictionary {
        Dictionary::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    fn four_point_dict() -> Dictionary {
        Dictionary::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![2.0, 2.0],
        ])
        .unwrap()
    }

    #[test]
    fn support_thresholding() {
        let s = support(&[0.5, 0.25, 0.25, 3e-9], 1e-6).unwrap();
        assert_eq!(s.as_slice(), &[0, 1, 2]);
        let s = support(&[1.0, 0.0, 0.0], 0.5).unwrap();
        assert_eq!(s.as_slice(), &[0]);
        let uniform = [0.25; 4];
        let s = support(&uniform, 1e-6).unwrap();
        assert_eq!(s.len(), 4);
        assert!(support(&[1.0], 0.0).is_err());
        assert!(support(&[1.0], 1.0).is_err());
    }

    #[test]
    fn jaccard_examples() {
        let a = VertexSet::new(vec![1, 2, 3]);
        let b = VertexSet::new(vec![1, 2, 4]);
        assert_relative_eq!(jaccard(&a, &b), 0.5);
        assert_relative_eq!(jaccard(&a, &a), 1.0);
        let c = VertexSet::new(vec![7, 8]);
        assert_relative_eq!(jaccard(&a, &c), 0.0);
        let e = VertexSet::new(vec![]);
        assert_relative_eq!(jaccard(&e, &e), 1.0);
    }

    #[test]
    fn rho_bound_compositions() {
        // d_Sy = 1/16 and C = 6 for the four-point dictionary.
        let x = four_point_dict();
        let b = rho_bound(&x, &[0.25, 0.25]).unwrap();
        assert_eq!(b.simplex.as_slice(), &[0, 1, 2]);
        assert_relative_eq!(b.c, 6.0, epsilon = 1e-12);
        assert_relative_eq!(b.d_sy, 1.0 / 16.0, epsilon = 1e-12);
        assert_relative_eq!(b.rho_star, (1.0 / 16.0) / 6.0, epsilon = 1e-12);

        // With only the triangle, C = 1/2: rho* = 1/8.
        let t = unit_triangle();
        let b = rho_bound(&t, &[0.25, 0.25]).unwrap();
        assert_relative_eq!(b.rho_star, 0.125, epsilon = 1e-12);
    }

    #[test]
    fn rho_bound_rejects_face_points() {
        let x = four_point_dict();
        // (0.5, 0.5) lies on the edge shared by the two triangles.
        assert!(matches!(
            rho_bound(&x, &[0.5, 0.5]),
            Err(Error::NotApplicable(_))
        ));
        assert!(matches!(
            rho_bound(&x, &[-1.0, -1.0]),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn stability_bound_behaviour() {
        let x = unit_triangle();
        let s = VertexSet::new(vec![0, 1, 2]);
        assert_eq!(stability_bound(&x, &s, 0.0, 0.0, 1.0, 1.0).unwrap(), 0.0);
        let b1 = stability_bound(&x, &s, 0.0, 0.1, 1.0, 1.0).unwrap();
        let b2 = stability_bound(&x, &s, 0.0, 0.2, 1.0, 1.0).unwrap();
        assert_relative_eq!(b2, 2.0 * b1, epsilon = 1e-12);

        let degenerate = Dictionary::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]])
            .unwrap();
        assert!(stability_bound(&degenerate, &VertexSet::new(vec![0, 1, 2]), 0.1, 0.1, 1.0, 1.0)
            .is_err());
    }

    #[test]
    fn identify_relaxed_agrees_with_oracle() {
        let x = four_point_dict();
        let opts = IdentifyOpts { rho: Some(0.005), verify: true, ..Default::default() };
        let r = identify(&x, &[0.25, 0.25], Method::Relaxed, &opts).unwrap();
        assert_eq!(r.support.as_slice(), &[0, 1, 2]);
        assert_eq!(r.agrees_with_oracle, Some(true));

        // Default rho (half the identification bound) works the same way.
        let opts = IdentifyOpts { verify: true, ..Default::default() };
        let r = identify(&x, &[0.25, 0.25], Method::Relaxed, &opts).unwrap();
        assert_eq!(r.support.as_slice(), &[0, 1, 2]);
        assert_eq!(r.agrees_with_oracle, Some(true));
    }

    #[test]
    fn shared_types_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<Dictionary>();
        check::<crate::geometry::SimplexWeights>();
        check::<VertexSet>();
        check::<crate::oracle::DelaunayComplex>();
        check::<crate::report::SolveReport>();
        check::<IdentificationResult>();
        check::<SolutionPath>();
    }

    #[test]
    fn identify_chlp_and_exact() {
        let x = four_point_dict();
        let r = identify(&x, &[1.0, 1.0], Method::Chlp, &IdentifyOpts::default()).unwrap();
        assert_eq!(r.support.as_slice(), &[1, 2, 3]);

        let r = identify(&x, &[0.25, 0.25], Method::Exact, &IdentifyOpts::default()).unwrap();
        assert_eq!(r.support.as_slice(), &[0, 1, 2]);

        assert!(matches!(
            identify(&x, &[-1.0, -1.0], Method::Exact, &IdentifyOpts::default()),
            Err(Error::OutsideHull(_))
        ));
        assert!(matches!(
            identify(&x, &[-1.0, -1.0], Method::Chlp, &IdentifyOpts::default()),
            Err(Error::OutsideHull(_))
        ));
    }

    #[test]
    fn identify_oracle_face_semantics() {
        let x = four_point_dict();
        let r = identify(&x, &[0.5, 0.5], Method::Oracle, &IdentifyOpts::default()).unwrap();
        // Shared edge: the intersection of the two incident triangles.
        assert_eq!(r.support.as_slice(), &[1, 2]);
    }

    #[test]
    fn identify_relaxed_outside_hull_returns_projection_support() {
        let x = unit_triangle();
        let opts = IdentifyOpts { rho: Some(1e-6), ..Default::default() };
        let r = identify(&x, &[2.0, 2.0], Method::Relaxed, &opts).unwrap();
        // The projection lands in the interior of the hypotenuse.
        assert_eq!(r.support.as_slice(), &[1, 2]);
    }

    #[test]
    fn solution_path_validates_grid() {
        let x = unit_triangle();
        let y = [0.25, 0.25];
        assert!(solution_path(&x, &y, &[], &PathOptions::default()).is_err());
        assert!(solution_path(&x, &y, &[1.0, 1.0], &PathOptions::default()).is_err());
        assert!(solution_path(&x, &y, &[1.0, -0.5], &PathOptions::default()).is_err());
        let p = solution_path(&x, &y, &[1.0, 0.1, 0.01], &PathOptions::default()).unwrap();
        assert_eq!(p.entries.len(), 3);
        assert!(p.entries.iter().all(|e| e.error.is_none()));
        // Reconstruction error shrinks along the sweep.
        let errs: Vec<f64> = p.entries.iter().map(|e| e.recon_error.unwrap()).collect();
        assert!(errs[2] <= errs[0] + 1e-12);
    }
}
