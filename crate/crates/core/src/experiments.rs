//! Desk-scale experiment harness: data generation, the bound comparison,
//! support accuracy sweeps, method benchmarking, and solution-path dumps.
//!
//! Everything is seeded. Per-query randomness comes from a separate stream
//! of the master seed, so outputs are independent of evaluation order; for
//! every experiment except the wall-clock benchmark, identical configs
//! produce byte-identical output.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::api::{
    jaccard, rho_bound_with, solution_path, support, Method, PathOptions, RhoBound, SolutionPath,
};
use crate::error::{Error, Result};
use crate::geometry::{sample_simplex_weights, Dictionary, VertexSet};
use crate::io::format_g17;
use crate::lp::{chlp_locate, solve_exact_e, ChlpStatus};
use crate::oracle::{enumerate_delaunay, locate_simplex, DelaunayComplex};
use crate::qp::{solve_relaxed_r, QpOptions};
use crate::report::SolveStatus;

/// Geometric regularization grid `base^k`, `k = k_max` down to `k_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoGrid {
    pub base: f64,
    pub k_min: i32,
    pub k_max: i32,
}

impl RhoGrid {
    pub fn validate(&self) -> Result<()> {
        if !self.base.is_finite() || self.base <= 1.0 {
            return Err(Error::Parse(format!(
                "grid base must be finite and > 1, got {}",
                self.base
            )));
        }
        if self.k_min > self.k_max {
            return Err(Error::Parse(format!(
                "grid needs k_min <= k_max, got {}..{}",
                self.k_min, self.k_max
            )));
        }
        let v = self.values();
        if v.iter().any(|x| !x.is_finite() || *x <= 0.0) || v.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Parse(
                "grid values are not strictly decreasing positive finite numbers".into(),
            ));
        }
        Ok(())
    }

    /// Grid values, strictly decreasing.
    pub fn values(&self) -> Vec<f64> {
        (self.k_min..=self.k_max)
            .rev()
            .map(|k| self.base.powi(k))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Ci,
    Full,
}

impl Profile {
    /// Query count for the large sampled experiments (the full profile
    /// matches the original 10,000-point runs; CI scales them down).
    pub fn bound_comparison_queries(self) -> usize {
        match self {
            Profile::Ci => 500,
            Profile::Full => 10_000,
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ci" => Ok(Profile::Ci),
            "full" => Ok(Profile::Full),
            other => Err(Error::invalid(format!("unknown profile '{other}' (ci|full)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub num_queries: usize,
    pub rho_grid: RhoGrid,
    pub threshold: f64,
    pub methods: Vec<Method>,
    /// Fixed regularization for benchmark runs of the relaxed method.
    pub rho: Option<f64>,
    pub qp: QpOptions,
}

impl ExperimentConfig {
    pub fn new(seed: u64, n: usize, d: usize, num_queries: usize, rho_grid: RhoGrid) -> Self {
        ExperimentConfig {
            seed,
            n,
            d,
            num_queries,
            rho_grid,
            threshold: crate::api::DEFAULT_SUPPORT_THRESHOLD,
            methods: vec![Method::Relaxed, Method::Exact, Method::Chlp],
            rho: None,
            qp: QpOptions::default(),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic sub-seed for a tagged stage of an experiment.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    splitmix64(master ^ splitmix64(tag))
}

/// Uniform samples from the unit hypercube; with `normalize`, mean-centered
/// and scaled so the largest atom norm is exactly 1.
pub fn gen_dictionary(n: usize, d: usize, seed: u64, normalize: bool) -> Result<Dictionary> {
    if d == 0 || n < d + 1 {
        return Err(Error::invalid(format!(
            "dictionary generation needs n >= d+1 >= 2, got n={n}, d={d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rand::Rng::random::<f64>(&mut rng)).collect())
            .collect();
        if normalize {
            let mut mean = vec![0.0; d];
            for row in &rows {
                for (m, v) in mean.iter_mut().zip(row) {
                    *m += v / n as f64;
                }
            }
            for row in &mut rows {
                for (v, m) in row.iter_mut().zip(&mean) {
                    *v -= m;
                }
            }
            let max_norm = rows
                .iter()
                .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
                .fold(0.0f64, f64::max);
            if max_norm > 0.0 {
                for row in &mut rows {
                    for v in row.iter_mut() {
                        *v /= max_norm;
                    }
                }
            }
        }
        match Dictionary::from_rows(&rows) {
            Ok(x) => return Ok(x),
            // Duplicate atoms have probability zero; redraw if it happens.
            Err(_) => continue,
        }
    }
}

/// `m` hull points `y = X w` with `w` uniform on the simplex; query `q` uses
/// stream `q + 1` of the seed so results are order-independent.
pub fn sample_from_hull(x: &Dictionary, m: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if m == 0 {
        return Err(Error::invalid("query count must be positive"));
    }
    let mut queries = Vec::with_capacity(m);
    for q in 0..m {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(q as u64 + 1);
        let w = sample_simplex_weights(x.n(), &mut rng)?;
        queries.push(x.combine(w.as_slice()));
    }
    Ok(queries)
}

// ---------------------------------------------------------------------------
// Bound comparison
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCompareRow {
    pub query: usize,
    pub y: Vec<f64>,
    pub log10_rho_theory: Option<f64>,
    pub log10_rho_empirical: Option<f64>,
    pub skip_reason: Option<String>,
}

impl BoundCompareRow {
    pub fn is_skip(&self) -> bool {
        self.skip_reason.is_some()
    }

    /// Theory bound not exceeded by the empirically found grid value.
    pub fn satisfies_bound(&self) -> bool {
        match (self.log10_rho_theory, self.log10_rho_empirical) {
            (Some(t), Some(e)) => e >= t,
            _ => true,
        }
    }
}

/// Per query: the identification threshold `rho*` and the largest grid value
/// whose relaxed support matches the oracle simplex. Queries whose threshold
/// is undefined (faces, outside hull) or that no grid value identifies are
/// emitted as skip rows, so every query appears exactly once.
pub fn exp_bound_comparison(cfg: &ExperimentConfig) -> Result<Vec<BoundCompareRow>> {
    let x = gen_dictionary(cfg.n, cfg.d, cfg.seed, true)?;
    let complex = enumerate_delaunay(&x)?;
    let queries = sample_from_hull(&x, cfg.num_queries, derive_seed(cfg.seed, 1))?;
    let grid = cfg.rho_grid.values();

    let mut rows = Vec::with_capacity(queries.len());
    for (qi, y) in queries.iter().enumerate() {
        let bound: RhoBound = match rho_bound_with(&x, &complex, y) {
            Ok(b) => b,
            Err(Error::NotApplicable(reason)) => {
                rows.push(BoundCompareRow {
                    query: qi,
                    y: y.clone(),
                    log10_rho_theory: None,
                    log10_rho_empirical: None,
                    skip_reason: Some(reason),
                });
                continue;
            }
            Err(e) => return Err(e),
        };

        let mut empirical = None;
        for &rho in &grid {
            let Ok(report) = solve_relaxed_r(&x, y, rho, &cfg.qp) else { continue };
            if report.status != SolveStatus::Optimal {
                continue;
            }
            if support(&report.w, cfg.threshold)? == bound.simplex {
                empirical = Some(rho);
                break;
            }
        }
        match empirical {
            Some(rho) => rows.push(BoundCompareRow {
                query: qi,
                y: y.clone(),
                log10_rho_theory: Some(bound.rho_star.log10()),
                log10_rho_empirical: Some(rho.log10()),
                skip_reason: None,
            }),
            None => rows.push(BoundCompareRow {
                query: qi,
                y: y.clone(),
                log10_rho_theory: Some(bound.rho_star.log10()),
                log10_rho_empirical: None,
                skip_reason: Some("no grid value identified the simplex".into()),
            }),
        }
    }
    Ok(rows)
}

pub fn bound_compare_csv(rows: &[BoundCompareRow], d: usize) -> String {
    let mut out = String::from("query");
    for j in 0..d {
        out.push_str(&format!(",y_{j}"));
    }
    out.push_str(",log10_rho_theory,log10_rho_empirical,skip_reason\n");
    for r in rows {
        out.push_str(&r.query.to_string());
        for v in &r.y {
            out.push(',');
            out.push_str(&format_g17(*v));
        }
        out.push(',');
        if let Some(t) = r.log10_rho_theory {
            out.push_str(&format_g17(t));
        }
        out.push(',');
        if let Some(e) = r.log10_rho_empirical {
            out.push_str(&format_g17(e));
        }
        out.push(',');
        if let Some(s) = &r.skip_reason {
            out.push_str(s);
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Support accuracy
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportAccuracyRow {
    pub rho: f64,
    pub mean_l1_diff: f64,
    pub mean_jaccard: f64,
    pub n_queries: usize,
    pub n_failed: usize,
}

/// Per grid value: mean `||w_e - w_rho||_1` and mean support Jaccard against
/// the exact solver, over hull-sampled queries on an unnormalized hypercube
/// dictionary. Per-query solver failures are counted, not fatal.
pub fn exp_support_accuracy(cfg: &ExperimentConfig) -> Result<Vec<SupportAccuracyRow>> {
    let x = gen_dictionary(cfg.n, cfg.d, cfg.seed, false)?;
    let queries = sample_from_hull(&x, cfg.num_queries, derive_seed(cfg.seed, 2))?;

    struct ExactSide {
        w: Vec<f64>,
        support: VertexSet,
    }
    let mut exact: Vec<Option<ExactSide>> = Vec::with_capacity(queries.len());
    for y in &queries {
        let side = match solve_exact_e(&x, y) {
            Ok(r) if r.status == SolveStatus::Optimal => Some(ExactSide {
                support: r
                    .w
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(i, _)| i)
                    .collect(),
                w: r.w,
            }),
            _ => None,
        };
        exact.push(side);
    }

    let mut rows = Vec::new();
    for &rho in &cfg.rho_grid.values() {
        let mut l1_sum = 0.0;
        let mut jac_sum = 0.0;
        let mut ok = 0usize;
        let mut failed = 0usize;
        for (y, ex) in queries.iter().zip(&exact) {
            let Some(ex) = ex else {
                failed += 1;
                continue;
            };
            match solve_relaxed_r(&x, y, rho, &cfg.qp) {
                Ok(r) if r.status == SolveStatus::Optimal => {
                    let l1: f64 = ex.w.iter().zip(&r.w).map(|(a, b)| (a - b).abs()).sum();
                    l1_sum += l1;
                    jac_sum += jaccard(&ex.support, &support(&r.w, cfg.threshold)?);
                    ok += 1;
                }
                _ => failed += 1,
            }
        }
        rows.push(SupportAccuracyRow {
            rho,
            mean_l1_diff: if ok > 0 { l1_sum / ok as f64 } else { f64::NAN },
            mean_jaccard: if ok > 0 { jac_sum / ok as f64 } else { f64::NAN },
            n_queries: ok,
            n_failed: failed,
        });
    }
    Ok(rows)
}

pub fn support_accuracy_csv(rows: &[SupportAccuracyRow]) -> String {
    let mut out = String::from("rho,mean_l1_diff,mean_jaccard,n_queries,n_failed\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_g17(r.rho),
            format_g17(r.mean_l1_diff),
            format_g17(r.mean_jaccard),
            r.n_queries,
            r.n_failed
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Benchmarking
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: Method,
    pub n: usize,
    pub d: usize,
    pub wall_mean_seconds: f64,
    pub wall_std_seconds: f64,
    /// Fraction of queries agreeing with the oracle, when the oracle is
    /// feasible at this size.
    pub correctness: Option<f64>,
    pub queries: usize,
    /// Mean solver iterations (interior-point or simplex pivots).
    pub mean_iterations: f64,
}

/// Times each method over a grid of `(n, d)` cells, `cfg.num_queries` hull
/// samples per cell. Wall time covers the solve call only. Output rows are
/// deterministic except for the timing fields.
pub fn exp_scaling(
    cfg: &ExperimentConfig,
    n_list: &[usize],
    d_list: &[usize],
) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::new();
    let mut cell = 0u64;
    for &d in d_list {
        for &n in n_list {
            cell += 1;
            let x = gen_dictionary(n, d, derive_seed(cfg.seed, 100 + cell), false)?;
            let queries = sample_from_hull(&x, cfg.num_queries, derive_seed(cfg.seed, 200 + cell))?;
            let complex = enumerate_delaunay(&x).ok();
            let oracle_answer: Option<Vec<Option<VertexSet>>> = complex.as_ref().map(|c| {
                queries
                    .iter()
                    .map(|y| oracle_single(c, &x, y))
                    .collect()
            });
            // Regularization for the relaxed route, chosen outside the timed
            // region: the configured value, else half the per-query
            // identification bound (floored at the fallback), else the
            // fallback.
            let rho_of: Vec<f64> = queries
                .iter()
                .map(|y| {
                    cfg.rho.unwrap_or_else(|| {
                        complex
                            .as_ref()
                            .and_then(|c| rho_bound_with(&x, c, y).ok())
                            .map(|b| (0.5 * b.rho_star).max(crate::api::DEFAULT_RHO_FALLBACK))
                            .unwrap_or(crate::api::DEFAULT_RHO_FALLBACK)
                    })
                })
                .collect();

            for &method in &cfg.methods {
                if method == Method::Oracle {
                    continue;
                }
                let mut times = Vec::with_capacity(queries.len());
                let mut iters_sum = 0.0;
                let mut agree = 0usize;
                let mut compared = 0usize;
                for (qi, y) in queries.iter().enumerate() {
                    let t0 = Instant::now();
                    let outcome: Option<VertexSet> = match method {
                        Method::Relaxed => {
                            let r = solve_relaxed_r(&x, y, rho_of[qi], &cfg.qp)?;
                            iters_sum += r.iters as f64;
                            Some(support(&r.w, cfg.threshold)?)
                        }
                        Method::Exact => {
                            let r = solve_exact_e(&x, y)?;
                            iters_sum += r.iters as f64;
                            (r.status == SolveStatus::Optimal).then(|| {
                                r.w.iter()
                                    .enumerate()
                                    .filter(|(_, &v)| v != 0.0)
                                    .map(|(i, _)| i)
                                    .collect()
                            })
                        }
                        Method::Chlp => {
                            let r = chlp_locate(&x, y)?;
                            iters_sum += r.iterations as f64;
                            (r.status == ChlpStatus::Identified).then_some(r.vertex_set)
                        }
                        Method::Oracle => unreachable!(),
                    };
                    times.push(t0.elapsed().as_secs_f64());

                    if let (Some(ans), Some(Some(oracle))) =
                        (outcome, oracle_answer.as_ref().map(|o| &o[qi]))
                    {
                        compared += 1;
                        if &ans == oracle {
                            agree += 1;
                        }
                    }
                }
                let mean = times.iter().sum::<f64>() / times.len() as f64;
                let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>()
                    / times.len() as f64;
                records.push(BenchRecord {
                    method,
                    n,
                    d,
                    wall_mean_seconds: mean,
                    wall_std_seconds: var.sqrt(),
                    correctness: (compared > 0).then(|| agree as f64 / compared as f64),
                    queries: queries.len(),
                    mean_iterations: iters_sum / queries.len() as f64,
                });
            }
        }
    }
    Ok(records)
}

fn oracle_single(complex: &DelaunayComplex, x: &Dictionary, y: &[f64]) -> Option<VertexSet> {
    let hits = locate_simplex(complex, x, y).ok()?;
    (hits.len() == 1).then(|| hits.into_iter().next().unwrap())
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out =
        String::from("method,n,d,wall_mean_seconds,wall_std_seconds,correctness,queries,mean_iterations\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.method,
            r.n,
            r.d,
            format_g17(r.wall_mean_seconds),
            format_g17(r.wall_std_seconds),
            r.correctness.map(format_g17).unwrap_or_default(),
            r.queries,
            format_g17(r.mean_iterations)
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Solution paths
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathRecord {
    pub query: usize,
    pub y: Vec<f64>,
    pub path: SolutionPath,
}

/// Full solution-path data per query, for external plotting.
pub fn exp_solution_path(cfg: &ExperimentConfig) -> Result<Vec<PathRecord>> {
    let x = gen_dictionary(cfg.n, cfg.d, cfg.seed, true)?;
    let queries = sample_from_hull(&x, cfg.num_queries, derive_seed(cfg.seed, 3))?;
    let grid = cfg.rho_grid.values();
    let opts = PathOptions { threshold: cfg.threshold, qp: cfg.qp };
    let mut records = Vec::with_capacity(queries.len());
    for (qi, y) in queries.iter().enumerate() {
        records.push(PathRecord {
            query: qi,
            y: y.clone(),
            path: solution_path(&x, y, &grid, &opts)?,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> RhoGrid {
        RhoGrid { base: 2.0, k_min: -12, k_max: 0 }
    }

    #[test]
    fn gen_dictionary_normalization_and_determinism() {
        let x = gen_dictionary(10, 2, 7, true).unwrap();
        let max_norm = (0..10)
            .map(|i| x.atom(i).iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0f64, f64::max);
        assert!((max_norm - 1.0).abs() < 1e-12);

        let y = gen_dictionary(10, 2, 7, true).unwrap();
        assert_eq!(x.points(), y.points());
        let z = gen_dictionary(10, 2, 8, true).unwrap();
        assert_ne!(x.points(), z.points());

        assert!(gen_dictionary(2, 2, 7, true).is_err());
    }

    #[test]
    fn hull_samples_locate_inside() {
        let x = gen_dictionary(8, 2, 3, true).unwrap();
        let complex = enumerate_delaunay(&x).unwrap();
        let queries = sample_from_hull(&x, 20, 99).unwrap();
        for y in &queries {
            assert!(!locate_simplex(&complex, &x, y).unwrap().is_empty());
        }
        assert!(sample_from_hull(&x, 0, 99).is_err());
        assert_eq!(queries, sample_from_hull(&x, 20, 99).unwrap());
    }

    #[test]
    fn bound_comparison_accounting_and_inequality() {
        let mut cfg = ExperimentConfig::new(11, 8, 2, 40, RhoGrid { base: 2.0, k_min: -32, k_max: 2 });
        cfg.qp.tol = 1e-9;
        let rows = exp_bound_comparison(&cfg).unwrap();
        assert_eq!(rows.len(), 40);
        for r in &rows {
            assert!(r.satisfies_bound(), "row {:?}", r);
            assert!(r.is_skip() || (r.log10_rho_theory.is_some() && r.log10_rho_empirical.is_some()));
        }
        let csv = bound_compare_csv(&rows, 2);
        assert!(csv.starts_with("query,y_0,y_1,log10_rho_theory,log10_rho_empirical,skip_reason\n"));
        assert_eq!(csv.lines().count(), 41);
        // Byte-identical reruns.
        let again = bound_compare_csv(&exp_bound_comparison(&cfg).unwrap(), 2);
        assert_eq!(csv, again);
    }

    #[test]
    fn support_accuracy_rows_are_bounded() {
        let cfg = ExperimentConfig::new(5, 12, 2, 6, small_grid());
        let rows = exp_support_accuracy(&cfg).unwrap();
        assert_eq!(rows.len(), small_grid().values().len());
        for r in &rows {
            // Both vectors live on the simplex, so the l1 gap is at most 2.
            assert!(r.mean_l1_diff <= 2.0 + 1e-9, "{:?}", r);
            assert!(r.mean_jaccard <= 1.0 + 1e-12 && r.mean_jaccard >= 0.0);
            assert_eq!(r.n_queries + r.n_failed, 6);
        }
        // At the smallest rho the supports coincide.
        assert!((rows.last().unwrap().mean_jaccard - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_produces_one_record_per_cell() {
        let mut cfg = ExperimentConfig::new(2, 0, 0, 4, small_grid());
        cfg.methods = vec![Method::Relaxed, Method::Exact, Method::Chlp];
        let records = exp_scaling(&cfg, &[8, 12], &[2]).unwrap();
        assert_eq!(records.len(), 6);
        for r in &records {
            assert!(r.wall_mean_seconds >= 0.0);
            let c = r.correctness.expect("oracle feasible at this size");
            assert!((0.0..=1.0).contains(&c));
            assert!(c >= 0.75, "low correctness: {:?}", r);
        }
        let csv = bench_csv(&records);
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn solution_path_records() {
        let cfg = ExperimentConfig::new(4, 8, 2, 3, small_grid());
        let recs = exp_solution_path(&cfg).unwrap();
        assert_eq!(recs.len(), 3);
        for rec in &recs {
            assert_eq!(rec.path.entries.len(), small_grid().values().len());
            // Reconstruction error does not grow as rho shrinks.
            let errs: Vec<f64> = rec
                .path
                .entries
                .iter()
                .map(|e| e.recon_error.expect("entry solved"))
                .collect();
            for pair in errs.windows(2) {
                assert!(pair[1] <= pair[0] + 1e-8, "recon errors {errs:?}");
            }
        }
    }

    #[test]
    fn support_accuracy_l1_trend_is_nonincreasing() {
        // The trend holds until the agreement floor, where both solvers only
        // match to the scale of their own tolerances and the gap jitters.
        let cfg = ExperimentConfig::new(6, 12, 2, 5, RhoGrid { base: 2.0, k_min: -20, k_max: 0 });
        let rows = exp_support_accuracy(&cfg).unwrap();
        let floor = 5e-6;
        for pair in rows.windows(2) {
            assert!(
                pair[1].mean_l1_diff <= pair[0].mean_l1_diff + floor,
                "l1 at rho {} = {} rose above {} at rho {}",
                pair[1].rho,
                pair[1].mean_l1_diff,
                pair[0].mean_l1_diff,
                pair[0].rho
            );
        }
        // Large rho puts all mass on the nearest atom (l1 gap near its
        // maximum); small rho matches the exact solution.
        assert!(rows[0].mean_l1_diff > 0.1);
        assert!(rows.last().unwrap().mean_l1_diff <= 1e-4);
    }
}
