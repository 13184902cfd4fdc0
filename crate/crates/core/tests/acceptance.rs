//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured quantities. Run with `cargo test -p dl-core --test acceptance
//! -- --nocapture` to see the lines.

use std::time::Instant;

use dl_core::api::{
    jaccard, rho_bound_with, stability_bound, support, RhoBound,
};
use dl_core::experiments::{
    exp_bound_comparison, gen_dictionary, sample_from_hull, ExperimentConfig, RhoGrid,
};
use dl_core::geometry::{
    barycentric, boundary_distance, general_position_check, locality, locality_gap_constant,
    sample_simplex_weights, Dictionary, SimplexWeights, VertexSet,
};
use dl_core::lp::{chlp_locate, solve_exact_e, ChlpStatus};
use dl_core::oracle::{enumerate_delaunay, is_delaunay_simplex, DelaunayComplex};
use dl_core::qp::{kkt_direct_solve, kkt_reduced_solve, solve_relaxed_r, KktRhs, QpOptions};
use dl_core::report::SolveStatus;
use itertools::Itertools;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Hull samples that sit strictly inside a simplex with at least the given
/// barycentric margin, paired with their identification bounds.
fn margin_queries(
    x: &Dictionary,
    complex: &DelaunayComplex,
    count: usize,
    seed: u64,
    margin: f64,
) -> Vec<(Vec<f64>, RhoBound)> {
    let mut out = Vec::with_capacity(count);
    let mut stream = 0u64;
    while out.len() < count {
        stream += 1;
        assert!(stream < 100_000, "rejection sampling exhausted");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let w = sample_simplex_weights(x.n(), &mut rng).unwrap();
        let y = x.combine(w.as_slice());
        let Ok(bound) = rho_bound_with(x, complex, &y) else { continue };
        let coords = barycentric(x, &bound.simplex, &y).unwrap();
        if coords.iter().all(|&a| a >= margin) {
            out.push((y, bound));
        }
    }
    out
}

fn exact_support(w: &[f64]) -> VertexSet {
    w.iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Criterion 1: with rho at half the per-query bound, the relaxed support
/// equals the oracle simplex on every margin query, inside the time budget.
#[test]
fn a01_identification_at_half_bound() {
    let t0 = Instant::now();
    let x = gen_dictionary(10, 2, 42, true).unwrap();
    let complex = enumerate_delaunay(&x).unwrap();
    assert!(complex.unique());
    let queries = margin_queries(&x, &complex, 500, 4242, 1e-3);
    let opts = QpOptions::default();
    let mut matched = 0;
    for (y, bound) in &queries {
        let r = solve_relaxed_r(&x, y, 0.5 * bound.rho_star, &opts).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        if support(&r.w, 1e-6).unwrap() == bound.simplex {
            matched += 1;
        }
    }
    let elapsed = t0.elapsed();
    assert_eq!(matched, queries.len(), "support mismatches");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 01 identification at rho = 0.5 rho*: PASS ({matched}/{} in {elapsed:?})",
        queries.len()
    );
}

/// Criterion 2: the reconstruction bound ||X w_rho - y||^2 <= rho C holds on
/// every (query, rho) pair of the dyadic grid.
#[test]
fn a02_reconstruction_bound() {
    let x = gen_dictionary(10, 2, 42, true).unwrap();
    let complex = enumerate_delaunay(&x).unwrap();
    let queries = margin_queries(&x, &complex, 500, 4242, 1e-3);
    let grid: Vec<f64> = (-20..=0).rev().map(|k| 2f64.powi(k)).collect();
    let opts = QpOptions::default();
    let mut worst: f64 = f64::NEG_INFINITY;
    for (y, _) in &queries {
        let c = locality_gap_constant(&x, y).unwrap();
        for &rho in &grid {
            let r = solve_relaxed_r(&x, y, rho, &opts).unwrap();
            let err2 = sq_dist(&x.combine(&r.w), y);
            worst = worst.max(err2 - rho * c);
            assert!(err2 <= rho * c + 1e-8, "rho={rho}: {err2} > {}", rho * c);
        }
    }
    println!(
        "ACCEPTANCE 02 reconstruction bound: PASS (500 queries x {} rhos, worst slack {worst:.3e})",
        grid.len()
    );
}

/// Criterion 3: the structured elimination agrees with the dense oracle to
/// 1e-8 blockwise on 1000 randomized systems, with zero fallbacks.
#[test]
fn a03_kkt_equivalence() {
    let sizes = [(10usize, 2usize), (50, 5), (200, 10)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fallbacks = 0usize;
    let mut worst: f64 = 0.0;
    let rel = |a: &[f64], b: &[f64]| {
        let num: f64 = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
        let den: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        num / den.max(1e-12)
    };
    for trial in 0..1000 {
        let (n, d) = sizes[trial % sizes.len()];
        let x = gen_dictionary(n, d, 1000 + trial as u64, false).unwrap();
        let d_diag: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.random::<f64>() * 6.0 - 3.0))
            .collect();
        let rhs = KktRhs {
            b_w: (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect(),
            b_y: rng.random::<f64>() * 2.0 - 1.0,
            b_z: (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect(),
        };
        let direct = kkt_direct_solve(&x, &d_diag, &rhs).unwrap();
        let reduced = kkt_reduced_solve(&x, &d_diag, &rhs).unwrap();
        if reduced.fell_back {
            fallbacks += 1;
        }
        let e = rel(&reduced.solution.u_w, &direct.u_w)
            .max(rel(&reduced.solution.u_z, &direct.u_z))
            .max((reduced.solution.u_y - direct.u_y).abs() / direct.u_y.abs().max(1e-12));
        worst = worst.max(e);
        assert!(e <= 1e-8, "trial {trial} (n={n}, d={d}): blockwise error {e:.3e}");
    }
    assert_eq!(fallbacks, 0);
    println!("ACCEPTANCE 03 KKT elimination vs dense oracle: PASS (1000 systems, worst {worst:.3e}, 0 fallbacks)");
}

/// Criterion 4: the translation identity of the locality functional.
#[test]
fn a04_translation_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for trial in 0..1000 {
        let n = 5 + trial % 8;
        let d = 2 + trial % 3;
        let x = gen_dictionary(n, d, 5000 + trial as u64, false).unwrap();
        let w = sample_simplex_weights(n, &mut rng).unwrap();
        let y: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let yt = x.combine(w.as_slice());
        let l_y = locality(&x, &w, &y).unwrap();
        let l_yt = locality(&x, &w, &yt).unwrap();
        let residual = (l_yt - (l_y - sq_dist(&y, &yt))).abs();
        let allowed = 1e-10 * (1.0 + l_y.abs());
        worst = worst.max(residual / allowed);
        assert!(residual <= allowed, "trial {trial}: {residual:.3e} > {allowed:.3e}");
    }
    println!("ACCEPTANCE 04 translation identity: PASS (1000 instances, worst ratio {worst:.3e})");
}

/// Criterion 5: on cocircular regular polygons every feasible representation
/// has the same locality, and the degeneracy is witnessed.
#[test]
fn a05_cocircular_constancy() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for m in [5usize, 8, 12] {
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let x = Dictionary::from_rows(&rows).unwrap();

        let report = general_position_check(&x).unwrap();
        assert!(!report.in_general_position);
        let witness = report.witness.expect("cocircular witness");
        assert_eq!(witness.len(), 4);

        for _ in 0..3 {
            let w0 = sample_simplex_weights(m, &mut rng).unwrap();
            let y = x.combine(w0.as_slice());
            let expected = 1.0 - y.iter().map(|v| v * v).sum::<f64>();

            // All triangles containing y, as full-length weight vectors.
            let mut bases: Vec<Vec<f64>> = Vec::new();
            for combo in (0..m).combinations(3) {
                let set = VertexSet::new(combo.clone());
                let Ok(coords) = barycentric(&x, &set, &y) else { continue };
                if coords.iter().all(|&a| a >= 1e-9) {
                    let mut w = vec![0.0; m];
                    for (k, &i) in set.iter().enumerate() {
                        w[i] = coords[k];
                    }
                    bases.push(w);
                }
            }
            assert!(bases.len() >= 2, "m={m}: found {} containing triangles", bases.len());

            for _ in 0..100 {
                let mix = sample_simplex_weights(bases.len(), &mut rng).unwrap();
                let mut w = vec![0.0; m];
                for (b, &coef) in bases.iter().zip(mix.as_slice()) {
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi += coef * bi;
                    }
                }
                let w = SimplexWeights::new(w, 1e-9).unwrap();
                let l = locality(&x, &w, &y).unwrap();
                assert!(
                    (l - expected).abs() <= 1e-9,
                    "m={m}: locality {l} vs constant {expected}"
                );
                checked += 1;
            }
        }
    }
    println!("ACCEPTANCE 05 cocircular constancy + witness: PASS ({checked} representations)");
}

/// Criterion 6: for exterior queries projecting onto facet interiors, the
/// drift from the projection obeys the rho C bound and the small-rho support
/// is pinned between the facet and its incident simplex.
#[test]
fn a06_outside_hull() {
    let grid: Vec<f64> = (-20..=0).rev().map(|k| 2f64.powi(k)).collect();
    let opts = QpOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut done = 0;
    let mut seed = 0u64;
    while done < 200 {
        seed += 1;
        let x = gen_dictionary(8, 2, 600 + seed, true).unwrap();
        let Ok(complex) = enumerate_delaunay(&x) else { continue };
        if !complex.unique() {
            continue;
        }

        // Hull edges: (d-1)-faces used by exactly one simplex.
        let mut face_use: std::collections::HashMap<(usize, usize), Vec<usize>> =
            std::collections::HashMap::new();
        for (si, s) in complex.simplices().iter().enumerate() {
            let v = s.as_slice();
            for drop in 0..3 {
                let mut pair: Vec<usize> = (0..3).filter(|&k| k != drop).map(|k| v[k]).collect();
                pair.sort_unstable();
                face_use.entry((pair[0], pair[1])).or_default().push(si);
            }
        }
        let hull_edges: Vec<((usize, usize), usize)> = face_use
            .iter()
            .filter(|(_, used)| used.len() == 1)
            .map(|(e, used)| (*e, used[0]))
            .collect();

        let centroid: Vec<f64> = (0..2)
            .map(|r| (0..x.n()).map(|i| x.atom(i)[r]).sum::<f64>() / x.n() as f64)
            .collect();

        for &((ia, ib), si) in &hull_edges {
            if done >= 200 {
                break;
            }
            let a = x.atom(ia).to_vec();
            let b = x.atom(ib).to_vec();
            let t = 0.3 + 0.4 * rng.random::<f64>();
            let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let mut nrm = [-(b[1] - a[1]), b[0] - a[0]];
            let len = (nrm[0] * nrm[0] + nrm[1] * nrm[1]).sqrt();
            nrm = [nrm[0] / len, nrm[1] / len];
            if nrm[0] * (centroid[0] - p[0]) + nrm[1] * (centroid[1] - p[1]) > 0.0 {
                nrm = [-nrm[0], -nrm[1]];
            }
            let dist = 0.1 + 0.3 * rng.random::<f64>();
            let y = [p[0] + dist * nrm[0], p[1] + dist * nrm[1]];

            let c = locality_gap_constant(&x, &y).unwrap();
            for &rho in &grid {
                let r = solve_relaxed_r(&x, &y, rho, &opts).unwrap();
                let drift2 = sq_dist(&x.combine(&r.w), &p);
                assert!(
                    drift2 <= rho * c + 1e-8,
                    "seed {seed} rho {rho}: {drift2} > {}",
                    rho * c
                );
            }

            // Small-rho support: between the facet and its incident simplex.
            let d_f = sq_dist(&a, &p).min(sq_dist(&b, &p));
            let rho_small = (0.5 * d_f / c).min(1e-3);
            let r = solve_relaxed_r(&x, &y, rho_small, &opts).unwrap();
            let sup = support(&r.w, 1e-6).unwrap();
            let facet = VertexSet::new(vec![ia, ib]);
            let simplex = &complex.simplices()[si];
            assert!(
                facet.is_subset_of(&sup) && sup.is_subset_of(simplex),
                "seed {seed}: support {sup} outside [{facet}, {simplex}]"
            );
            done += 1;
        }
    }
    println!("ACCEPTANCE 06 exterior projection regime: PASS (200 queries)");
}

/// Criterion 7: the lifted-hull LP finds exactly the oracle simplex with a
/// full active set on every margin query across sizes.
#[test]
fn a07_chlp_oracle_agreement() {
    let mut total = 0;
    for &d in &[2usize, 3, 4] {
        for &n in &[10usize, 20, 40] {
            let x = gen_dictionary(n, d, (70 + d * 10 + n) as u64, true).unwrap();
            let complex = enumerate_delaunay(&x).unwrap();
            if !complex.unique() {
                panic!("random instance not in general position");
            }
            for (y, bound) in margin_queries(&x, &complex, 5, (700 + d * 10 + n) as u64, 1e-3) {
                let r = chlp_locate(&x, &y).unwrap();
                assert_eq!(r.status, ChlpStatus::Identified, "n={n}, d={d}");
                assert_eq!(r.vertex_set.len(), d + 1);
                assert_eq!(r.vertex_set, bound.simplex, "n={n}, d={d}");
                total += 1;
            }
        }
    }
    println!("ACCEPTANCE 07 lifted-hull vs oracle: PASS ({total} queries, all active sets of size d+1)");
}

/// Criterion 8: the exact solver always returns a basic solution with at
/// most d+1 exact nonzeros on the criterion-1 and criterion-7 instances.
#[test]
fn a08_exact_sparsity() {
    let mut checked = 0;
    // Criterion-1 instance set.
    let x = gen_dictionary(10, 2, 42, true).unwrap();
    let complex = enumerate_delaunay(&x).unwrap();
    for (y, _) in margin_queries(&x, &complex, 500, 4242, 1e-3) {
        let r = solve_exact_e(&x, &y).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!(exact_support(&r.w).len() <= 3);
        checked += 1;
    }
    // Criterion-7 instance set.
    for &d in &[2usize, 3, 4] {
        for &n in &[10usize, 20, 40] {
            let x = gen_dictionary(n, d, (70 + d * 10 + n) as u64, true).unwrap();
            let complex = enumerate_delaunay(&x).unwrap();
            for (y, _) in margin_queries(&x, &complex, 5, (700 + d * 10 + n) as u64, 1e-3) {
                let r = solve_exact_e(&x, &y).unwrap();
                assert_eq!(r.status, SolveStatus::Optimal);
                assert!(exact_support(&r.w).len() <= d + 1, "n={n}, d={d}");
                checked += 1;
            }
        }
    }
    println!("ACCEPTANCE 08 exact-solver sparsity: PASS ({checked} solves, all <= d+1 nonzeros)");
}

/// Criterion 9: the perturbation bound dominates the measured weight drift
/// for same-simplex query pairs.
#[test]
fn a09_stability_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let opts = QpOptions::default();
    let mut done = 0;
    let mut worst_ratio: f64 = 0.0;
    let mut seed = 0u64;
    while done < 200 {
        seed += 1;
        let x = gen_dictionary(10, 2, 900 + seed, true).unwrap();
        let Ok(complex) = enumerate_delaunay(&x) else { continue };
        let queries = margin_queries(&x, &complex, 4, 9000 + seed, 1e-2);
        for (y, bound) in queries {
            if done >= 200 {
                break;
            }
            let eps = if done % 2 == 0 { 1e-3 } else { 1e-2 };
            let mut pair = None;
            for _ in 0..50 {
                let angle = rng.random::<f64>() * std::f64::consts::TAU;
                let yt = [y[0] + eps * angle.cos(), y[1] + eps * angle.sin()];
                let Ok(b2) = rho_bound_with(&x, &complex, &yt) else { continue };
                if b2.simplex == bound.simplex {
                    pair = Some((yt, b2));
                    break;
                }
            }
            let Some((yt, b2)) = pair else { continue };
            let rho = 0.5 * bound.rho_star.min(b2.rho_star);
            let r1 = solve_relaxed_r(&x, &y, rho, &opts).unwrap();
            let r2 = solve_relaxed_r(&x, &yt, rho, &opts).unwrap();
            let measured = r1
                .w
                .iter()
                .zip(&r2.w)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let c_y = locality_gap_constant(&x, &y).unwrap();
            let c_yt = locality_gap_constant(&x, &yt).unwrap();
            let allowed = stability_bound(&x, &bound.simplex, rho, eps, c_y, c_yt).unwrap();
            assert!(
                measured <= allowed + 1e-12,
                "pair {done}: {measured:.3e} > {allowed:.3e}"
            );
            worst_ratio = worst_ratio.max(measured / allowed);
            done += 1;
        }
    }
    println!("ACCEPTANCE 09 stability bound: PASS (200 pairs, worst measured/bound {worst_ratio:.3})");
}

/// Criterion 10: the bound-comparison experiment shows a valid and typically
/// loose theory bound.
#[test]
fn a10_bound_comparison_pattern() {
    let cfg = ExperimentConfig::new(42, 10, 2, 500, RhoGrid { base: 2.0, k_min: -32, k_max: 2 });
    let rows = exp_bound_comparison(&cfg).unwrap();
    assert_eq!(rows.len(), 500);
    let mut ratios: Vec<f64> = Vec::new();
    for r in &rows {
        assert!(r.satisfies_bound(), "{r:?}");
        if let (Some(t), Some(e)) = (r.log10_rho_theory, r.log10_rho_empirical) {
            ratios.push(e - t);
        }
    }
    assert!(!ratios.is_empty());
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median_log = ratios[ratios.len() / 2];
    assert!(
        median_log > 0.0,
        "median empirical/theory ratio {:.3} not above 1",
        10f64.powf(median_log)
    );
    println!(
        "ACCEPTANCE 10 bound-comparison pattern: PASS ({} rows, {} skips, median ratio {:.1}x)",
        ratios.len(),
        rows.len() - ratios.len(),
        10f64.powf(median_log)
    );
}

/// Criterion 11: support agreement with the exact solver across the 1.5^k
/// grid at n = 250, using the exact solution itself (validated by the strict
/// empty-sphere test) as the containing simplex.
#[test]
fn a11_support_accuracy_pattern() {
    let grid: Vec<f64> = (-20..=19).rev().map(|k| 1.5f64.powi(k)).collect();
    let opts = QpOptions::default();
    for &d in &[3usize, 9] {
        let x = gen_dictionary(250, d, 110 + d as u64, false).unwrap();
        let queries = sample_from_hull(&x, 50, 1100 + d as u64).unwrap();

        struct Q {
            y: Vec<f64>,
            support: VertexSet,
            rho_star: f64,
        }
        let mut qs = Vec::new();
        for y in queries {
            let r = solve_exact_e(&x, &y).unwrap();
            assert_eq!(r.status, SolveStatus::Optimal);
            let sup = exact_support(&r.w);
            assert!(sup.len() <= d + 1);
            if sup.len() != d + 1 {
                continue;
            }
            // The exact support must be a genuine Delaunay simplex.
            assert!(is_delaunay_simplex(&x, &sup).unwrap(), "d={d}");
            let d_sy = boundary_distance(&x, &sup, &y).unwrap();
            let c = locality_gap_constant(&x, &y).unwrap();
            qs.push(Q { y, support: sup, rho_star: d_sy / c });
        }
        assert!(qs.len() >= 45, "d={d}: only {} usable queries", qs.len());
        let min_rho_star = qs.iter().map(|q| q.rho_star).fold(f64::INFINITY, f64::min);

        let mut below_min = 0;
        for &rho in &grid {
            let mut jac_sum = 0.0;
            for q in &qs {
                let r = solve_relaxed_r(&x, &q.y, rho, &opts).unwrap();
                let j = jaccard(&q.support, &support(&r.w, 1e-6).unwrap());
                jac_sum += j;
                if rho < q.rho_star {
                    assert_eq!(
                        j, 1.0,
                        "d={d}: query with rho*={} misidentified at rho={rho}",
                        q.rho_star
                    );
                }
            }
            let mean = jac_sum / qs.len() as f64;
            assert!(mean <= 1.0 + 1e-12);
            if rho <= min_rho_star {
                below_min += 1;
                assert_eq!(mean, 1.0, "d={d}: mean Jaccard below min rho* at rho={rho}");
            }
        }
        println!(
            "ACCEPTANCE 11 support accuracy (d={d}): PASS ({} queries, min rho* {:.2e}, {} grid points below it)",
            qs.len(),
            min_rho_star,
            below_min
        );
    }
}

/// Criterion 12: per-iteration wall time at fixed d grows subquadratically
/// in n (power-law exponent below 1.5).
#[test]
fn a12_per_iteration_scaling() {
    let opts = QpOptions::default();
    let ns = [100usize, 400, 1600];
    let mut per_iter = Vec::new();
    for &n in &ns {
        let x = gen_dictionary(n, 5, 1200 + n as u64, false).unwrap();
        let queries = sample_from_hull(&x, 3, 12000 + n as u64).unwrap();
        let mut best = f64::INFINITY;
        for y in &queries {
            for _ in 0..3 {
                let t0 = Instant::now();
                let r = solve_relaxed_r(&x, y, 1e-4, &opts).unwrap();
                let dt = t0.elapsed().as_secs_f64() / r.iters.max(1) as f64;
                best = best.min(dt);
            }
        }
        per_iter.push(best);
    }
    // Least-squares slope of log t against log n.
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = per_iter.iter().map(|t| t.ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let slope: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xm) * (y - ym))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
    assert!(
        slope < 1.5,
        "per-iteration scaling exponent {slope:.2} (times {per_iter:?})"
    );
    println!(
        "ACCEPTANCE 12 per-iteration scaling: PASS (exponent {slope:.2}, times {:?})",
        per_iter
    );
}
