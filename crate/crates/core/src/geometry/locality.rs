use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Dictionary, SimplexWeights};

/// Locality of a representation: `sum_i w_i ||x_i - y||^2`, evaluated with
/// the clamped/renormalized weights.
pub fn locality(x: &Dictionary, w: &SimplexWeights, y: &[f64]) -> Result<f64> {
    if w.len() != x.n() {
        return Err(Error::invalid(format!(
            "weight length {} does not match atom count {}",
            w.len(),
            x.n()
        )));
    }
    if y.len() != x.d() {
        return Err(Error::invalid(format!(
            "query dimension {} does not match d={}",
            y.len(),
            x.d()
        )));
    }
    let p = w.projected();
    Ok(p.iter()
        .enumerate()
        .map(|(i, &wi)| wi * x.sq_dist(i, y))
        .sum())
}

/// Spread of squared atom distances around `y`:
/// `C = max_i ||x_i - y||^2 - min_i ||x_i - y||^2`.
///
/// This constant controls the reconstruction error of the relaxed solver
/// (`||X w_rho - y||^2 <= rho * C`).
pub fn locality_gap_constant(x: &Dictionary, y: &[f64]) -> Result<f64> {
    if y.len() != x.d() {
        return Err(Error::invalid("query dimension mismatch"));
    }
    let dists = x.sq_dists(y);
    let max = dists.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let min = dists.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    Ok((max - min).max(0.0))
}

/// Uniform sample from the probability simplex via exponential spacings:
/// draw `n` standard exponentials and normalize by their sum.
pub fn sample_simplex_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SimplexWeights> {
    if n == 0 {
        return Err(Error::invalid("cannot sample weights of length 0"));
    }
    loop {
        let mut w: Vec<f64> = (0..n)
            .map(|_| {
                let u: f64 = loop {
                    let u = rng.random::<f64>();
                    if u > 0.0 {
                        break u;
                    }
                };
                -u.ln()
            })
            .collect();
        let sum: f64 = w.iter().sum();
        if sum > 0.0 {
            for v in &mut w {
                *v /= sum;
            }
            return SimplexWeights::new(w, 1e-12);
        }
        // All draws were exactly zero (astronomically unlikely); retry.
    }
}
