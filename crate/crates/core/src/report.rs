//! The per-solve report shared by the exact (LP) and relaxed (QP) solvers.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    IterationLimit,
    Infeasible,
    Unbounded,
}

impl SolveStatus {
    pub fn is_optimal(self) -> bool {
        matches!(self, SolveStatus::Optimal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

/// Weights, objective split, residuals and bookkeeping for one solve.
///
/// `objective = fit + rho * locality` for the relaxed problem; for the exact
/// problem the objective is the locality itself and `rho` is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub w: Vec<f64>,
    pub objective: f64,
    pub fit: f64,
    pub locality: f64,
    pub rho: Option<f64>,
    pub iters: usize,
    pub status: SolveStatus,
    pub residuals: Residuals,
    pub kkt_fallbacks: usize,
}

impl SolveReport {
    /// Reconstruction `X w` against the dictionary used for the solve.
    pub fn reconstruction(&self, x: &crate::geometry::Dictionary) -> Vec<f64> {
        x.combine(&self.w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_field_names() {
        let r = SolveReport {
            w: vec![0.5, 0.5],
            objective: 1.0,
            fit: 0.25,
            locality: 0.75,
            rho: Some(1.0),
            iters: 12,
            status: SolveStatus::Optimal,
            residuals: Residuals { primal: 1e-12, dual: 1e-11, gap: 1e-10 },
            kkt_fallbacks: 0,
        };
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["w", "objective", "fit", "locality", "rho", "iters", "status", "residuals", "kkt_fallbacks"] {
            assert!(v.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(v["status"], "optimal");
        assert!(v["residuals"].get("primal").is_some());
        let back: SolveReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn status_serialization_is_kebab_case() {
        assert_eq!(
            serde_json::to_string(&SolveStatus::IterationLimit).unwrap(),
            "\"iteration-limit\""
        );
    }
}
