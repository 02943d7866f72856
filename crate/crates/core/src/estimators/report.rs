use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};

/// Variance of naive simulation divided by the estimator's per-replication variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceReduction {
    Finite(f64),
    /// The per-replication variance was zero.
    Unbounded,
    NotApplicable,
}

impl VarianceReduction {
    pub fn value(&self) -> Option<f64> {
        match self {
            VarianceReduction::Finite(v) => Some(*v),
            VarianceReduction::Unbounded => Some(f64::INFINITY),
            VarianceReduction::NotApplicable => None,
        }
    }
}

/// What the variance reduction is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// Naive Bernoulli variance `p̂(1 - p̂)` at the estimator's own mean.
    Bernoulli,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    /// Standard error of the estimate (sample std / √m).
    pub std_error: f64,
    /// `100 · std_error / estimate`; `None` when the estimate is zero.
    pub rel_error_pct: Option<f64>,
    pub variance_reduction: VarianceReduction,
    pub replications: u64,
    pub seed: u64,
    #[serde(skip)]
    pub runtime: Duration,
}

impl EstimateReport {
    pub fn relative_error_undefined(&self) -> bool {
        self.rel_error_pct.is_none()
    }
}

/// Sample mean and unbiased sample variance, two-pass.
pub fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (m - 1.0))
}

/// Summarises per-replication estimator values.
pub fn aggregate(values: &[f64], baseline: Baseline, seed: u64) -> Result<EstimateReport> {
    if values.len() < 2 {
        return Err(Error::Estimation(format!(
            "need at least two replications, got {}",
            values.len()
        )));
    }
    let m = values.len();
    let (mean, var) = mean_and_variance(values);
    let std_error = (var / m as f64).sqrt();
    let rel_error_pct = (mean != 0.0).then(|| 100.0 * std_error / mean);
    let variance_reduction = match baseline {
        Baseline::None => VarianceReduction::NotApplicable,
        Baseline::Bernoulli if var == 0.0 => VarianceReduction::Unbounded,
        Baseline::Bernoulli => VarianceReduction::Finite(mean * (1.0 - mean) / var),
    };
    Ok(EstimateReport {
        estimate: mean,
        std_error,
        rel_error_pct,
        variance_reduction,
        replications: m as u64,
        seed,
        runtime: Duration::ZERO,
    })
}
