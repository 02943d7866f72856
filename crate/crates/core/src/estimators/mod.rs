//! Monte Carlo estimators of `P(L_n > nb)` and `E[L_n | L_n > nb]`.
//!
//! * naive: draw `V`, then binomial default counts per sub-portfolio.
//! * importance: Pareto-spliced proposal for `V` followed by an exponential
//!   twist of the conditional default probabilities.
//! * conditional: integrate `V` out analytically given the exponential
//!   draws `R_i`, returning `P(V > O_(k))`.

mod conditional;
mod importance;
mod naive;
pub mod report;
pub mod runner;
pub mod twist;

use runner::Stopwatch;

use serde::{Deserialize, Serialize};

use crate::archimedean::{GumbelGenerator, LtGenerator};
use crate::error::{Error, Result};
use crate::portfolio::{DefaultScale, Portfolio};
use crate::rng::StreamFactory;

pub use conditional::ConditionalScratch;
pub use importance::{ImportanceSampler, IsOutcome, VDraw};
pub use report::{aggregate, Baseline, EstimateReport, VarianceReduction};
pub use twist::{solve_theta_star, solve_theta_star_log, LogProb, TwistState};

pub const DEFAULT_X0: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Naive,
    #[serde(alias = "is")]
    Importance,
    #[serde(alias = "condmc")]
    Conditional,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Naive => "naive",
            EstimatorKind::Importance => "importance",
            EstimatorKind::Conditional => "conditional",
        }
    }

    fn stream_label(&self) -> u16 {
        match self {
            EstimatorKind::Naive => 1,
            EstimatorKind::Importance => 2,
            EstimatorKind::Conditional => 3,
        }
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(EstimatorKind::Naive),
            "importance" | "is" => Ok(EstimatorKind::Importance),
            "conditional" | "condmc" => Ok(EstimatorKind::Conditional),
            other => Err(Error::Config(format!("unknown estimator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EstimatorConfig<G: LtGenerator = GumbelGenerator> {
    pub portfolio: Portfolio,
    pub generator: G,
    pub scale: DefaultScale,
    pub b: f64,
    pub replications: u64,
    pub seed: u64,
    /// Splice point of the importance-sampling proposal for `V`.
    pub x0: f64,
    pub threads: usize,
    pub kind: EstimatorKind,
}

impl<G: LtGenerator> EstimatorConfig<G> {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return Err(Error::Config(format!(
                "need at least 2 replications, got {}",
                self.replications
            )));
        }
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::Config(format!(
                "x0 must be positive, got {}",
                self.x0
            )));
        }
        let cbar = self.portfolio.mean_exposure();
        if !(self.b >= 0.0 && self.b < cbar) {
            return Err(Error::Config(format!(
                "loss level {} must lie in [0, c̄) with c̄ = {cbar}",
                self.b
            )));
        }
        self.portfolio.check_attainable(self.b)?;
        self.scale.resolve(&self.portfolio)?;
        Ok(())
    }
}

/// A portfolio, generator and loss level with everything the per-replication
/// samplers need precomputed.
#[derive(Debug, Clone)]
pub struct LossModel<G: LtGenerator = GumbelGenerator> {
    portfolio: Portfolio,
    generator: G,
    law: G::Mixing,
    f_n: f64,
    threshold: f64,
    /// `φ(1 - l_j f_n)` per sub-portfolio.
    group_phi: Vec<f64>,
    fixed_index: Option<u64>,
}

impl<G: LtGenerator> LossModel<G> {
    pub fn new(portfolio: Portfolio, generator: G, scale: DefaultScale, b: f64) -> Result<Self> {
        portfolio.check_attainable(b)?;
        let f_n = scale.resolve(&portfolio)?;
        let group_phi = portfolio
            .groups()
            .iter()
            .map(|g| generator.phi_one_minus(g.scale * f_n))
            .collect();
        let fixed_index = portfolio.threshold_index(b)?;
        Ok(LossModel {
            law: generator.mixing_law(),
            threshold: portfolio.threshold(b),
            portfolio,
            generator,
            f_n,
            group_phi,
            fixed_index,
        })
    }

    pub fn from_config(config: &EstimatorConfig<G>) -> Result<Self> {
        config.validate()?;
        Self::new(
            config.portfolio.clone(),
            config.generator.clone(),
            config.scale,
            config.b,
        )
    }

    pub fn portfolio(&self) -> &Portfolio {
        &self.portfolio
    }

    pub fn generator(&self) -> &G {
        &self.generator
    }

    pub fn mixing_law(&self) -> &G::Mixing {
        &self.law
    }

    pub fn f_n(&self) -> f64 {
        self.f_n
    }

    /// `n b`
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Per-group default probabilities given the raw mixing variable `V = v`.
    pub fn default_probs(&self, v: f64) -> Vec<LogProb> {
        self.group_phi
            .iter()
            .map(|phi| LogProb::from_hazard(v * phi))
            .collect()
    }
}

/// Runs the tail-probability estimator selected by `config.kind`.
pub fn estimate<G: LtGenerator>(config: &EstimatorConfig<G>) -> Result<EstimateReport> {
    let model = LossModel::from_config(config)?;
    let streams = StreamFactory::new(config.seed).split(config.kind.stream_label());
    let started = Stopwatch::start();
    let values = match config.kind {
        EstimatorKind::Naive => runner::replicate(
            config.replications,
            &streams,
            config.threads,
            |_: &mut (), rng| Ok(if model.naive_one_rep(rng)? { 1.0 } else { 0.0 }),
        )?,
        EstimatorKind::Importance => {
            let sampler = ImportanceSampler::new(&model, config.x0)?;
            runner::replicate(
                config.replications,
                &streams,
                config.threads,
                |_: &mut (), rng| sampler.tail_one_rep(rng),
            )?
        }
        EstimatorKind::Conditional => {
            let n = model.portfolio.n() as f64;
            if model.f_n < 0.1 / n {
                log::warn!(
                    "f_n = {:e} decays faster than 1/n; conditional Monte Carlo may lose bounded relative error",
                    model.f_n
                );
            }
            runner::replicate(
                config.replications,
                &streams,
                config.threads,
                |scratch, rng| model.condmc_one_rep(rng, scratch),
            )?
        }
    };
    let mut report = aggregate(&values, Baseline::Bernoulli, config.seed)?;
    report.runtime = started.elapsed();
    Ok(report)
}

/// Expected shortfall `E[L_n | L_n > nb]` from importance-sampled paths.
///
/// Ratio estimator `nb + Σ (L_i - nb)_+ w_i / Σ 1{L_i > nb} w_i`; the standard
/// error comes from the delta method.
pub fn expected_shortfall<G: LtGenerator>(config: &EstimatorConfig<G>) -> Result<EstimateReport> {
    let model = LossModel::from_config(config)?;
    let sampler = ImportanceSampler::new(&model, config.x0)?;
    let streams = StreamFactory::new(config.seed).split(EstimatorKind::Importance.stream_label());
    let started = Stopwatch::start();
    let outcomes = runner::replicate(
        config.replications,
        &streams,
        config.threads,
        |_: &mut (), rng| sampler.one_rep(rng),
    )?;
    let mut report = shortfall_from_outcomes(&outcomes, model.threshold, config.seed)?;
    report.runtime = started.elapsed();
    Ok(report)
}

pub fn shortfall_from_outcomes(
    outcomes: &[IsOutcome],
    threshold: f64,
    seed: u64,
) -> Result<EstimateReport> {
    let m = outcomes.len();
    let excess: Vec<f64> = outcomes
        .iter()
        .map(|o| {
            if o.exceeded {
                (o.loss - threshold) * o.weight()
            } else {
                0.0
            }
        })
        .collect();
    let hits: Vec<f64> = outcomes
        .iter()
        .map(|o| if o.exceeded { o.weight() } else { 0.0 })
        .collect();
    if !hits.iter().any(|&h| h > 0.0) {
        return Err(Error::Estimation(format!(
            "no replication out of {m} exceeded the loss threshold {threshold}; increase the replication count"
        )));
    }
    let num = excess.iter().sum::<f64>() / m as f64;
    let den = hits.iter().sum::<f64>() / m as f64;
    let ratio = num / den;
    // delta method: Var(num/den) ≈ Var(excess - ratio * hits) / (m den²)
    let resid: Vec<f64> = excess
        .iter()
        .zip(&hits)
        .map(|(a, h)| a - ratio * h)
        .collect();
    let (_, resid_var) = report::mean_and_variance(&resid);
    let std_error = (resid_var / m as f64).sqrt() / den;
    let estimate = threshold + ratio;
    Ok(EstimateReport {
        estimate,
        std_error,
        rel_error_pct: Some(100.0 * std_error / estimate),
        variance_reduction: VarianceReduction::NotApplicable,
        replications: m as u64,
        seed,
        runtime: std::time::Duration::ZERO,
    })
}
