//! Experiment configuration and orchestration behind the command-line tool.
//!
//! An [`ExperimentConfig`] expands into a grid of [`Scenario`]s (α × n × b);
//! each scenario is run through every requested estimator and reported as one
//! row. Failures are kept per row so one bad cell does not abort a table.

mod output;
mod presets;

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::archimedean::GumbelGenerator;
use crate::asymptotics::{self, AsymptoticInputs};
use crate::error::{Error, Result};
use crate::estimators::{self, EstimateReport, EstimatorConfig, EstimatorKind, DEFAULT_X0};
use crate::portfolio::{DefaultScale, Portfolio, SubPortfolio};

pub use output::{write_es_rows, write_estimate_rows, OutputFormat, ESTIMATE_COLUMNS, ES_COLUMNS};
pub use presets::{preset, Table};

/// A scalar or a list in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub alpha: OneOrMany<f64>,
    pub groups: Vec<SubPortfolio>,
    /// Overrides the obligor count of a single-group portfolio.
    pub n: Option<OneOrMany<u64>>,
    pub default_scale: DefaultScale,
    pub b: OneOrMany<f64>,
    pub methods: Vec<EstimatorKind>,
    pub replications: u64,
    pub seed: u64,
    pub threads: usize,
    pub x0: f64,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    /// Add the sharp asymptotic to every estimate row.
    pub asymptotic: bool,
    /// Fill the `runtime_ms` column (makes output non-reproducible).
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            alpha: OneOrMany::One(1.5),
            groups: vec![SubPortfolio {
                exposure: 1.0,
                scale: 0.5,
                count: 500,
            }],
            n: None,
            default_scale: DefaultScale::Reciprocal,
            b: OneOrMany::One(0.8),
            methods: vec![EstimatorKind::Importance, EstimatorKind::Conditional],
            replications: 50_000,
            seed: 20_220_420,
            threads: 1,
            x0: DEFAULT_X0,
            format: OutputFormat::Csv,
            output: None,
            asymptotic: false,
            timing: false,
        }
    }
}

/// One cell of an experiment grid.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub alpha: f64,
    pub portfolio: Portfolio,
    pub scale: DefaultScale,
    pub b: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Expands the α × n × b grid, validating every cell.
    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        if self.replications < 2 {
            return Err(Error::Config(format!(
                "replications: need at least 2, got {}",
                self.replications
            )));
        }
        if self.threads == 0 {
            return Err(Error::Config("threads: must be at least 1".into()));
        }
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::Config(format!(
                "x0: must be positive, got {}",
                self.x0
            )));
        }
        let alphas = self.alpha.to_vec();
        let levels = self.b.to_vec();
        if alphas.is_empty() || levels.is_empty() {
            return Err(Error::Config("alpha and b need at least one value".into()));
        }
        let base = Portfolio::new(self.groups.clone()).map_err(|e| field("groups", e))?;
        let portfolios = match &self.n {
            None => vec![base],
            Some(sizes) => {
                if self.groups.len() != 1 {
                    return Err(Error::Config(
                        "n: only applies to single-group portfolios".into(),
                    ));
                }
                let g = self.groups[0];
                sizes
                    .to_vec()
                    .into_iter()
                    .map(|n| {
                        Portfolio::homogeneous(g.exposure, g.scale, n).map_err(|e| field("n", e))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let mut out = Vec::new();
        for &alpha in &alphas {
            GumbelGenerator::new(alpha).map_err(|e| field("alpha", e))?;
            for portfolio in &portfolios {
                self.default_scale
                    .resolve(portfolio)
                    .map_err(|e| field("default_scale", e))?;
                for &b in &levels {
                    let cbar = portfolio.mean_exposure();
                    if !(b > 0.0 && b < cbar) {
                        return Err(Error::Config(format!(
                            "b: {b} must lie in (0, c̄) with c̄ = {cbar}"
                        )));
                    }
                    portfolio.check_attainable(b).map_err(|e| field("b", e))?;
                    out.push(Scenario {
                        alpha,
                        portfolio: portfolio.clone(),
                        scale: self.default_scale,
                        b,
                    });
                }
            }
        }
        Ok(out)
    }

    fn estimator_config(&self, s: &Scenario, kind: EstimatorKind) -> Result<EstimatorConfig> {
        Ok(EstimatorConfig {
            portfolio: s.portfolio.clone(),
            generator: GumbelGenerator::new(s.alpha)?,
            scale: s.scale,
            b: s.b,
            replications: self.replications,
            seed: self.seed,
            x0: self.x0,
            threads: self.threads,
            kind,
        })
    }
}

fn field(name: &str, e: Error) -> Error {
    Error::Config(format!("{name}: {e}"))
}

impl Scenario {
    fn asymptotic_inputs(&self) -> Result<AsymptoticInputs> {
        AsymptoticInputs::new(self.portfolio.clone(), self.alpha, self.scale, self.b)
    }

    pub fn tail_asymptotic(&self) -> Result<f64> {
        asymptotics::tail_probability_asymptotic(&self.asymptotic_inputs()?)
    }

    pub fn shortfall_asymptotic(&self) -> Result<f64> {
        asymptotics::expected_shortfall_asymptotic(&self.asymptotic_inputs()?)
    }
}

/// One line of `estimate`, `asymptotic` and `table 2|3|4` output.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub method: String,
    pub alpha: f64,
    pub n: u64,
    pub b: f64,
    pub report: Option<EstimateReport>,
    pub asymptotic: Option<f64>,
    pub runtime: Option<Duration>,
    pub seed: u64,
    pub error: Option<String>,
}

/// One line of `es` and `table 5` output.
#[derive(Debug, Clone, PartialEq)]
pub struct EsRow {
    pub alpha: f64,
    pub n: u64,
    pub b: f64,
    pub report: Option<EstimateReport>,
    pub asymptotic: Option<f64>,
    pub runtime: Option<Duration>,
    pub seed: u64,
    pub error: Option<String>,
}

impl EsRow {
    /// `100 (estimate - asymptotic) / asymptotic`
    pub fn discrepancy_pct(&self) -> Option<f64> {
        let est = self.report.as_ref()?.estimate;
        let asy = self.asymptotic?;
        Some(100.0 * (est - asy) / asy)
    }
}

/// Runs every requested estimator on every scenario.
pub fn run_estimate(config: &ExperimentConfig) -> Result<Vec<EstimateRow>> {
    if config.methods.is_empty() {
        return Err(Error::Config(
            "methods: at least one estimator is required".into(),
        ));
    }
    let scenarios = config.scenarios()?;
    let mut rows = Vec::new();
    for s in &scenarios {
        let asymptotic = if config.asymptotic {
            s.tail_asymptotic().ok()
        } else {
            None
        };
        for &kind in &config.methods {
            log::info!(
                "{} alpha={} n={} b={} m={}",
                kind.name(),
                s.alpha,
                s.portfolio.n(),
                s.b,
                config.replications
            );
            let result = config
                .estimator_config(s, kind)
                .and_then(|c| estimators::estimate(&c));
            let (report, error) = split(result);
            if let Some(r) = &report {
                log::info!("  done in {:.1?}", r.runtime);
            }
            rows.push(EstimateRow {
                method: kind.name().to_string(),
                alpha: s.alpha,
                n: s.portfolio.n(),
                b: s.b,
                runtime: report.as_ref().filter(|_| config.timing).map(|r| r.runtime),
                report,
                asymptotic,
                seed: config.seed,
                error,
            });
        }
    }
    Ok(rows)
}

/// Sharp asymptotic tail probabilities only.
pub fn run_asymptotic(config: &ExperimentConfig) -> Result<Vec<EstimateRow>> {
    Ok(config
        .scenarios()?
        .iter()
        .map(|s| {
            let (value, error) = split(s.tail_asymptotic());
            EstimateRow {
                method: "asymptotic".to_string(),
                alpha: s.alpha,
                n: s.portfolio.n(),
                b: s.b,
                report: None,
                asymptotic: value,
                runtime: None,
                seed: config.seed,
                error,
            }
        })
        .collect())
}

/// Importance-sampling expected shortfall next to its sharp asymptotic.
pub fn run_es(config: &ExperimentConfig) -> Result<Vec<EsRow>> {
    let scenarios = config.scenarios()?;
    let mut rows = Vec::new();
    for s in &scenarios {
        log::info!(
            "expected shortfall alpha={} n={} b={} m={}",
            s.alpha,
            s.portfolio.n(),
            s.b,
            config.replications
        );
        let result = config
            .estimator_config(s, EstimatorKind::Importance)
            .and_then(|c| estimators::expected_shortfall(&c));
        let (report, error) = split(result);
        let (asymptotic, asy_error) = split(s.shortfall_asymptotic());
        rows.push(EsRow {
            alpha: s.alpha,
            n: s.portfolio.n(),
            b: s.b,
            runtime: report.as_ref().filter(|_| config.timing).map(|r| r.runtime),
            report,
            asymptotic,
            seed: config.seed,
            error: error.or(asy_error),
        });
    }
    Ok(rows)
}

fn split<T>(r: Result<T>) -> (Option<T>, Option<String>) {
    match r {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    }
}
