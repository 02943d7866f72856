use super::{ExperimentConfig, OneOrMany};
use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;

/// The numerical experiments reproduced by `table <2|3|4|5>`.
///
/// All share n = 500, f_n = 1/n, b = 0.8, l = 0.5, c = 1, α = 1.5 unless the
/// table varies that parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    /// α ∈ {1.1, 1.5, 2, 5}
    Alpha,
    /// b ∈ {0.3, 0.5, 0.7, 0.9}
    Level,
    /// n ∈ {100, 250, 500, 1000}, with the asymptotic column
    Size,
    /// expected shortfall for n ∈ {50, 100, 250, 500}
    Shortfall,
}

impl Table {
    pub fn from_number(number: u8) -> Result<Self> {
        match number {
            2 => Ok(Table::Alpha),
            3 => Ok(Table::Level),
            4 => Ok(Table::Size),
            5 => Ok(Table::Shortfall),
            other => Err(Error::Config(format!(
                "no preset for table {other}; expected 2, 3, 4 or 5"
            ))),
        }
    }
}

pub fn preset(table: Table) -> ExperimentConfig {
    let base = ExperimentConfig {
        methods: vec![EstimatorKind::Importance, EstimatorKind::Conditional],
        ..ExperimentConfig::default()
    };
    match table {
        Table::Alpha => ExperimentConfig {
            alpha: OneOrMany::Many(vec![1.1, 1.5, 2.0, 5.0]),
            ..base
        },
        Table::Level => ExperimentConfig {
            b: OneOrMany::Many(vec![0.3, 0.5, 0.7, 0.9]),
            ..base
        },
        Table::Size => ExperimentConfig {
            n: Some(OneOrMany::Many(vec![100, 250, 500, 1000])),
            asymptotic: true,
            ..base
        },
        Table::Shortfall => ExperimentConfig {
            n: Some(OneOrMany::Many(vec![50, 100, 250, 500])),
            methods: vec![EstimatorKind::Importance],
            ..base
        },
    }
}
