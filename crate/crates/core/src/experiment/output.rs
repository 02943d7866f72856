use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{EsRow, EstimateRow};
use crate::error::{Error, Result};
use crate::estimators::VarianceReduction;

pub const ESTIMATE_COLUMNS: [&str; 11] = [
    "method",
    "alpha",
    "n",
    "b",
    "estimate",
    "std_error",
    "rel_error_pct",
    "var_reduction",
    "asymptotic",
    "runtime_ms",
    "seed",
];

pub const ES_COLUMNS: [&str; 11] = [
    "method",
    "alpha",
    "n",
    "b",
    "estimate",
    "std_error",
    "rel_error_pct",
    "asymptotic",
    "discrepancy_pct",
    "runtime_ms",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

/// Full precision for CSV, four significant digits for markdown.
fn num(x: Option<f64>, format: OutputFormat) -> String {
    match (x, format) {
        (None, _) => String::new(),
        (Some(v), _) if v.is_infinite() => if v > 0.0 { "inf" } else { "-inf" }.to_string(),
        (Some(v), _) if v.is_nan() => "nan".to_string(),
        (Some(v), OutputFormat::Csv) => format!("{v:.16e}"),
        (Some(v), OutputFormat::Markdown) => format!("{v:.4e}"),
    }
}

fn plain(x: f64) -> String {
    format!("{x}")
}

fn runtime_ms(d: Option<std::time::Duration>) -> String {
    d.map(|d| format!("{:.3}", d.as_secs_f64() * 1e3))
        .unwrap_or_default()
}

fn estimate_record(row: &EstimateRow, format: OutputFormat) -> Vec<String> {
    let r = row.report.as_ref();
    vec![
        row.method.clone(),
        plain(row.alpha),
        row.n.to_string(),
        plain(row.b),
        num(r.map(|r| r.estimate), format),
        num(r.map(|r| r.std_error), format),
        num(r.and_then(|r| r.rel_error_pct), format),
        num(
            r.and_then(|r| match r.variance_reduction {
                VarianceReduction::NotApplicable => None,
                v => v.value(),
            }),
            format,
        ),
        num(row.asymptotic, format),
        runtime_ms(row.runtime),
        row.seed.to_string(),
    ]
}

fn es_record(row: &EsRow, format: OutputFormat) -> Vec<String> {
    let r = row.report.as_ref();
    vec![
        "importance".to_string(),
        plain(row.alpha),
        row.n.to_string(),
        plain(row.b),
        num(r.map(|r| r.estimate), format),
        num(r.map(|r| r.std_error), format),
        num(r.and_then(|r| r.rel_error_pct), format),
        num(row.asymptotic, format),
        num(row.discrepancy_pct(), format),
        runtime_ms(row.runtime),
        row.seed.to_string(),
    ]
}

fn write_table<W: Write>(
    out: W,
    header: &[&str],
    records: Vec<Vec<String>>,
    format: OutputFormat,
) -> Result<()> {
    let io = |e: std::io::Error| Error::Config(format!("output: {e}"));
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Error::Config(format!("output: {e}"));
            w.write_record(header).map_err(csv_err)?;
            for rec in &records {
                w.write_record(rec).map_err(csv_err)?;
            }
            w.flush().map_err(io)?;
        }
        OutputFormat::Markdown => {
            let mut out = out;
            writeln!(out, "| {} |", header.join(" | ")).map_err(io)?;
            let rule: Vec<&str> = header.iter().map(|_| "---").collect();
            writeln!(out, "|{}|", rule.join("|")).map_err(io)?;
            for rec in &records {
                writeln!(out, "| {} |", rec.join(" | ")).map_err(io)?;
            }
        }
    }
    Ok(())
}

pub fn write_estimate_rows<W: Write>(
    out: W,
    rows: &[EstimateRow],
    format: OutputFormat,
) -> Result<()> {
    let records = rows.iter().map(|r| estimate_record(r, format)).collect();
    write_table(out, &ESTIMATE_COLUMNS, records, format)
}

pub fn write_es_rows<W: Write>(out: W, rows: &[EsRow], format: OutputFormat) -> Result<()> {
    let records = rows.iter().map(|r| es_record(r, format)).collect();
    write_table(out, &ES_COLUMNS, records, format)
}
