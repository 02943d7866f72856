use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use archimedean_credit::estimators::EstimatorKind;
use archimedean_credit::experiment::{
    self, preset, write_es_rows, write_estimate_rows, ExperimentConfig, OneOrMany, OutputFormat,
    Table,
};
use archimedean_credit::Error;
use clap::{Args, Parser, Subcommand};

/// Tail probabilities and expected shortfall of large credit portfolios under
/// a Gumbel copula.
#[derive(Parser)]
#[command(name = "credit-tail", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate P(L_n > nb) by simulation.
    Estimate(Overrides),
    /// Importance-sampling expected shortfall next to its asymptotic.
    Es(Overrides),
    /// Sharp asymptotic tail probability only.
    Asymptotic(Overrides),
    /// Reproduce one of the reference tables (2, 3, 4 or 5).
    Table {
        number: u8,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args, Default)]
struct Overrides {
    /// JSON experiment file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Copula parameter α > 1 (repeat or comma-separate for a sweep).
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    /// Obligor count of a single-group portfolio.
    #[arg(long, value_delimiter = ',')]
    n: Vec<u64>,
    /// Loss level as a fraction of n.
    #[arg(long, value_delimiter = ',')]
    b: Vec<f64>,
    /// Replications per estimate.
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// naive, is or condmc.
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// Cut-off of the mixing-variable proposal.
    #[arg(long)]
    x0: Option<f64>,
    /// csv or markdown.
    #[arg(long)]
    format: Option<String>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Add the asymptotic column to estimate rows.
    #[arg(long)]
    asymptotic: bool,
    /// Fill the runtime_ms column.
    #[arg(long)]
    timing: bool,
}

impl Overrides {
    fn apply(self, mut config: ExperimentConfig) -> Result<ExperimentConfig, Error> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            config = ExperimentConfig::from_json(&text)?;
        }
        if !self.alpha.is_empty() {
            config.alpha = OneOrMany::Many(self.alpha);
        }
        if !self.n.is_empty() {
            config.n = Some(OneOrMany::Many(self.n));
        }
        if !self.b.is_empty() {
            config.b = OneOrMany::Many(self.b);
        }
        if !self.method.is_empty() {
            config.methods = self
                .method
                .iter()
                .map(|m| m.parse::<EstimatorKind>())
                .collect::<Result<_, _>>()?;
        }
        if let Some(m) = self.m {
            config.replications = m;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(threads) = self.threads {
            config.threads = threads;
        }
        if let Some(x0) = self.x0 {
            config.x0 = x0;
        }
        if let Some(format) = self.format {
            config.format = format.parse::<OutputFormat>()?;
        }
        if self.output.is_some() {
            config.output = self.output;
        }
        config.asymptotic |= self.asymptotic;
        config.timing |= self.timing;
        Ok(config)
    }
}

enum Failure {
    Config(String),
    Estimation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Domain(_) | Error::LossUnattainable { .. } => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Estimation(e.to_string()),
        }
    }
}

fn sink(config: &ExperimentConfig) -> Result<Box<dyn Write>, Failure> {
    Ok(match &config.output {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                Failure::Config(format!("output: {}: {e}", path.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn report_row_errors<'a>(
    errors: impl Iterator<Item = (String, &'a Option<String>)>,
) -> Result<(), Failure> {
    let mut failed = 0;
    for (label, err) in errors {
        if let Some(err) = err {
            log::error!("{label}: {err}");
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Failure::Estimation(format!("{failed} row(s) failed")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (kind, config) = match cli.command {
        Command::Estimate(o) => ("estimate", o.apply(ExperimentConfig::default())?),
        Command::Es(o) => ("es", o.apply(ExperimentConfig::default())?),
        Command::Asymptotic(o) => ("asymptotic", o.apply(ExperimentConfig::default())?),
        Command::Table { number, overrides } => {
            let table = Table::from_number(number)?;
            let kind = if table == Table::Shortfall {
                "es"
            } else {
                "estimate"
            };
            (kind, overrides.apply(preset(table))?)
        }
    };
    match kind {
        "es" => {
            let rows = experiment::run_es(&config)?;
            write_es_rows(sink(&config)?, &rows, config.format)?;
            report_row_errors(
                rows.iter()
                    .map(|r| (format!("es n={} b={}", r.n, r.b), &r.error)),
            )
        }
        "asymptotic" => {
            let rows = experiment::run_asymptotic(&config)?;
            write_estimate_rows(sink(&config)?, &rows, config.format)?;
            report_row_errors(
                rows.iter()
                    .map(|r| (format!("alpha={} n={} b={}", r.alpha, r.n, r.b), &r.error)),
            )
        }
        _ => {
            let rows = experiment::run_estimate(&config)?;
            write_estimate_rows(sink(&config)?, &rows, config.format)?;
            report_row_errors(rows.iter().map(|r| {
                (
                    format!("{} alpha={} n={} b={}", r.method, r.alpha, r.n, r.b),
                    &r.error,
                )
            }))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Estimation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
