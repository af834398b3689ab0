//! `hermvar` command-line runner.
//!
//! Flags override values from `--config` (TOML, JSON or a previous run's
//! manifest). Every run with `--output` also writes
//! `<output>.manifest.json`, which `--config` accepts for an exact re-run.

pub mod config;
pub mod error;
pub mod run;

use std::path::PathBuf;

use clap::{Args, Parser};
use hermvar::generator::Method;

pub use config::{Format, Manifest, Parameters, RunConfig, Subcommand};
pub use error::{CliError, CliResult};
pub use hermvar::seed::derive_seed;

#[derive(Debug, Parser)]
#[command(name = "hermvar", version, about = "Weighted Hermite variations of fBm")]
pub struct Cli {
    #[arg(value_enum)]
    pub subcommand: Subcommand,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default from HERMVAR_WORKERS, else 1).
    #[arg(long, env = config::WORKERS_ENV)]
    pub workers: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML/JSON config or manifest; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long = "H", allow_negative_numbers = true)]
    pub hurst: Option<f64>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    /// `lo:hi:dyadic` or `n1,n2,...`.
    #[arg(long = "n-grid", value_parser = parse_grid)]
    pub n_grid: Option<NGrid>,
    /// Weight function: zero, one, x, x2, cos, lorentz.
    #[arg(long = "f")]
    pub weight: Option<String>,
    /// Test function, e.g. cos, sin:2, logistic, erf:1.
    #[arg(long)]
    pub phi: Option<String>,
    /// Test function of B_1 for `stable`.
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long, short = 'N')]
    pub replicates: Option<usize>,
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// alpha_max, alpha_sup_sum, beta_power_sum, beta_double_sum, triple_beta_sum.
    #[arg(long)]
    pub lemma: Option<String>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "t-grid")]
    pub t_grid: Option<usize>,
}

/// Parsed `--n-grid` value.
#[derive(Debug, Clone, PartialEq)]
pub struct NGrid(pub Vec<usize>);

fn parse_grid(s: &str) -> Result<NGrid, String> {
    config::parse_n_grid(s).map(NGrid)
}

fn parse_method(s: &str) -> Result<Method, String> {
    match s {
        "cholesky" => Ok(Method::Cholesky),
        "circulant" => Ok(Method::Circulant),
        _ => Err(format!("unknown method '{s}' (cholesky, circulant)")),
    }
}

impl From<ParamArgs> for Parameters {
    fn from(a: ParamArgs) -> Self {
        Self {
            hurst: a.hurst,
            q: a.q,
            n: a.n,
            n_grid: a.n_grid.map(|g| g.0),
            weight: a.weight,
            phi: a.phi,
            g: a.g,
            replicates: a.replicates,
            method: a.method,
            lemma: a.lemma,
            a: a.a,
            b: a.b,
            tol: a.tol,
            t_grid: a.t_grid,
        }
    }
}

/// Merge file and flags into a validated [`RunConfig`].
pub fn build_config(cli: Cli) -> CliResult<RunConfig> {
    let file = match &cli.common.config {
        Some(path) => config::load_file(path)?,
        None => Default::default(),
    };
    if let Some(s) = file.subcommand {
        if s != cli.subcommand {
            return Err(CliError::Config(format!(
                "config file is for '{}' but '{}' was requested",
                s.name(),
                cli.subcommand.name()
            )));
        }
    }
    let params = file.parameters.overlay(&cli.params.into());
    let c = cli.common;
    config::resolve(
        cli.subcommand,
        &params,
        c.seed.or(file.master_seed).unwrap_or(config::DEFAULT_SEED),
        c.workers.or(file.workers).unwrap_or(1),
        c.output.or(file.output_path),
        c.format.or(file.format).unwrap_or_default(),
    )
}

pub fn main_with(cli: Cli) -> CliResult<()> {
    let cfg = build_config(cli)?;
    run::run(&cfg).map(|_| ())
}
