//! Run configuration: flags, config files, manifests and their resolution
//! into a fully specified [`RunConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use hermvar::covariance::HurstParam;
use hermvar::generator::Method;
use hermvar::harness::{default_replicates, TestFunction};
use hermvar::weight::WeightFunction;
use hermvar::bounds::LemmaQuantity;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "HERMVAR_WORKERS";
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Simulate,
    Sigma,
    Rate,
    Fngn,
    Bounds,
    Residual,
    BreuerMajor,
    Stable,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::Sigma => "sigma",
            Self::Rate => "rate",
            Self::Fngn => "fngn",
            Self::Bounds => "bounds",
            Self::Residual => "residual",
            Self::BreuerMajor => "breuer-major",
            Self::Stable => "stable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Inputs of the target operation. After resolution only the fields the
/// subcommand uses are set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub hurst: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<usize>,
}

impl Parameters {
    /// Fields of `over` replace those of `self`.
    pub fn overlay(mut self, over: &Parameters) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f.clone(); } )* };
        }
        take!(hurst, q, n, n_grid, weight, phi, g, replicates, method, lemma, a, b, tol, t_grid);
        self
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub parameters: Parameters,
    pub master_seed: u64,
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// Partial configuration as read from a file; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    #[serde(default)]
    pub subcommand: Option<Subcommand>,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub master_seed: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

impl From<RunConfig> for PartialConfig {
    fn from(c: RunConfig) -> Self {
        Self {
            subcommand: Some(c.subcommand),
            parameters: c.parameters,
            master_seed: Some(c.master_seed),
            workers: Some(c.workers),
            output_path: c.output_path,
            format: Some(c.format),
        }
    }
}

/// Record written next to every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub wall_time_secs: f64,
    pub summary: serde_json::Value,
}

impl Manifest {
    pub fn path_for(output: &Path) -> PathBuf {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }
}

/// Read a TOML or JSON config file, or a manifest (its `config` is used).
pub fn load_file(path: &Path) -> CliResult<PartialConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let bad = |e: String| CliError::Config(format!("invalid config {}: {e}", path.display()));
    let is_toml = path.extension().is_some_and(|e| e == "toml");
    if is_toml {
        return toml::from_str(&text).map_err(|e| bad(e.to_string()));
    }
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if value.get("tool").is_some() && value.get("config").is_some() {
        let m: Manifest = serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
        return Ok(m.config.into());
    }
    serde_json::from_value(value).map_err(|e| bad(e.to_string()))
}

/// Parse `lo:hi:dyadic` or a comma-separated list.
pub fn parse_n_grid(s: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [lo, hi, "dyadic"] => {
            let lo: usize = lo.trim().parse().map_err(|_| format!("bad grid start '{lo}'"))?;
            let hi: usize = hi.trim().parse().map_err(|_| format!("bad grid end '{hi}'"))?;
            if !lo.is_power_of_two() || !hi.is_power_of_two() || lo > hi {
                return Err(format!("dyadic grid needs powers of two lo <= hi, got {lo}:{hi}"));
            }
            let mut v = Vec::new();
            let mut n = lo;
            while n <= hi {
                v.push(n);
                n *= 2;
            }
            v
        }
        [list] => list
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad grid entry '{x}'")))
            .collect::<Result<_, _>>()?,
        _ => return Err(format!("expected lo:hi:dyadic or a comma list, got '{s}'")),
    };
    if grid.is_empty() {
        return Err("empty grid".into());
    }
    Ok(grid)
}

fn dyadic(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| 1usize << e).collect()
}

fn cfg_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Fill defaults for `sub`, drop unused fields and validate every input
/// against the target operation's preconditions.
pub fn resolve(
    sub: Subcommand,
    given: &Parameters,
    master_seed: u64,
    workers: usize,
    output_path: Option<PathBuf>,
    format: Format,
) -> CliResult<RunConfig> {
    if workers == 0 {
        return Err(cfg_err("workers must be positive"));
    }
    let h = given
        .hurst
        .ok_or_else(|| cfg_err(format!("{} needs --H", sub.name())))?;
    let hurst = HurstParam::new(h)?;
    let mut p = Parameters {
        hurst: Some(h),
        ..Default::default()
    };
    let q = |default: u32| -> CliResult<u32> {
        let q = given.q.unwrap_or(default);
        if q == 0 || q > 20 {
            return Err(cfg_err(format!("q must lie in 1..=20, got {q}")));
        }
        Ok(q)
    };
    let n = |default: usize| -> CliResult<usize> {
        let n = given.n.unwrap_or(default);
        if n < 2 {
            return Err(cfg_err(format!("n must be at least 2, got {n}")));
        }
        Ok(n)
    };
    let grid = |default: Vec<usize>, min_len: usize| -> CliResult<Vec<usize>> {
        let g = given.n_grid.clone().unwrap_or(default);
        if g.len() < min_len {
            return Err(cfg_err(format!("n grid needs at least {min_len} sizes")));
        }
        if g.windows(2).any(|w| w[1] <= w[0]) || g[0] < 2 {
            return Err(cfg_err("n grid must be increasing and start at 2 or more"));
        }
        Ok(g)
    };
    let weight = |default: &str| -> CliResult<String> {
        let w = given.weight.clone().unwrap_or_else(|| default.to_string());
        WeightFunction::from_label(&w)?;
        Ok(w)
    };
    let test_fn = |v: &Option<String>, default: &str| -> CliResult<String> {
        let s = v.clone().unwrap_or_else(|| default.to_string());
        TestFunction::parse(&s)?;
        Ok(s)
    };
    let reps = |default: usize, min: usize| -> CliResult<usize> {
        let r = given.replicates.unwrap_or(default);
        if r < min {
            return Err(cfg_err(format!("need at least {min} replicates, got {r}")));
        }
        Ok(r)
    };
    let theorem_range = |q: u32| -> CliResult<()> {
        if hermvar::variation::in_theorem_range(q, hurst) {
            Ok(())
        } else {
            Err(cfg_err(format!(
                "H = {h} lies outside (1/(2q), 1 - 1/(2q)) for q = {q}"
            )))
        }
    };
    let pow2 = |g: &[usize]| -> CliResult<()> {
        if g.iter().all(|n| n.is_power_of_two()) {
            Ok(())
        } else {
            Err(cfg_err("grid sizes must be powers of two"))
        }
    };

    match sub {
        Subcommand::Simulate => {
            p.n = Some(n(1024)?);
            p.method = Some(given.method.unwrap_or(Method::Circulant));
        }
        Subcommand::Sigma => {
            let qv = q(2)?;
            let tol = given.tol.unwrap_or(1e-10);
            if !(tol > 0.0) {
                return Err(cfg_err("tol must be positive"));
            }
            p.q = Some(qv);
            p.tol = Some(tol);
        }
        Subcommand::Rate => {
            let qv = q(2)?;
            theorem_range(qv)?;
            let g = grid(dyadic(8, 13), 4)?;
            pow2(&g)?;
            let default = default_replicates(qv, hurst, *g.last().unwrap());
            p.q = Some(qv);
            p.n_grid = Some(g);
            p.weight = Some(weight("x")?);
            p.phi = Some(test_fn(&given.phi, "cos")?);
            p.replicates = Some(reps(default, 100)?);
        }
        Subcommand::Fngn => {
            let qv = q(3)?;
            let g = grid(dyadic(8, 12), 4)?;
            pow2(&g)?;
            let w = weight("x")?;
            WeightFunction::from_label(&w)?.require_order(qv as usize)?;
            p.q = Some(qv);
            p.n_grid = Some(g);
            p.weight = Some(w);
            p.replicates = Some(reps(10_000, 2)?);
        }
        Subcommand::Bounds => {
            let lemma = given.lemma.clone().unwrap_or_else(|| "beta_power_sum".into());
            LemmaQuantity::parse(&lemma)?;
            let a = given.a.unwrap_or(1.0);
            let b = given.b.unwrap_or(1.0);
            if !(a >= 1.0) || !(b >= 1.0) {
                return Err(cfg_err("a and b must be at least 1"));
            }
            let t = given.t_grid.unwrap_or(256);
            if t < 64 {
                return Err(cfg_err("t grid needs at least 64 points"));
            }
            p.n_grid = Some(grid(dyadic(6, 12), 3)?);
            p.lemma = Some(lemma);
            p.a = Some(a);
            p.b = Some(b);
            p.t_grid = Some(t);
        }
        Subcommand::Residual => {
            p.n_grid = Some(grid(dyadic(8, 13), 3)?);
        }
        Subcommand::BreuerMajor => {
            let qv = q(2)?;
            p.q = Some(qv);
            p.n = Some(n(4096)?);
            p.replicates = Some(reps(5000, 2)?);
        }
        Subcommand::Stable => {
            let qv = q(2)?;
            theorem_range(qv)?;
            p.q = Some(qv);
            p.n = Some(n(1024)?);
            p.weight = Some(weight("x")?);
            p.phi = Some(test_fn(&given.phi, "cos")?);
            p.g = Some(test_fn(&given.g, "cos")?);
            p.replicates = Some(reps(10_000, 100)?);
        }
    }
    Ok(RunConfig {
        subcommand: sub,
        parameters: p,
        master_seed,
        workers,
        output_path,
        format,
    })
}
