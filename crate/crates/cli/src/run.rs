//! Execution of a resolved [`RunConfig`] and persistence of its results.

use std::fs;
use std::io::Write;
use std::time::Instant;

use hermvar::bounds::{LemmaQuantity, LemmaSweep};
use hermvar::covariance::{sigma_sq, HurstParam};
use hermvar::generator::PathSampler;
use hermvar::harness::{
    breuer_major_check, fn_gn_decay, phi_exponent, rate_experiment, stable_convergence_check,
    ExperimentResult, RateFit, SweepBase, TestFunction, RATE_SLACK,
};
use hermvar::seed::{derive_seed, PATH_TAG};
use hermvar::variation::{residual_second_moment_exact, VariationConfig};
use hermvar::bounds::fit_exponent;
use hermvar::weight::WeightFunction;
use serde_json::{json, Value};

use crate::config::{Format, Manifest, RunConfig, Subcommand};
use crate::error::{CliError, CliResult};

/// CSV schema version, written in the first comment line.
pub const CSV_SCHEMA: u32 = 1;

/// Tabular result of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Scalar results (fits, comparisons) for the manifest and JSON output.
    pub summary: Value,
    /// Human-readable result lines.
    pub text: String,
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    /// The data file contents in the configured format.
    pub rendered: Vec<u8>,
    pub wall_time_secs: f64,
}

fn p<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Config(format!("missing resolved parameter {name}")))
}

fn cell(x: f64) -> String {
    format!("{x}")
}

/// Compact form for human-readable lines.
fn short(x: f64) -> String {
    if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn experiment_row(r: &ExperimentResult) -> Vec<String> {
    vec![
        r.config.n.to_string(),
        cell(r.estimate),
        cell(r.stderr),
        cell(r.signed_mean),
        r.replicates.to_string(),
        format!("{:?}", r.method).to_lowercase(),
    ]
}

const EXPERIMENT_HEADER: [&str; 6] = ["n", "estimate", "stderr", "signed_mean", "replicates", "method"];

fn rate_summary(fit: &RateFit) -> Value {
    json!({
        "slope": fit.slope(),
        "slope_band": fit.slope_band,
        "target_exponent": fit.target_exponent,
        "bound": fit.target_exponent + RATE_SLACK,
        "within_bound": fit.within_bound(RATE_SLACK),
        "noise_limited": fit.noise_limited,
        "degenerate": fit.degenerate,
        "inversions": fit.inversions(),
    })
}

fn rate_text(what: &str, fit: &RateFit) -> String {
    match fit.slope() {
        Some(s) => format!(
            "{what}: slope {s:.4} +- {:.4}, phi(H) = {:.4}, bound {:.4}: {}{}",
            fit.slope_band,
            fit.target_exponent,
            fit.target_exponent + RATE_SLACK,
            if fit.within_bound(RATE_SLACK) { "within" } else { "exceeded" },
            if fit.noise_limited { " (noise-limited)" } else { "" }
        ),
        None => format!("{what}: all distances are exactly zero"),
    }
}

fn compute(cfg: &RunConfig) -> CliResult<Report> {
    let prm = &cfg.parameters;
    let h = HurstParam::new(p(prm.hurst, "H")?)?;
    let seed = cfg.master_seed;
    let report = match cfg.subcommand {
        Subcommand::Simulate => {
            let n = p(prm.n, "n")?;
            let method = p(prm.method, "method")?;
            let sampler = PathSampler::new(h, n, method)?;
            let path = sampler.sample(derive_seed(seed, PATH_TAG, 0));
            let rows = path
                .values()
                .iter()
                .enumerate()
                .map(|(k, b)| vec![k.to_string(), cell(k as f64 / n as f64), cell(*b)])
                .collect();
            Report {
                header: vec!["k", "t", "B"],
                rows,
                summary: json!({
                    "terminal": path.terminal(),
                    "path_seed": path.seed,
                    "method": sampler.method(),
                }),
                text: format!("B_1 = {} ({:?}, n = {n})", path.terminal(), sampler.method()),
            }
        }
        Subcommand::Sigma => {
            let q = p(prm.q, "q")?;
            let s = sigma_sq(h, q, p(prm.tol, "tol")?)?;
            Report {
                header: vec!["H", "q", "value", "tail_bound", "truncation_k"],
                rows: vec![vec![
                    cell(h.value()),
                    q.to_string(),
                    cell(s.value),
                    cell(s.tail_bound),
                    s.truncation_k.to_string(),
                ]],
                summary: json!(s),
                text: format!("{}\ntail_bound {}", s.value, short(s.tail_bound)),
            }
        }
        Subcommand::Rate => {
            let q = p(prm.q, "q")?;
            let f = WeightFunction::from_label(prm.weight.as_deref().unwrap_or("x"))?;
            let phi = TestFunction::parse(prm.phi.as_deref().unwrap_or("cos"))?;
            let grid = prm.n_grid.clone().unwrap_or_default();
            let fit = rate_experiment(
                SweepBase { q, hurst: h },
                &grid,
                &f,
                &phi,
                p(prm.replicates, "replicates")?,
                seed,
            )?;
            Report {
                header: EXPERIMENT_HEADER.to_vec(),
                rows: fit.results.iter().map(experiment_row).collect(),
                summary: rate_summary(&fit),
                text: rate_text("weak distance", &fit),
            }
        }
        Subcommand::Fngn => {
            let q = p(prm.q, "q")?;
            let f = WeightFunction::from_label(prm.weight.as_deref().unwrap_or("x"))?;
            let grid = prm.n_grid.clone().unwrap_or_default();
            let fit = fn_gn_decay(
                SweepBase { q, hurst: h },
                &grid,
                &f,
                p(prm.replicates, "replicates")?,
                seed,
            )?;
            Report {
                header: EXPERIMENT_HEADER.to_vec(),
                rows: fit.results.iter().map(experiment_row).collect(),
                summary: rate_summary(&fit),
                text: rate_text("E|F_n - G_n|", &fit),
            }
        }
        Subcommand::Bounds => {
            let lemma = LemmaQuantity::parse(prm.lemma.as_deref().unwrap_or("beta_power_sum"))?;
            let sweep = LemmaSweep {
                lemma,
                hurst: h,
                a: p(prm.a, "a")?,
                b: p(prm.b, "b")?,
                t_grid_size: p(prm.t_grid, "t_grid")?,
            };
            let (rows, fit) = sweep.run(prm.n_grid.as_deref().unwrap_or_default())?;
            let predicted = sweep.predicted_exponent();
            Report {
                header: vec!["lemma", "H", "a", "b", "n", "value", "predicted_exponent", "fitted_slope"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.lemma.name().to_string(),
                            cell(r.hurst),
                            cell(r.a),
                            cell(r.b),
                            r.n.to_string(),
                            cell(r.value),
                            r.predicted_exponent.map(cell).unwrap_or_default(),
                            cell(r.fitted_slope),
                        ]
                    })
                    .collect(),
                summary: json!({
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "max_residual": fit.max_residual,
                    "tail_slope": fit.tail_slope,
                    "predicted_exponent": predicted,
                }),
                text: match predicted {
                    Some(e) => format!("{}: slope {:.4}, predicted {e:.4}", lemma.name(), fit.slope),
                    None => format!("{}: slope {:.4} (boundedness only)", lemma.name(), fit.slope),
                },
            }
        }
        Subcommand::Residual => {
            let grid = prm.n_grid.clone().unwrap_or_default();
            let values = grid
                .iter()
                .map(|&n| residual_second_moment_exact(h, n))
                .collect::<hermvar::Result<Vec<_>>>()?;
            let points: Vec<(f64, f64)> = grid.iter().map(|&n| n as f64).zip(values.iter().copied()).collect();
            let fit = if values.iter().all(|v| *v > 0.0) {
                Some(fit_exponent(&points)?)
            } else {
                None
            };
            let hv = h.value();
            let predicted = if hv <= 0.75 { 2.0 * hv - 2.0 } else { 6.0 * hv - 5.0 };
            Report {
                header: vec!["n", "second_moment"],
                rows: grid
                    .iter()
                    .zip(&values)
                    .map(|(n, v)| vec![n.to_string(), cell(*v)])
                    .collect(),
                summary: json!({
                    "slope": fit.as_ref().map(|f| f.slope),
                    "tail_slope": fit.as_ref().map(|f| f.tail_slope),
                    "asymptotic_exponent": predicted,
                }),
                text: match &fit {
                    Some(f) => format!(
                        "E[R_n^2] slope {:.4} (last pair {:.4}), asymptotic exponent {predicted:.4}",
                        f.slope, f.tail_slope
                    ),
                    None => "E[R_n^2] vanishes identically".to_string(),
                },
            }
        }
        Subcommand::BreuerMajor => {
            let q = p(prm.q, "q")?;
            let n = p(prm.n, "n")?;
            let r = breuer_major_check(q, h, n, p(prm.replicates, "replicates")?, seed)?;
            let s2 = r.reference.unwrap_or(f64::NAN);
            let z = r.z_score().unwrap_or(f64::NAN);
            Report {
                header: vec!["H", "q", "n", "replicates", "variance", "stderr", "sigma_sq", "z"],
                rows: vec![vec![
                    cell(h.value()),
                    q.to_string(),
                    n.to_string(),
                    r.replicates.to_string(),
                    cell(r.estimate),
                    cell(r.stderr),
                    cell(s2),
                    cell(z),
                ]],
                summary: json!({ "variance": r.estimate, "stderr": r.stderr, "sigma_sq": s2, "z": z, "mean": r.signed_mean }),
                text: format!(
                    "Var(F_n) = {} +- {}, sigma^2 = {s2}, z = {z:.3}",
                    short(r.estimate),
                    short(r.stderr)
                ),
            }
        }
        Subcommand::Stable => {
            let q = p(prm.q, "q")?;
            let n = p(prm.n, "n")?;
            let cfgv = VariationConfig::new(q, h, n)?;
            let f = WeightFunction::from_label(prm.weight.as_deref().unwrap_or("x"))?;
            let phi = TestFunction::parse(prm.phi.as_deref().unwrap_or("cos"))?;
            let g = TestFunction::parse(prm.g.as_deref().unwrap_or("cos"))?;
            let r = stable_convergence_check(&cfgv, &f, &phi, &g, p(prm.replicates, "replicates")?, seed)?;
            Report {
                header: EXPERIMENT_HEADER.to_vec(),
                rows: vec![experiment_row(&r)],
                summary: json!({
                    "estimate": r.estimate,
                    "stderr": r.stderr,
                    "phi_exponent": phi_exponent(q, h),
                }),
                text: format!(
                    "|E[(phi(F_n) - phi(S eta)) g(B_1)]| = {} +- {}",
                    short(r.estimate),
                    short(r.stderr)
                ),
            }
        }
    };
    Ok(report)
}

/// Render a report as versioned CSV.
pub fn render_csv(sub: Subcommand, report: &Report) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    writeln!(out, "# hermvar csv schema {CSV_SCHEMA}: {}", sub.name())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&report.header)?;
    for row in &report.rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn render_json(cfg: &RunConfig, report: &Report) -> CliResult<Vec<u8>> {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            let obj: serde_json::Map<String, Value> = report
                .header
                .iter()
                .zip(r)
                .map(|(k, v)| {
                    let val = if let Ok(i) = v.parse::<i64>() {
                        Value::from(i)
                    } else {
                        v.parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .map(Value::from)
                            .unwrap_or_else(|| Value::from(v.clone()))
                    };
                    (k.to_string(), val)
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "schema": CSV_SCHEMA,
        "subcommand": cfg.subcommand.name(),
        "rows": rows,
        "summary": report.summary,
    });
    let mut v = serde_json::to_vec_pretty(&doc)?;
    v.push(b'\n');
    Ok(v)
}

/// Compute on a pool of `cfg.workers` threads and render, without touching
/// the filesystem.
pub fn execute(cfg: &RunConfig) -> CliResult<RunOutput> {
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} workers: {e}", cfg.workers)))?;
    let report = pool.install(|| compute(cfg))?;
    let rendered = match cfg.format {
        Format::Csv => render_csv(cfg.subcommand, &report)?,
        Format::Json => render_json(cfg, &report)?,
    };
    Ok(RunOutput {
        report,
        rendered,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

/// Execute and persist: data file plus manifest when an output path is set,
/// otherwise data on stdout.
pub fn run(cfg: &RunConfig) -> CliResult<RunOutput> {
    let out = execute(cfg)?;
    let stdout = std::io::stdout();
    match &cfg.output_path {
        Some(path) => {
            fs::write(path, &out.rendered)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            let manifest = Manifest {
                tool: "hermvar".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                config: cfg.clone(),
                wall_time_secs: out.wall_time_secs,
                summary: out.report.summary.clone(),
            };
            let mpath = Manifest::path_for(path);
            fs::write(&mpath, serde_json::to_vec_pretty(&manifest)?)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", mpath.display())))?;
            writeln!(stdout.lock(), "{}", out.report.text)?;
        }
        None if cfg.subcommand == Subcommand::Sigma => {
            writeln!(stdout.lock(), "{}", out.report.text)?;
        }
        None => {
            stdout.lock().write_all(&out.rendered)?;
            eprintln!("{}", out.report.text);
        }
    }
    Ok(out)
}
