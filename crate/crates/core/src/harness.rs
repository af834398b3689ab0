//! Monte Carlo experiments around the mixed-Gaussian limit of `F_n`.
//!
//! Every experiment is a map over replicate indices `r = 0..N`. Replicate `r`
//! samples its path from `derive_seed(seed, PATH_TAG, r)` and, where needed,
//! its `η` from `derive_seed(seed, ETA_TAG, r)`. Per-replicate outputs are
//! collected in index order and reduced sequentially, so a result depends on
//! the configuration alone and never on the worker count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{fit_exponent, ExponentFit};
use crate::covariance::{sigma_sq, HurstParam};
use crate::error::{Error, Result};
use crate::generator::{FbmPath, Method, PathSampler};
use crate::seed::{derive_seed, mix64, GaussianStream, ETA_TAG, PATH_TAG};
use crate::stats::Summary;
use crate::variation::{
    decompose, in_theorem_range, limit_scale_with, weighted_variation, VariationConfig,
};
use crate::weight::WeightFunction;

/// Truncation tolerance for `σ²_{H,q}` inside experiments.
pub const SIGMA_TOL: f64 = 1e-10;

/// `φ(H)` as `(|H-½| - ½) ∨ (q|H-½| - (q-1)/2)`.
pub fn phi_two_branch(q: u32, h: HurstParam) -> f64 {
    let d = (h.value() - 0.5).abs();
    let qf = q as f64;
    (d - 0.5).max(qf * d - (qf - 1.0) / 2.0)
}

/// `φ(H) = max{-H, H-1, -qH+½, q(H-1)+½}`.
pub fn phi_four_term(q: u32, h: HurstParam) -> f64 {
    let hv = h.value();
    let qf = q as f64;
    (-hv).max(hv - 1.0).max(-qf * hv + 0.5).max(qf * (hv - 1.0) + 0.5)
}

/// Rate exponent of the weak distance bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiExponent {
    pub value: f64,
    pub four_term: f64,
    /// Whether `1/(2q) < H < 1 - 1/(2q)`.
    pub in_theorem_range: bool,
}

pub fn phi_exponent(q: u32, h: HurstParam) -> PhiExponent {
    PhiExponent {
        value: phi_two_branch(q, h),
        four_term: phi_four_term(q, h),
        in_theorem_range: in_theorem_range(q, h),
    }
}

/// Smooth bounded test functions `φ` (and the `g` of the stable check).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "a", rename_all = "snake_case")]
pub enum TestFunction {
    Cos(f64),
    Sin(f64),
    /// `1/(1+e^{-ax})`.
    Logistic(f64),
    /// `½(1 + erf(ax))`, a smoothed step.
    ErfStep(f64),
    Constant(f64),
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Cos(a) => (a * x).cos(),
            Self::Sin(a) => (a * x).sin(),
            Self::Logistic(a) => 1.0 / (1.0 + (-a * x).exp()),
            Self::ErfStep(a) => 0.5 * (1.0 + statrs::function::erf::erf(a * x)),
            Self::Constant(c) => c,
        }
    }

    /// Every catalog function has bounded derivatives of all orders; the
    /// certified order is reported as `2q + 1`.
    pub fn derivative_bound_order(&self, q: u32) -> u32 {
        2 * q + 1
    }

    pub fn label(&self) -> String {
        match *self {
            Self::Cos(a) => format!("cos:{a}"),
            Self::Sin(a) => format!("sin:{a}"),
            Self::Logistic(a) => format!("logistic:{a}"),
            Self::ErfStep(a) => format!("erf:{a}"),
            Self::Constant(c) => format!("const:{c}"),
        }
    }

    /// Parse `name` or `name:a`, e.g. `cos`, `erf:2`, `const:1`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => {
                let v: f64 = a
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad parameter in '{s}'")))?;
                (n, Some(v))
            }
            None => (s, None),
        };
        let a = arg.unwrap_or(1.0);
        match name {
            "cos" => Ok(Self::Cos(a)),
            "sin" => Ok(Self::Sin(a)),
            "logistic" => Ok(Self::Logistic(a)),
            "erf" => Ok(Self::ErfStep(a)),
            "const" => Ok(Self::Constant(a)),
            _ => Err(Error::InvalidArgument(format!(
                "unknown test function '{s}' (cos, sin, logistic, erf, const)"
            ))),
        }
    }
}

/// Monte Carlo estimate with its metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub statistic: String,
    pub estimate: f64,
    pub stderr: f64,
    /// Mean of the per-replicate samples before any absolute value.
    pub signed_mean: f64,
    pub replicates: usize,
    pub config: VariationConfig,
    pub seed: u64,
    pub method: Method,
    /// Deterministic comparison value where one exists (e.g. `σ²_{H,q}`).
    pub reference: Option<f64>,
    pub wall_time_secs: f64,
}

impl ExperimentResult {
    /// Equality of everything except timing.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.wall_time_secs = other.wall_time_secs;
        &a == other
    }

    /// `|estimate - reference| / stderr`.
    pub fn z_score(&self) -> Option<f64> {
        self.reference.map(|r| (self.estimate - r).abs() / self.stderr)
    }
}

/// Default replicate count: `max(10^4, 64 n^{-2φ(H)})`, at most `10^6`.
pub fn default_replicates(q: u32, h: HurstParam, n: usize) -> usize {
    let phi = phi_two_branch(q, h);
    let want = 64.0 * (n as f64).powf(-2.0 * phi);
    want.clamp(1e4, 1e6) as usize
}

fn require_theorem_range(cfg: &VariationConfig) -> Result<()> {
    if cfg.in_theorem_range() {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "H",
            value: cfg.hurst.value(),
            domain: "(1/(2q), 1 - 1/(2q)) with q >= 2",
        })
    }
}

fn require_replicates(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::InvalidArgument(format!(
            "need at least {min} replicates, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// Shared replicate loop: sample path `r`, map it, collect in order.
fn replicate_map<T, F>(sampler: &PathSampler, seed: u64, replicates: usize, per_path: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &FbmPath) -> T + Sync,
{
    (0..replicates)
        .into_par_iter()
        .map(|r| {
            let path = sampler.sample(derive_seed(seed, PATH_TAG, r as u64));
            per_path(r, &path)
        })
        .collect()
}

fn eta(seed: u64, r: usize) -> f64 {
    GaussianStream::new(derive_seed(seed, ETA_TAG, r as u64)).next_normal()
}

struct Finished {
    summary: Summary,
    statistic: &'static str,
    absolute: bool,
    reference: Option<f64>,
}

fn finish(
    f: Finished,
    cfg: VariationConfig,
    seed: u64,
    method: Method,
    started: Instant,
) -> ExperimentResult {
    ExperimentResult {
        statistic: f.statistic.to_string(),
        estimate: if f.absolute {
            f.summary.mean.abs()
        } else {
            f.summary.mean
        },
        stderr: f.summary.stderr,
        signed_mean: f.summary.mean,
        replicates: f.summary.count,
        config: cfg,
        seed,
        method,
        reference: f.reference,
        wall_time_secs: started.elapsed().as_secs_f64(),
    }
}

/// `|E φ(F_n) - E φ(Sη)|` with common random numbers: each replicate uses
/// one path for both `F_n` and `S`, plus an independent `η`.
pub fn estimate_weak_distance(
    cfg: &VariationConfig,
    f: &WeightFunction,
    phi: &TestFunction,
    replicates: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    stable_convergence_check(cfg, f, phi, &TestFunction::Constant(1.0), replicates, seed)
        .map(|mut r| {
            r.statistic = "weak_distance".into();
            r
        })
}

/// `|E[φ(F_n) g(B_1)] - E[φ(Sη) g(B_1)]|`, coupled through the path.
pub fn stable_convergence_check(
    cfg: &VariationConfig,
    f: &WeightFunction,
    phi: &TestFunction,
    g: &TestFunction,
    replicates: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    require_theorem_range(cfg)?;
    require_replicates(replicates, 100)?;
    let started = Instant::now();
    let s2 = sigma_sq(cfg.hurst, cfg.q, SIGMA_TOL)?.value;
    let sampler = PathSampler::new(cfg.hurst, cfg.n, Method::Circulant)?;
    let diffs: Vec<f64> = replicate_map(&sampler, seed, replicates, |r, path| {
        let fn_ = weighted_variation(path, f, cfg.q).expect("order 0 always available");
        let scale = limit_scale_with(path, f, s2);
        let weight = g.eval(path.terminal());
        (phi.eval(fn_) - phi.eval(scale.s * eta(seed, r))) * weight
    });
    Ok(finish(
        Finished {
            summary: Summary::of(&diffs),
            statistic: "stable_distance",
            absolute: true,
            reference: None,
        },
        *cfg,
        seed,
        sampler.method(),
        started,
    ))
}

/// Coupled and uncoupled estimates of `E φ(F_n) - E φ(Sη)`. The uncoupled
/// version draws the `Sη` side from an independent set of paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingComparison {
    pub coupled_mean: f64,
    pub coupled_stderr: f64,
    pub uncoupled_mean: f64,
    pub uncoupled_stderr: f64,
}

pub fn coupling_comparison(
    cfg: &VariationConfig,
    f: &WeightFunction,
    phi: &TestFunction,
    replicates: usize,
    seed: u64,
) -> Result<CouplingComparison> {
    require_theorem_range(cfg)?;
    require_replicates(replicates, 100)?;
    let s2 = sigma_sq(cfg.hurst, cfg.q, SIGMA_TOL)?.value;
    let sampler = PathSampler::new(cfg.hurst, cfg.n, Method::Circulant)?;
    let pairs: Vec<(f64, f64)> = replicate_map(&sampler, seed, replicates, |r, path| {
        let fn_ = weighted_variation(path, f, cfg.q).expect("order 0 always available");
        let scale = limit_scale_with(path, f, s2);
        (phi.eval(fn_), phi.eval(scale.s * eta(seed, r)))
    });
    let other_seed = mix64(seed ^ 0x5bd1_e995);
    let limit_side: Vec<f64> = replicate_map(&sampler, other_seed, replicates, |r, path| {
        let scale = limit_scale_with(path, f, s2);
        phi.eval(scale.s * eta(other_seed, r))
    });
    let diffs: Vec<f64> = pairs.iter().map(|(a, b)| a - b).collect();
    let lhs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let coupled = Summary::of(&diffs);
    let a = Summary::of(&lhs);
    let b = Summary::of(&limit_side);
    Ok(CouplingComparison {
        coupled_mean: coupled.mean,
        coupled_stderr: coupled.stderr,
        uncoupled_mean: a.mean - b.mean,
        uncoupled_stderr: (a.stderr.powi(2) + b.stderr.powi(2)).sqrt(),
    })
}

/// `Var(F_n)` for `f ≡ 1`, compared against `σ²_{H,q}`.
pub fn breuer_major_check(
    q: u32,
    h: HurstParam,
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    let cfg = VariationConfig::new(q, h, n)?;
    require_replicates(replicates, 2)?;
    let started = Instant::now();
    let s2 = sigma_sq(h, q, SIGMA_TOL)?.value;
    let one = WeightFunction::one();
    let sampler = PathSampler::new(h, n, Method::Circulant)?;
    let samples: Vec<f64> = replicate_map(&sampler, seed, replicates, |_, path| {
        weighted_variation(path, &one, q).expect("order 0 always available")
    });
    let summary = Summary::of(&samples);
    Ok(ExperimentResult {
        statistic: "variance_fn".into(),
        estimate: summary.variance,
        stderr: Summary::variance_stderr(&samples),
        signed_mean: summary.mean,
        replicates,
        config: cfg,
        seed,
        method: sampler.method(),
        reference: Some(s2),
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

/// `E|F_n - G_n|` for one configuration.
pub fn fn_gn_distance(
    cfg: &VariationConfig,
    f: &WeightFunction,
    replicates: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    f.require_order(cfg.q as usize)?;
    require_replicates(replicates, 2)?;
    let started = Instant::now();
    let sampler = PathSampler::new(cfg.hurst, cfg.n, Method::Circulant)?;
    let samples: Vec<f64> = replicate_map(&sampler, seed, replicates, |_, path| {
        decompose(path, f, cfg.q).expect("order checked").residual().abs()
    });
    Ok(finish(
        Finished {
            summary: Summary::of(&samples),
            statistic: "mean_abs_fn_minus_gn",
            absolute: false,
            reference: None,
        },
        *cfg,
        seed,
        sampler.method(),
        started,
    ))
}

/// `E[K_{n,r}²]` by Monte Carlo.
pub fn correction_second_moment(
    cfg: &VariationConfig,
    f: &WeightFunction,
    r: u32,
    replicates: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    if r == 0 || r > cfg.q {
        return Err(Error::InvalidArgument(format!(
            "correction index r = {r} must lie in 1..={}",
            cfg.q
        )));
    }
    f.require_order(cfg.q as usize)?;
    require_replicates(replicates, 2)?;
    let started = Instant::now();
    let sampler = PathSampler::new(cfg.hurst, cfg.n, Method::Circulant)?;
    let samples: Vec<f64> = replicate_map(&sampler, seed, replicates, |_, path| {
        let k = decompose(path, f, cfg.q).expect("order checked").corrections[r as usize - 1];
        k * k
    });
    Ok(finish(
        Finished {
            summary: Summary::of(&samples),
            statistic: "correction_second_moment",
            absolute: false,
            reference: None,
        },
        *cfg,
        seed,
        sampler.method(),
        started,
    ))
}

/// Per-`n` Monte Carlo results with a log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub results: Vec<ExperimentResult>,
    /// `None` when some estimate is exactly zero (nothing to fit).
    pub fit: Option<ExponentFit>,
    /// Two-sided ~95% band half-width on the slope from the per-point
    /// standard errors.
    pub slope_band: f64,
    pub target_exponent: f64,
    /// Some estimate has `stderr > 0.3 · estimate`.
    pub noise_limited: bool,
    pub degenerate: bool,
}

/// Slack allowed above the target exponent in the bound check.
pub const RATE_SLACK: f64 = 0.2;

impl RateFit {
    fn from_results(results: Vec<ExperimentResult>, target_exponent: f64) -> Result<Self> {
        let degenerate = results.iter().any(|r| r.estimate == 0.0);
        let noise_limited = results.iter().any(|r| r.stderr > 0.3 * r.estimate.abs());
        let (fit, slope_band) = if degenerate {
            (None, 0.0)
        } else {
            let points: Vec<(f64, f64)> = results
                .iter()
                .map(|r| (r.config.n as f64, r.estimate))
                .collect();
            let fit = fit_exponent(&points)?;
            // delta method: sd(log est) = stderr / est
            let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
            let mx = xs.iter().sum::<f64>() / xs.len() as f64;
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let var: f64 = xs
                .iter()
                .zip(&results)
                .map(|(x, r)| (x - mx).powi(2) * (r.stderr / r.estimate).powi(2))
                .sum::<f64>()
                / (sxx * sxx);
            (Some(fit), 2.0 * var.sqrt())
        };
        Ok(Self {
            results,
            fit,
            slope_band,
            target_exponent,
            noise_limited,
            degenerate,
        })
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.as_ref().map(|f| f.slope)
    }

    /// Upper-bound predicate `slope ≤ target + slack`. Degenerate fits pass
    /// trivially (identically zero distances).
    pub fn within_bound(&self, slack: f64) -> bool {
        match self.slope() {
            Some(s) => s <= self.target_exponent + slack,
            None => self.degenerate,
        }
    }

    /// Number of `i` with `estimate[i+1] > estimate[i]`.
    pub fn inversions(&self) -> usize {
        self.results
            .windows(2)
            .filter(|w| w[1].estimate > w[0].estimate)
            .count()
    }
}

fn check_grid(n_grid: &[usize]) -> Result<()> {
    if n_grid.len() < 4 {
        return Err(Error::InvalidArgument(
            "rate experiments need at least four grid sizes".into(),
        ));
    }
    if n_grid.iter().any(|n| !n.is_power_of_two()) {
        return Err(Error::InvalidArgument("grid sizes must be powers of two".into()));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("grid sizes must increase".into()));
    }
    Ok(())
}

/// Base parameters of a sweep over `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepBase {
    pub q: u32,
    pub hurst: HurstParam,
}

/// Weak distance over a dyadic grid of `n`, fitted against `φ(H)`.
pub fn rate_experiment(
    base: SweepBase,
    n_grid: &[usize],
    f: &WeightFunction,
    phi: &TestFunction,
    replicates: usize,
    seed: u64,
) -> Result<RateFit> {
    check_grid(n_grid)?;
    let results = n_grid
        .iter()
        .map(|&n| {
            let cfg = VariationConfig::new(base.q, base.hurst, n)?;
            estimate_weak_distance(&cfg, f, phi, replicates, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    RateFit::from_results(results, phi_two_branch(base.q, base.hurst))
}

/// `E|F_n - G_n|` over a dyadic grid, fitted against `φ(H)`.
pub fn fn_gn_decay(
    base: SweepBase,
    n_grid: &[usize],
    f: &WeightFunction,
    replicates: usize,
    seed: u64,
) -> Result<RateFit> {
    check_grid(n_grid)?;
    let results = n_grid
        .iter()
        .map(|&n| {
            let cfg = VariationConfig::new(base.q, base.hurst, n)?;
            fn_gn_distance(&cfg, f, replicates, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    RateFit::from_results(results, phi_two_branch(base.q, base.hurst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(v: f64) -> HurstParam {
        HurstParam::new(v).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_exponent(2, hp(0.25)).value, 0.0);
        assert!((phi_exponent(2, hp(0.5)).value + 0.5).abs() < 1e-15);
        assert!((phi_exponent(3, hp(0.8)).value + 0.1).abs() < 1e-12);
        assert!((phi_exponent(2, hp(0.35)).value + 0.2).abs() < 1e-12);
        // q = 2: the last regime q(H-1)+1/2 covers all of H > 1/2
        assert!((phi_exponent(2, hp(0.6)).value + 0.3).abs() < 1e-12);
        assert!(!phi_exponent(2, hp(0.8)).in_theorem_range);
    }

    #[test]
    fn phi_forms_agree() {
        for q in 2..=6 {
            for i in 1..1000 {
                let h = hp(i as f64 / 1000.0);
                assert!((phi_two_branch(q, h) - phi_four_term(q, h)).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn phi_vanishes_at_endpoints() {
        for q in 2..=5u32 {
            let e = 1.0 / (2.0 * q as f64);
            assert!(phi_two_branch(q, hp(e)).abs() < 1e-15);
            assert!(phi_two_branch(q, hp(1.0 - e)).abs() < 1e-15);
        }
    }

    #[test]
    fn test_function_parse() {
        assert_eq!(TestFunction::parse("cos").unwrap(), TestFunction::Cos(1.0));
        assert_eq!(TestFunction::parse("erf:2").unwrap(), TestFunction::ErfStep(2.0));
        assert!(TestFunction::parse("tan").is_err());
        assert!((TestFunction::ErfStep(1.0).eval(0.0) - 0.5).abs() < 1e-15);
        assert!((TestFunction::Logistic(1.0).eval(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_weight_distance_is_exactly_zero() {
        let cfg = VariationConfig::new(2, hp(0.6), 64).unwrap();
        let r = estimate_weak_distance(&cfg, &WeightFunction::zero(), &TestFunction::Cos(1.0), 200, 1)
            .unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn constant_phi_distance_is_exactly_zero() {
        let cfg = VariationConfig::new(2, hp(0.4), 64).unwrap();
        let r = estimate_weak_distance(
            &cfg,
            &WeightFunction::identity(),
            &TestFunction::Constant(0.7),
            200,
            2,
        )
        .unwrap();
        assert_eq!(r.estimate, 0.0);
    }

    #[test]
    fn constant_g_reduces_to_weak_distance() {
        let cfg = VariationConfig::new(2, hp(0.6), 128).unwrap();
        let f = WeightFunction::identity();
        let a = estimate_weak_distance(&cfg, &f, &TestFunction::Cos(1.0), 300, 3).unwrap();
        let b = stable_convergence_check(&cfg, &f, &TestFunction::Cos(1.0), &TestFunction::Constant(1.0), 300, 3)
            .unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.stderr, b.stderr);
    }

    #[test]
    fn experiments_are_seed_deterministic() {
        let cfg = VariationConfig::new(2, hp(0.6), 128).unwrap();
        let f = WeightFunction::identity();
        let a = estimate_weak_distance(&cfg, &f, &TestFunction::Cos(1.0), 200, 9).unwrap();
        let b = estimate_weak_distance(&cfg, &f, &TestFunction::Cos(1.0), 200, 9).unwrap();
        assert!(a.same_outcome(&b));
        let c = estimate_weak_distance(&cfg, &f, &TestFunction::Cos(1.0), 200, 10).unwrap();
        assert!(!a.same_outcome(&c));
    }

    #[test]
    fn preconditions_enforced() {
        let f = WeightFunction::identity();
        let outside = VariationConfig::new(2, hp(0.8), 64).unwrap();
        assert!(estimate_weak_distance(&outside, &f, &TestFunction::Cos(1.0), 200, 1).is_err());
        let inside = VariationConfig::new(2, hp(0.6), 64).unwrap();
        assert!(estimate_weak_distance(&inside, &f, &TestFunction::Cos(1.0), 50, 1).is_err());
        let base = SweepBase { q: 2, hurst: hp(0.6) };
        assert!(rate_experiment(base, &[64, 128, 256], &f, &TestFunction::Cos(1.0), 100, 1).is_err());
        assert!(rate_experiment(base, &[64, 100, 256, 512], &f, &TestFunction::Cos(1.0), 100, 1).is_err());
    }

    #[test]
    fn degenerate_rate_fit_for_zero_weight() {
        let base = SweepBase { q: 2, hurst: hp(0.6) };
        let fit = rate_experiment(
            base,
            &[16, 32, 64, 128],
            &WeightFunction::zero(),
            &TestFunction::Cos(1.0),
            100,
            4,
        )
        .unwrap();
        assert!(fit.degenerate);
        assert!(fit.fit.is_none());
        assert!(fit.within_bound(RATE_SLACK));
    }

    #[test]
    fn fn_gn_vanishes_for_brownian_and_constant_weight() {
        let base = SweepBase { q: 3, hurst: hp(0.5) };
        let fit = fn_gn_decay(base, &[16, 32, 64, 128], &WeightFunction::identity(), 50, 5).unwrap();
        assert!(fit.results.iter().all(|r| r.estimate == 0.0));
        let base = SweepBase { q: 3, hurst: hp(0.65) };
        let fit = fn_gn_decay(base, &[16, 32, 64, 128], &WeightFunction::one(), 50, 5).unwrap();
        assert!(fit.results.iter().all(|r| r.estimate == 0.0));
    }

    #[test]
    fn replicate_rule() {
        assert_eq!(default_replicates(2, hp(0.5), 1024), 65_536);
        assert_eq!(default_replicates(2, hp(0.5), 16), 10_000);
        assert_eq!(default_replicates(2, hp(0.5), 1 << 20), 1_000_000);
    }
}
