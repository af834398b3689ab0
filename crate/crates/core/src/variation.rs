//! Path statistics: the weighted Hermite variation `F_n`, its Skorohod form
//! `G_n`, the correction terms `K_{n,r}` with `F_n - G_n = Σ_{r≥1} K_{n,r}`,
//! the mixture scale `S`, the semi-norm `‖f‖_{N,p}`, and the exact second
//! moment of the residual in the `q = 3, f(x) = x` example.
//!
//! All three statistics share one per-grid-point term
//!
//! ```text
//! T_{k,r} = n^{-1/2} (-1)^r C(q,r) f^{(r)}(B_{k/n}) (n^H α_{k,k/n})^r H_{q-r}(n^H ΔB_{k/n})
//! ```
//!
//! which is `n^{qH-1/2}(-1)^r C(q,r) f^{(r)} α^r I_{q-r}(δ^{⊗(q-r)})` after
//! `I_m(δ_{k/n}^{⊗m}) = n^{-mH} H_m(n^H ΔB_{k/n})`. Then `F_n = Σ_k T_{k,0}`,
//! `G_n = Σ_k Σ_r T_{k,r}` and `K_{n,r} = -Σ_k T_{k,r}`. Sums run over
//! ascending `k`, compensated once `n ≥ 2^12`.

use serde::{Deserialize, Serialize};

use crate::covariance::{alpha_diagonal, rho, sigma_sq, HurstParam};
use crate::error::{Error, Result};
use crate::generator::FbmPath;
use crate::hermite::{hermite_table, GaussHermite};
use crate::seed::GaussianStream;
use crate::weight::WeightFunction;

/// Grid size from which accumulations switch to compensated summation.
pub const COMPENSATED_FROM: usize = 1 << 12;

/// `(q, H, n)` for one variation statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationConfig {
    pub q: u32,
    pub hurst: HurstParam,
    pub n: usize,
}

impl VariationConfig {
    pub fn new(q: u32, hurst: HurstParam, n: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("Hermite rank q must be >= 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("grid size n must be >= 1".into()));
        }
        Ok(Self { q, hurst, n })
    }

    /// Whether `1/(2q) < H < 1 - 1/(2q)`.
    pub fn in_theorem_range(&self) -> bool {
        in_theorem_range(self.q, self.hurst)
    }
}

pub fn in_theorem_range(q: u32, hurst: HurstParam) -> bool {
    let edge = 1.0 / (2.0 * q as f64);
    q >= 2 && hurst.value() > edge && hurst.value() < 1.0 - edge
}

/// Plain or Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
    compensated: bool,
}

impl Accumulator {
    pub(crate) fn new(compensated: bool) -> Self {
        Self {
            sum: 0.0,
            comp: 0.0,
            compensated,
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        if self.compensated {
            let t = self.sum + x;
            if self.sum.abs() >= x.abs() {
                self.comp += (self.sum - t) + x;
            } else {
                self.comp += (x - t) + self.sum;
            }
            self.sum = t;
        } else {
            self.sum += x;
        }
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `F_n`, `G_n` and `K_{n,1..=q}` from one pass over a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub q: u32,
    pub f_n: f64,
    pub g_n: f64,
    /// `corrections[r-1] = K_{n,r}`.
    pub corrections: Vec<f64>,
}

impl Decomposition {
    /// `F_n - G_n`.
    pub fn residual(&self) -> f64 {
        self.f_n - self.g_n
    }

    pub fn correction_total(&self) -> f64 {
        self.corrections.iter().sum()
    }
}

fn binomials(q: u32) -> Vec<f64> {
    let mut c = vec![1.0; q as usize + 1];
    for r in 1..=q as usize {
        c[r] = c[r - 1] * (q as usize - r + 1) as f64 / r as f64;
    }
    c
}

/// Shared kernel. `max_r` limits which `r` are evaluated; `r = 0` only gives
/// `F_n` and needs `f` alone.
fn decompose_upto(path: &FbmPath, f: &WeightFunction, q: u32, max_r: u32) -> Result<Decomposition> {
    if q == 0 {
        return Err(Error::InvalidArgument("Hermite rank q must be >= 1".into()));
    }
    f.require_order(max_r as usize)?;
    let n = path.n;
    let h = path.hurst;
    let nf = n as f64;
    let n_h = nf.powf(h.value());
    let inv_sqrt_n = 1.0 / nf.sqrt();
    let binom = binomials(q);
    let compensated = n >= COMPENSATED_FROM;
    let mut acc: Vec<Accumulator> = vec![Accumulator::new(compensated); max_r as usize + 1];
    let mut g_acc = Accumulator::new(compensated);
    let mut herm = Vec::with_capacity(q as usize + 1);
    let values = path.values();
    for k in 0..n {
        let b = values[k];
        let x = n_h * (values[k + 1] - b);
        hermite_table(q as usize, x, &mut herm);
        let scaled_alpha = n_h * alpha_diagonal(h, n, k);
        let mut apow = 1.0;
        let mut g_k = 0.0;
        for r in 0..=max_r as usize {
            let fr = f.eval(r, b);
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            let term = inv_sqrt_n * sign * binom[r] * fr * apow * herm[q as usize - r];
            acc[r].add(term);
            g_k += term;
            apow *= scaled_alpha;
        }
        g_acc.add(g_k);
    }
    Ok(Decomposition {
        q,
        f_n: acc[0].total(),
        g_n: g_acc.total(),
        corrections: acc[1..].iter().map(|a| -a.total()).collect(),
    })
}

/// All of `F_n`, `G_n`, `K_{n,r}` for one path. Requires `f^{(q)}`.
pub fn decompose(path: &FbmPath, f: &WeightFunction, q: u32) -> Result<Decomposition> {
    decompose_upto(path, f, q, q)
}

/// `F_n = n^{-1/2} Σ_k f(B_{k/n}) H_q(n^H ΔB_{k/n})`.
pub fn weighted_variation(path: &FbmPath, f: &WeightFunction, q: u32) -> Result<f64> {
    Ok(decompose_upto(path, f, q, 0)?.f_n)
}

/// `G_n = δ^q(u_n)`, `u_n = n^{qH-1/2} Σ_k f(B_{k/n}) δ_{k/n}^{⊗q}`, in closed form.
pub fn skorohod_variation(path: &FbmPath, f: &WeightFunction, q: u32) -> Result<f64> {
    Ok(decompose(path, f, q)?.g_n)
}

/// `K_{n,r}` for `1 ≤ r ≤ q`.
pub fn correction_term(path: &FbmPath, f: &WeightFunction, q: u32, r: u32) -> Result<f64> {
    if r == 0 || r > q {
        return Err(Error::InvalidArgument(format!(
            "correction index r = {r} must lie in 1..={q}"
        )));
    }
    Ok(decompose_upto(path, f, q, r)?.corrections[r as usize - 1])
}

/// `S = sqrt(σ²_{H,q} ∫ f²(B_s) ds)` on one path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureScale {
    pub s: f64,
    pub sigma_sq: f64,
    /// Seed of the path `S` was computed from.
    pub path_seed: u64,
}

/// Left-endpoint Riemann sum `(1/n) Σ_k f²(B_{k/n})`.
pub fn riemann_f_squared(path: &FbmPath, f: &WeightFunction) -> f64 {
    let mut acc = Accumulator::new(path.n >= COMPENSATED_FROM);
    for &b in &path.values()[..path.n] {
        let v = f.value(b);
        acc.add(v * v);
    }
    acc.total() / path.n as f64
}

/// Scale from a precomputed `σ²_{H,q}`, for Monte Carlo loops.
pub fn limit_scale_with(path: &FbmPath, f: &WeightFunction, sigma_sq_value: f64) -> MixtureScale {
    MixtureScale {
        s: (sigma_sq_value * riemann_f_squared(path, f)).sqrt(),
        sigma_sq: sigma_sq_value,
        path_seed: path.seed,
    }
}

pub fn limit_scale(path: &FbmPath, f: &WeightFunction, q: u32, tol: f64) -> Result<MixtureScale> {
    let s2 = sigma_sq(path.hurst, q, tol)?;
    Ok(limit_scale_with(path, f, s2.value))
}

/// `S·η` with `η` the first variate of the stream seeded by `eta_seed`.
/// Callers derive `eta_seed` from the η domain of [`crate::seed`].
pub fn mixture_sample(scale: &MixtureScale, eta_seed: u64) -> f64 {
    scale.s * GaussianStream::new(eta_seed).next_normal()
}

/// Quadrature nodes for [`seminorm`].
pub const SEMINORM_NODES: usize = 64;

/// `Σ_{i=0}^{N} max_{t ∈ t_grid} ‖f^{(i)}‖_{L^p(γ_t)}`, `γ_t = N(0, t)`.
///
/// The maximum over a finite grid is a lower approximation of the supremum
/// over `t ∈ (0, 1]`.
pub fn seminorm(f: &WeightFunction, order: usize, p: f64, t_grid: &[f64]) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "[1, inf)",
        });
    }
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("t grid must not be empty".into()));
    }
    if let Some(&t) = t_grid.iter().find(|&&t| !(t > 0.0 && t <= 1.0)) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            domain: "(0, 1]",
        });
    }
    f.require_order(order)?;
    let rule = GaussHermite::new(SEMINORM_NODES);
    let mut total = 0.0;
    for i in 0..=order {
        let mut best = 0.0f64;
        for &t in t_grid {
            let sd = t.sqrt();
            let moment = rule.expect(|z| f.eval(i, sd * z).abs().powf(p));
            if !moment.is_finite() {
                return Err(Error::NonFinite(format!(
                    "E|f^({i})|^{p} under N(0,{t}) for '{}'",
                    f.label()
                )));
            }
            best = best.max(moment.powf(1.0 / p));
        }
        total += best;
    }
    Ok(total)
}

/// `E[R_n²]` for `q = 3`, `f(x) = x`, where `R_n = K_{n,1}`:
///
/// ```text
/// (9/2) n^{-2H-1} Σ_{j,k=1}^{n-1} c_j c_k ρ_H(j-k)²,   c_k = (k+1)^{2H} - k^{2H} - 1.
/// ```
///
/// Summed by lag: `Σ_h ρ_H(h)² Σ_j c_j c_{j+h}`.
pub fn residual_second_moment_exact(h: HurstParam, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("residual moment needs n >= 2".into()));
    }
    if h.is_brownian() {
        return Ok(0.0);
    }
    let two_h = h.two_h();
    // c[i] = c_{i+1}, i = 0..n-2
    let c: Vec<f64> = (1..n)
        .map(|k| {
            let kf = k as f64;
            (kf + 1.0).powf(two_h) - kf.powf(two_h) - 1.0
        })
        .collect();
    let m = c.len();
    let mut total = Accumulator::new(true);
    for lag in 0..m {
        let r = rho(h, lag as i64);
        let w = r * r;
        if w == 0.0 {
            continue;
        }
        let mut s = 0.0;
        for j in 0..m - lag {
            s += c[j] * c[j + lag];
        }
        total.add(if lag == 0 { w * s } else { 2.0 * w * s });
    }
    Ok(4.5 * (n as f64).powf(-two_h - 1.0) * total.total())
}

/// Monte Carlo diagnostic for `E[S^{(2-2q)α}]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativeMomentDiagnostic {
    pub estimate: f64,
    pub stderr: f64,
    /// Largest single sample's share of the total.
    pub max_share: f64,
    /// Set when one sample carries more than 10% of the sum, or the estimate
    /// is not finite.
    pub heavy_tail: bool,
}

/// Estimate `E[S^{(2-2q)α}]` from sampled scales.
pub fn negative_moment_diagnostic(scales: &[f64], q: u32, alpha_exp: f64) -> NegativeMomentDiagnostic {
    let power = (2.0 - 2.0 * q as f64) * alpha_exp;
    let xs: Vec<f64> = scales.iter().map(|&s| s.powf(power)).collect();
    let n = xs.len() as f64;
    let sum: f64 = xs.iter().sum();
    let mean = sum / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let max_share = xs.iter().cloned().fold(0.0, f64::max) / sum;
    NegativeMomentDiagnostic {
        estimate: mean,
        stderr: (var / n).sqrt(),
        max_share,
        heavy_tail: !mean.is_finite() || max_share > 0.1,
    }
}
