//! Closed-form covariance quantities of fractional Brownian motion on the
//! uniform grid `{k/n}`.
//!
//! * [`rho`]: autocovariance of fractional Gaussian noise,
//!   `½(|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H})`.
//! * [`fbm_covariance`]: `E[B_s B_t]`.
//! * [`alpha`]: `⟨1_{[k/n,(k+1)/n]}, 1_{[0,t]}⟩`.
//! * [`beta`]: `⟨δ_{j/n}, δ_{k/n}⟩ = n^{-2H} ρ_H(j-k)`.
//! * [`sigma_sq`]: the Breuer–Major variance `q! Σ_k ρ_H(k)^q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hurst index of a fractional Brownian motion, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstParam(f64);

impl HurstParam {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidHurst(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `2H`, the exponent appearing in every covariance formula.
    #[inline]
    pub fn two_h(self) -> f64 {
        2.0 * self.0
    }

    /// True when `H == 1/2` exactly, i.e. standard Brownian motion.
    #[inline]
    pub fn is_brownian(self) -> bool {
        self.0 == 0.5
    }
}

impl TryFrom<f64> for HurstParam {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<HurstParam> for f64 {
    fn from(h: HurstParam) -> f64 {
        h.0
    }
}

impl std::fmt::Display for HurstParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Lags at or above this use the asymptotic series for `rho`.
pub const RHO_SERIES_THRESHOLD: u64 = 64;

/// Generalised binomial coefficients `C(2H, 2m)` for `m = 1, 2, ...`, as an
/// iterator. These are the coefficients of
/// `½((1+x)^{2H} + (1-x)^{2H}) - 1 = Σ_{m≥1} C(2H,2m) x^{2m}`.
fn even_binomials(two_h: f64) -> impl Iterator<Item = f64> {
    // C(2H, 2) = 2H(2H-1)/2
    let first = two_h * (two_h - 1.0) / 2.0;
    std::iter::successors(Some((first, 1u32)), move |&(c, m)| {
        let m2 = 2.0 * m as f64;
        let next = c * (two_h - m2) * (two_h - m2 - 1.0) / ((m2 + 1.0) * (m2 + 2.0));
        Some((next, m + 1))
    })
    .map(|(c, _)| c)
}

/// `ρ_H(k)` for `|k| ≥ RHO_SERIES_THRESHOLD`, summed in powers of `1/k²`.
fn rho_series(two_h: f64, k: f64) -> f64 {
    let x = 1.0 / (k * k);
    let mut sum = 0.0;
    let mut xm = x;
    for c in even_binomials(two_h).take(40) {
        let term = c * xm;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        xm *= x;
    }
    k.powf(two_h) * sum
}

/// Autocovariance of fractional Gaussian noise at integer lag `k`.
pub fn rho(h: HurstParam, k: i64) -> f64 {
    let k = k.unsigned_abs();
    if k == 0 {
        return 1.0;
    }
    if h.is_brownian() {
        return 0.0;
    }
    let two_h = h.two_h();
    if k >= RHO_SERIES_THRESHOLD {
        return rho_series(two_h, k as f64);
    }
    let kf = k as f64;
    0.5 * ((kf + 1.0).powf(two_h) + (kf - 1.0).powf(two_h) - 2.0 * kf.powf(two_h))
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}

fn check_index(name: &'static str, value: usize, n: usize) -> Result<()> {
    if value < n {
        Ok(())
    } else {
        Err(Error::Index {
            name,
            value: value as i64,
            bound: n,
        })
    }
}

/// `E[B_s B_t] = ½(t^{2H} + s^{2H} - |t-s|^{2H})` on `[0,1]²`.
pub fn fbm_covariance(h: HurstParam, s: f64, t: f64) -> Result<f64> {
    check_unit("s", s)?;
    check_unit("t", t)?;
    Ok(fbm_covariance_unchecked(h, s, t))
}

#[inline]
pub(crate) fn fbm_covariance_unchecked(h: HurstParam, s: f64, t: f64) -> f64 {
    if h.is_brownian() {
        return s.min(t);
    }
    let two_h = h.two_h();
    0.5 * (t.powf(two_h) + s.powf(two_h) - (t - s).abs().powf(two_h))
}

/// `α_{k,t} = ⟨1_{[k/n,(k+1)/n]}, 1_{[0,t]}⟩_𝔥 = E[(B_{(k+1)/n} - B_{k/n}) B_t]`.
pub fn alpha(h: HurstParam, n: usize, k: usize, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size n must be positive".into()));
    }
    check_index("k", k, n)?;
    check_unit("t", t)?;
    Ok(alpha_unchecked(h, n, k, t))
}

#[inline]
pub(crate) fn alpha_unchecked(h: HurstParam, n: usize, k: usize, t: f64) -> f64 {
    let nf = n as f64;
    let lo = k as f64 / nf;
    let hi = (k + 1) as f64 / nf;
    if h.is_brownian() {
        return (hi.min(t) - lo).max(0.0);
    }
    let two_h = h.two_h();
    0.5 * (hi.powf(two_h) - lo.powf(two_h) - (t - hi).abs().powf(two_h)
        + (t - lo).abs().powf(two_h))
}

/// `α_{k,k/n}` in its integer form `½ n^{-2H}((k+1)^{2H} - k^{2H} - 1)`.
///
/// This is the coefficient that couples the weight `f(B_{k/n})` to the
/// increment that follows it. Evaluating on integers avoids the rounding in
/// `k/n`.
#[inline]
pub fn alpha_diagonal(h: HurstParam, n: usize, k: usize) -> f64 {
    if h.is_brownian() {
        return 0.0;
    }
    let two_h = h.two_h();
    let kf = k as f64;
    0.5 * (n as f64).powf(-two_h) * ((kf + 1.0).powf(two_h) - kf.powf(two_h) - 1.0)
}

/// `β_{j,k} = n^{-2H} ρ_H(j-k)`.
pub fn beta(h: HurstParam, n: usize, j: usize, k: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size n must be positive".into()));
    }
    check_index("j", j, n)?;
    check_index("k", k, n)?;
    Ok((n as f64).powf(-h.two_h()) * rho(h, j as i64 - k as i64))
}

/// Limit variance `σ²_{H,q}` with a certified truncation report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaSq {
    pub value: f64,
    /// Lags `|k| ≤ truncation_k` are summed explicitly.
    pub truncation_k: u64,
    /// Bound on the error of the approximated tail `|k| > truncation_k`.
    pub tail_bound: f64,
}

fn factorial(q: u32) -> f64 {
    (1..=q).map(f64::from).product()
}

/// Decay exponent of `|ρ_H(k)|^q`, that is `q(2H-2)`.
fn series_exponent(h: HurstParam, q: u32) -> f64 {
    q as f64 * (h.two_h() - 2.0)
}

fn check_convergent(h: HurstParam, q: u32) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidArgument("Hermite rank q must be at least 1".into()));
    }
    let gamma = series_exponent(h, q);
    if gamma >= -1.0 {
        return Err(Error::DivergentSeries {
            hurst: h.value(),
            q,
            exponent: gamma,
        });
    }
    Ok(gamma)
}

/// Plain symmetric partial sum `q! Σ_{|k|≤K} ρ_H(k)^q`, accumulated from the
/// largest lag inwards.
pub fn sigma_sq_partial(h: HurstParam, q: u32, truncation_k: u64) -> f64 {
    let qi = q as i32;
    let mut s = 0.0;
    for k in (1..=truncation_k).rev() {
        s += rho(h, k as i64).powi(qi);
    }
    factorial(q) * (1.0 + 2.0 * s)
}

/// Integral-comparison bound on `q! Σ_{|k|>K} |ρ_H(k)|^q`.
///
/// Uses `|ρ_H(k)| ≤ |H(2H-1)|(1+1/K) k^{2H-2}` for `k > K ≥ 64` and
/// `Σ_{k>K} k^γ ≤ K^{γ+1}/(-γ-1)`.
pub fn sigma_sq_tail_bound(h: HurstParam, q: u32, truncation_k: u64) -> Result<f64> {
    let gamma = check_convergent(h, q)?;
    if h.is_brownian() {
        return Ok(0.0);
    }
    let k = truncation_k.max(RHO_SERIES_THRESHOLD) as f64;
    let hv = h.value();
    let c = (hv * (2.0 * hv - 1.0)).abs() * (1.0 + 1.0 / k);
    Ok(2.0 * factorial(q) * c.powi(q as i32) * k.powf(gamma + 1.0) / (-gamma - 1.0))
}

/// Bernoulli numbers `B_2, B_4, ..., B_12`.
const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (a+k)^{-s}` for `s > 1` and large `a`
/// (Euler–Maclaurin with no explicit terms). Returns the value and the
/// magnitude of the first omitted correction.
fn hurwitz_zeta_large_a(s: f64, a: f64) -> (f64, f64) {
    let mut sum = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // rising factorial s(s+1)...(s+2j-2) and (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut apow = a.powf(-s - 1.0);
    let mut last = 0.0;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / fact * rising * apow;
        sum += term;
        last = term.abs();
        let jj = (j + 1) as f64;
        rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
        fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
        apow /= a * a;
    }
    (sum, last)
}

/// Power-series coefficients of `g(x)^q` where
/// `g(x) = Σ_{m≥0} C(2H, 2m+2) x^m`, so that `ρ_H(k)^q = k^{q(2H-2)} g(k^{-2})^q`.
fn tail_expansion(two_h: f64, q: u32, terms: usize) -> Vec<f64> {
    let g: Vec<f64> = even_binomials(two_h).take(terms).collect();
    let mut out = vec![0.0; terms];
    out[0] = 1.0;
    for _ in 0..q {
        let mut next = vec![0.0; terms];
        for (i, &a) in out.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in g.iter().enumerate().take(terms - i) {
                next[i + j] += a * b;
            }
        }
        out = next;
    }
    out
}

/// Number of lags summed explicitly before the asymptotic tail takes over.
const SIGMA_DIRECT_LAGS: u64 = 4096;
const SIGMA_TAIL_TERMS: usize = 8;

/// `σ²_{H,q} = q! Σ_{k∈ℤ} ρ_H(k)^q`.
///
/// Lags up to `K` are summed directly; the remaining tail is evaluated from
/// the expansion `ρ_H(k)^q = Σ_j e_j k^{q(2H-2)-2j}` and Hurwitz zeta values,
/// which is what makes `tol = 1e-10` reachable for `H` close to
/// `1 - 1/(2q)` where the plain series converges like `K^{q(2H-2)+1}`.
/// `K` is grown until the reported `tail_bound` drops below `tol`.
pub fn sigma_sq(h: HurstParam, q: u32, tol: f64) -> Result<SigmaSq> {
    let gamma = check_convergent(h, q)?;
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            domain: "(0, inf)",
        });
    }
    let qf = factorial(q);
    if h.is_brownian() {
        return Ok(SigmaSq {
            value: qf,
            truncation_k: 0,
            tail_bound: 0.0,
        });
    }
    let coeffs = tail_expansion(h.two_h(), q, SIGMA_TAIL_TERMS + 1);
    let mut k = SIGMA_DIRECT_LAGS;
    loop {
        let a = (k + 1) as f64;
        let mut tail = 0.0;
        let mut em_err = 0.0;
        for (j, &e) in coeffs.iter().take(SIGMA_TAIL_TERMS).enumerate() {
            let (z, err) = hurwitz_zeta_large_a(2.0 * j as f64 - gamma, a);
            tail += e * z;
            em_err += (e * err).abs();
        }
        let omitted = {
            let j = SIGMA_TAIL_TERMS as f64;
            let (z, _) = hurwitz_zeta_large_a(2.0 * j - gamma, a);
            2.0 * (coeffs[SIGMA_TAIL_TERMS] * z).abs()
        };
        let tail_bound = 2.0 * qf * (em_err + omitted) + 4.0 * f64::EPSILON * qf;
        if tail_bound < tol || k >= 1 << 22 {
            let partial = sigma_sq_partial(h, q, k);
            return Ok(SigmaSq {
                value: partial + 2.0 * qf * tail,
                truncation_k: k,
                tail_bound,
            });
        }
        k *= 4;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hp(v: f64) -> HurstParam {
        HurstParam::new(v).unwrap()
    }

    /// Brute-force `q! Σ_{|k|≤K} ρ^q` with ρ from `expm1/ln_1p`, then
    /// Richardson elimination of the `K^{γ+1}` and `K^γ` tail terms.
    fn sigma_sq_oracle(hv: f64, q: i32) -> f64 {
        let two_h = 2.0 * hv;
        let r = |k: f64| -> f64 {
            if k == 0.0 {
                return 1.0;
            }
            let u = 1.0 / k;
            let a = (two_h * u.ln_1p()).exp_m1();
            let b = (two_h * (-u).ln_1p()).exp_m1();
            0.5 * k.powf(two_h) * (a + b)
        };
        let g = q as f64 * (two_h - 2.0);
        let ks = [1_000_000u64, 2_000_000, 4_000_000];
        let mut sums = [0.0; 3];
        let (mut s, mut c) = (0.0f64, 0.0f64);
        let mut idx = 0;
        for k in 1..=ks[2] {
            let y = 2.0 * r(k as f64).powi(q) - c;
            let t = s + y;
            c = (t - s) - y;
            s = t;
            if k == ks[idx] {
                sums[idx] = s;
                idx += 1;
            }
        }
        let fact: f64 = (1..=q).map(|i| i as f64).product();
        // S(K) = σ + a K^{g+1} + b K^g, solved exactly for σ
        let m = |k: u64| [1.0, (k as f64).powf(g + 1.0), (k as f64).powf(g)];
        let rows = [m(ks[0]), m(ks[1]), m(ks[2])];
        let det = |a: [[f64; 3]; 3]| {
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        };
        let mut num = rows;
        for i in 0..3 {
            num[i][0] = 1.0 + sums[i];
        }
        fact * det(num) / det(rows)
    }

    #[test]
    fn sigma_sq_matches_extrapolated_brute_force() {
        let oracle = sigma_sq_oracle(0.6, 2);
        let s = sigma_sq(hp(0.6), 2, 1e-10).unwrap();
        assert!((s.value - oracle).abs() < 1e-9, "{} vs {}", s.value, oracle);
        assert!(s.tail_bound <= 1e-10);
        let oracle = sigma_sq_oracle(0.3, 3);
        let s = sigma_sq(hp(0.3), 3, 1e-10).unwrap();
        assert!((s.value - oracle).abs() < 1e-9, "{} vs {}", s.value, oracle);
    }

    #[test]
    fn hurst_rejects_endpoints() {
        assert!(HurstParam::new(0.0).is_err());
        assert!(HurstParam::new(1.0).is_err());
        assert!(HurstParam::new(f64::NAN).is_err());
        assert!(HurstParam::new(0.3).is_ok());
    }

    #[test]
    fn rho_examples() {
        for h in [0.1, 0.5, 0.9] {
            assert_eq!(rho(hp(h), 0), 1.0);
        }
        assert_eq!(rho(hp(0.5), 3), 0.0);
        assert_relative_eq!(rho(hp(0.75), 1), 0.5 * (2f64.powf(1.5) - 2.0), epsilon = 1e-15);
        assert_relative_eq!(rho(hp(0.75), 1), 0.41421356, epsilon = 1e-8);
    }

    #[test]
    fn rho_is_even() {
        for k in [1, 5, 63, 64, 1000] {
            assert_eq!(rho(hp(0.3), k), rho(hp(0.3), -k));
        }
    }

    #[test]
    fn rho_series_matches_direct_at_threshold() {
        // At moderate k the direct formula is still accurate to ~1e-10 relative.
        for h in [0.2, 0.35, 0.7, 0.95] {
            let two_h = 2.0 * h;
            for k in [64.0, 80.0, 200.0] {
                let direct = 0.5
                    * ((k + 1.0f64).powf(two_h) + (k - 1.0f64).powf(two_h)
                        - 2.0 * k.powf(two_h));
                let series = rho_series(two_h, k);
                assert_relative_eq!(direct, series, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn rho_series_vs_extended_precision() {
        // Second-difference of k^{2H} evaluated with f64 at shifted origin
        // using the exact identity (k±1)^{2H} = k^{2H}(1 ± 1/k)^{2H} and
        // ln_1p, summed as an independent route.
        for h in [0.500_001, 0.6, 0.9] {
            let two_h = 2.0 * h;
            let k = 1.0e6_f64;
            let up = (two_h * (1.0 / k).ln_1p()).exp_m1();
            let down = (two_h * (-1.0 / k).ln_1p()).exp_m1();
            let independent = 0.5 * k.powf(two_h) * (up + down);
            let series = rho(hp(h), 1_000_000);
            // `up + down` cancels to ~1e-12 relative of its parts.
            assert_relative_eq!(independent, series, max_relative = 1e-4);
            let leading = h * (two_h - 1.0) * k.powf(two_h - 2.0);
            assert_relative_eq!(series, leading, max_relative = 1e-11);
        }
    }

    #[test]
    fn fbm_covariance_examples() {
        let h = hp(0.7);
        assert_eq!(fbm_covariance(h, 0.0, 0.4).unwrap(), 0.0);
        assert_relative_eq!(fbm_covariance(hp(0.5), 0.3, 0.7).unwrap(), 0.3, epsilon = 1e-15);
        assert_relative_eq!(fbm_covariance(h, 1.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(fbm_covariance(h, -0.1, 0.5).is_err());
        assert!(fbm_covariance(h, 0.5, 1.5).is_err());
        assert_eq!(
            fbm_covariance(h, 0.2, 0.9).unwrap(),
            fbm_covariance(h, 0.9, 0.2).unwrap()
        );
    }

    #[test]
    fn alpha_examples() {
        assert_relative_eq!(alpha(hp(0.5), 4, 1, 1.0).unwrap(), 0.25, epsilon = 1e-15);
        assert_eq!(alpha(hp(0.5), 10, 3, 0.3).unwrap(), 0.0);
        let h = hp(0.3);
        let (n, k) = (16, 5);
        let t = k as f64 / n as f64;
        let closed = 0.5
            * (n as f64).powf(-0.6)
            * ((k as f64 + 1.0).powf(0.6) - (k as f64).powf(0.6) - 1.0);
        assert_relative_eq!(alpha(h, n, k, t).unwrap(), closed, max_relative = 1e-12);
        assert_relative_eq!(alpha_diagonal(h, n, k), closed, max_relative = 1e-14);
        assert!(alpha(h, n, n, 0.5).is_err());
        assert!(alpha(h, n, 0, 1.5).is_err());
    }

    #[test]
    fn alpha_matches_riemann_inner_product() {
        // For H > 1/2, ⟨1_A, 1_B⟩ = H(2H-1) ∫_A ∫_B |u-v|^{2H-2} du dv.
        // Midpoint rule on a fine grid; the corner singularity is integrable.
        let hv = 0.7;
        let h = hp(hv);
        let (n, k) = (8usize, 3usize);
        let m = 4000usize;
        let cell = 1.0 / m as f64;
        let a_cells = (k * m / n)..((k + 1) * m / n);
        let b_cells = 0..(k * m / n);
        let mut acc = 0.0;
        for a in a_cells {
            let u = (a as f64 + 0.5) * cell;
            for b in b_cells.clone() {
                let v = (b as f64 + 0.5) * cell;
                acc += (u - v).abs().powf(2.0 * hv - 2.0);
            }
        }
        acc *= hv * (2.0 * hv - 1.0) * cell * cell;
        assert_relative_eq!(acc, alpha_diagonal(h, n, k), max_relative = 2e-3);
    }

    #[test]
    fn alpha_sums_telescope() {
        for h in [0.2, 0.5, 0.8] {
            let h = hp(h);
            let n = 37;
            for i in 0..=20 {
                let t = i as f64 / 20.0;
                let s: f64 = (0..n).map(|k| alpha(h, n, k, t).unwrap()).sum();
                assert_relative_eq!(
                    s,
                    fbm_covariance(h, 1.0, t).unwrap(),
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn beta_examples() {
        let h = hp(0.3);
        assert_relative_eq!(beta(h, 12, 4, 4).unwrap(), 12f64.powf(-0.6), epsilon = 1e-15);
        assert_eq!(beta(hp(0.5), 8, 2, 5).unwrap(), 0.0);
        assert_relative_eq!(
            beta(hp(0.75), 10, 3, 2).unwrap(),
            10f64.powf(-1.5) * 0.41421356237309515,
            max_relative = 1e-14
        );
        assert_eq!(beta(h, 9, 1, 7).unwrap(), beta(h, 9, 7, 1).unwrap());
        assert!(beta(h, 9, 9, 0).is_err());
    }

    #[test]
    fn sigma_sq_brownian() {
        let s = sigma_sq(hp(0.5), 2, 1e-10).unwrap();
        assert_eq!(s.value, 2.0);
        assert_eq!(s.tail_bound, 0.0);
        assert_eq!(sigma_sq(hp(0.5), 3, 1e-10).unwrap().value, 6.0);
    }

    #[test]
    fn sigma_sq_rejects_divergent() {
        // q(2H-2) >= -1  <=>  H >= 1 - 1/(2q)
        assert!(matches!(
            sigma_sq(hp(0.75), 2, 1e-8),
            Err(Error::DivergentSeries { .. })
        ));
        assert!(sigma_sq(hp(0.85), 3, 1e-8).is_err());
        assert!(sigma_sq(hp(0.8), 3, 1e-8).is_ok());
        assert!(sigma_sq(hp(0.74), 2, 1e-8).is_ok());
    }

    #[test]
    fn sigma_sq_tail_bound_dominates_partial_sum_change() {
        for (h, q) in [(0.6, 2), (0.3, 2), (0.7, 3), (0.2, 3)] {
            let h = hp(h);
            for k in [64u64, 256, 1000] {
                let d = (sigma_sq_partial(h, q, k) - sigma_sq_partial(h, q, 4 * k)).abs();
                assert!(sigma_sq_tail_bound(h, q, k).unwrap() >= d);
            }
        }
    }
}
