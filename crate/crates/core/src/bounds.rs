//! Exact evaluation of the α/β covariance sums whose growth in `n` the
//! summation lemmas bound, and log-log exponent fits against the predicted
//! rates.

use serde::{Deserialize, Serialize};

use crate::covariance::{alpha_unchecked, rho, HurstParam};
use crate::error::{Error, Result};
use crate::stats::least_squares;

/// Least-squares fit of `log value = intercept + slope · log n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in log space.
    pub max_residual: f64,
    /// Slope through the last two points only (finite-n bias diagnostic).
    pub tail_slope: f64,
}

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(
            "an exponent fit needs at least three points".into(),
        ));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::InvalidArgument(
            "grid sizes must be strictly increasing".into(),
        ));
    }
    if let Some(&(_, v)) = points.iter().find(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(Error::Domain {
            name: "value",
            value: v,
            domain: "(0, inf)",
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    let m = xs.len();
    let tail_slope = (ys[m - 1] - ys[m - 2]) / (xs[m - 1] - xs[m - 2]);
    Ok(ExponentFit {
        points: points.to_vec(),
        slope,
        intercept,
        max_residual,
        tail_slope,
    })
}

/// Uniform grid `i/(size-1)`, `i = 0..size`, on `[0, 1]`.
pub fn unit_grid(size: usize) -> Vec<f64> {
    (0..size).map(|i| i as f64 / (size - 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBounds {
    /// `max_{k, t} |α_{k,t}|`.
    pub max_abs_alpha: f64,
    /// `max_t Σ_k |α_{k,t}|`.
    pub sup_sum_alpha: f64,
}

/// Both α statistics over `k = 0..n` and a uniform `t` grid of the given size.
pub fn alpha_bounds(h: HurstParam, n: usize, t_grid_size: usize) -> Result<AlphaBounds> {
    if t_grid_size < 64 {
        return Err(Error::InvalidArgument(format!(
            "t grid needs at least 64 points, got {t_grid_size}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("grid size n must be positive".into()));
    }
    let mut max_abs: f64 = 0.0;
    let mut sup_sum: f64 = 0.0;
    for t in unit_grid(t_grid_size) {
        let mut sum = 0.0;
        for k in 0..n {
            let a = alpha_unchecked(h, n, k, t).abs();
            max_abs = max_abs.max(a);
            sum += a;
        }
        sup_sum = sup_sum.max(sum);
    }
    Ok(AlphaBounds {
        max_abs_alpha: max_abs,
        sup_sum_alpha: sup_sum,
    })
}

fn check_power(name: &'static str, a: f64) -> Result<()> {
    if a >= 1.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: a,
            domain: "[1, inf)",
        })
    }
}

/// `|ρ_H(h)|^a` for `h = 0..len`.
fn abs_rho_powers(h: HurstParam, len: usize, a: f64) -> Vec<f64> {
    (0..len).map(|lag| rho(h, lag as i64).abs().powf(a)).collect()
}

/// `Σ_j |β_{j,i}|^a`.
pub fn beta_power_sum(h: HurstParam, n: usize, a: f64, i: usize) -> Result<f64> {
    check_power("a", a)?;
    if i >= n {
        return Err(Error::Index {
            name: "i",
            value: i as i64,
            bound: n,
        });
    }
    let table = abs_rho_powers(h, n, a);
    let s: f64 = (0..n).map(|j| table[j.abs_diff(i)]).sum();
    Ok((n as f64).powf(-h.two_h() * a) * s)
}

/// `Σ_{j,k} |β_{j,k}|^a` via lags: `n^{-2aH} Σ_h (n - |h|) |ρ_H(h)|^a`.
pub fn beta_power_double_sum(h: HurstParam, n: usize, a: f64) -> Result<f64> {
    check_power("a", a)?;
    if n == 0 {
        return Err(Error::InvalidArgument("grid size n must be positive".into()));
    }
    let table = abs_rho_powers(h, n, a);
    let mut s = n as f64 * table[0];
    for (lag, &v) in table.iter().enumerate().skip(1) {
        s += 2.0 * (n - lag) as f64 * v;
    }
    Ok((n as f64).powf(-h.two_h() * a) * s)
}

/// `Σ_{j,j'} |β_{j,ℓ}|^a |β_{j',ℓ}|^a |β_{j,j'}|^b`, exact `O(n²)`.
pub fn triple_beta_sum(h: HurstParam, n: usize, a: f64, b: f64, ell: usize) -> Result<f64> {
    check_power("a", a)?;
    check_power("b", b)?;
    if ell == 0 || ell >= n {
        return Err(Error::Index {
            name: "ell",
            value: ell as i64,
            bound: n,
        });
    }
    let ta = abs_rho_powers(h, n, a);
    let tb = abs_rho_powers(h, n, b);
    let mut total = 0.0;
    for j in 0..n {
        let wj = ta[j.abs_diff(ell)];
        if wj == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for jp in 0..n {
            inner += ta[jp.abs_diff(ell)] * tb[j.abs_diff(jp)];
        }
        total += wj * inner;
    }
    Ok((n as f64).powf(-h.two_h() * (2.0 * a + b)) * total)
}

/// Predicted growth exponents `γ` in `value ≤ C n^γ`.
pub mod predicted {
    use crate::covariance::HurstParam;

    /// `|α_{k,t}| ≤ n^{-(2H ∧ 1)}`.
    pub fn alpha_max(h: HurstParam) -> f64 {
        -(h.two_h().min(1.0))
    }

    /// Branches `(1-2a, -2aH)` of `Σ_j |β_{j,i}|^a`.
    pub fn beta_power_sum_branches(h: HurstParam, a: f64) -> (f64, f64) {
        (1.0 - 2.0 * a, -2.0 * a * h.value())
    }

    /// Branches `(2-2a, 1-2aH)` of `Σ_{j,k} |β_{j,k}|^a`.
    pub fn beta_double_sum_branches(h: HurstParam, a: f64) -> (f64, f64) {
        (2.0 - 2.0 * a, 1.0 - 2.0 * a * h.value())
    }

    /// Branches `(-2H(2a+b), 2-2(2a+b))` of the triple sum.
    pub fn triple_sum_branches(h: HurstParam, a: f64, b: f64) -> (f64, f64) {
        let s = 2.0 * a + b;
        (-h.two_h() * s, 2.0 - 2.0 * s)
    }

    pub fn max_of((x, y): (f64, f64)) -> f64 {
        x.max(y)
    }

    pub fn gap((x, y): (f64, f64)) -> f64 {
        (x - y).abs()
    }
}

/// Which lemma quantity a sweep row refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaQuantity {
    AlphaMax,
    AlphaSupSum,
    BetaPowerSum,
    BetaDoubleSum,
    TripleBetaSum,
}

impl LemmaQuantity {
    pub fn name(self) -> &'static str {
        match self {
            Self::AlphaMax => "alpha_max",
            Self::AlphaSupSum => "alpha_sup_sum",
            Self::BetaPowerSum => "beta_power_sum",
            Self::BetaDoubleSum => "beta_double_sum",
            Self::TripleBetaSum => "triple_beta_sum",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "alpha_max" | "alpha" => Ok(Self::AlphaMax),
            "alpha_sup_sum" => Ok(Self::AlphaSupSum),
            "beta_power_sum" | "beta" => Ok(Self::BetaPowerSum),
            "beta_double_sum" => Ok(Self::BetaDoubleSum),
            "triple_beta_sum" | "triple" => Ok(Self::TripleBetaSum),
            other => Err(Error::InvalidArgument(format!("unknown lemma quantity '{other}'"))),
        }
    }
}

/// One row of a lemma sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub lemma: LemmaQuantity,
    pub hurst: f64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub value: f64,
    /// `None` where the lemma only asserts boundedness.
    pub predicted_exponent: Option<f64>,
    pub fitted_slope: f64,
}

/// Parameters of a lemma sweep. `a`, `b` are ignored where unused; the index
/// (`i` or `ℓ`) is `n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaSweep {
    pub lemma: LemmaQuantity,
    pub hurst: HurstParam,
    pub a: f64,
    pub b: f64,
    pub t_grid_size: usize,
}

impl LemmaSweep {
    pub fn value_at(&self, n: usize) -> Result<f64> {
        let h = self.hurst;
        match self.lemma {
            LemmaQuantity::AlphaMax => Ok(alpha_bounds(h, n, self.t_grid_size)?.max_abs_alpha),
            LemmaQuantity::AlphaSupSum => Ok(alpha_bounds(h, n, self.t_grid_size)?.sup_sum_alpha),
            LemmaQuantity::BetaPowerSum => beta_power_sum(h, n, self.a, n / 2),
            LemmaQuantity::BetaDoubleSum => beta_power_double_sum(h, n, self.a),
            LemmaQuantity::TripleBetaSum => triple_beta_sum(h, n, self.a, self.b, n / 2),
        }
    }

    pub fn predicted_exponent(&self) -> Option<f64> {
        let h = self.hurst;
        match self.lemma {
            LemmaQuantity::AlphaMax => Some(predicted::alpha_max(h)),
            LemmaQuantity::AlphaSupSum => None,
            LemmaQuantity::BetaPowerSum => {
                Some(predicted::max_of(predicted::beta_power_sum_branches(h, self.a)))
            }
            LemmaQuantity::BetaDoubleSum => {
                Some(predicted::max_of(predicted::beta_double_sum_branches(h, self.a)))
            }
            LemmaQuantity::TripleBetaSum => Some(predicted::max_of(
                predicted::triple_sum_branches(h, self.a, self.b),
            )),
        }
    }

    /// Evaluate over `n_grid` (in parallel) and fit the exponent.
    pub fn run(&self, n_grid: &[usize]) -> Result<(Vec<LemmaRow>, ExponentFit)> {
        use rayon::prelude::*;
        let values: Vec<f64> = n_grid
            .par_iter()
            .map(|&n| self.value_at(n))
            .collect::<Result<_>>()?;
        let points: Vec<(f64, f64)> = n_grid.iter().map(|&n| n as f64).zip(values).collect();
        let fit = fit_exponent(&points)?;
        let rows = points
            .iter()
            .map(|&(n, value)| LemmaRow {
                lemma: self.lemma,
                hurst: self.hurst.value(),
                a: self.a,
                b: self.b,
                n: n as usize,
                value,
                predicted_exponent: self.predicted_exponent(),
                fitted_slope: fit.slope,
            })
            .collect();
        Ok((rows, fit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::beta;
    use approx::assert_relative_eq;

    fn hp(v: f64) -> HurstParam {
        HurstParam::new(v).unwrap()
    }

    fn dyadic(lo: u32, hi: u32) -> Vec<usize> {
        (lo..=hi).map(|e| 1usize << e).collect()
    }

    #[test]
    fn fit_exact_power_laws() {
        let pts: Vec<(f64, f64)> = dyadic(4, 10).iter().map(|&n| (n as f64, (n as f64).powf(-0.5))).collect();
        let fit = fit_exponent(&pts).unwrap();
        assert_relative_eq!(fit.slope, -0.5, epsilon = 1e-12);
        assert!(fit.max_residual < 1e-12);
        let pts: Vec<(f64, f64)> = dyadic(4, 10).iter().map(|&n| (n as f64, 3.0 * (n as f64).powf(0.1))).collect();
        let fit = fit_exponent(&pts).unwrap();
        assert_relative_eq!(fit.slope, 0.1, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept, 3f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn fit_with_log_correction() {
        let pts: Vec<(f64, f64)> = dyadic(8, 16)
            .iter()
            .map(|&n| {
                let n = n as f64;
                (n, (1.0 + 1.0 / n.ln()) / n)
            })
            .collect();
        let fit = fit_exponent(&pts).unwrap();
        assert!(fit.slope > -1.05 && fit.slope < -0.95);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(fit_exponent(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(fit_exponent(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(fit_exponent(&[(1.0, 1.0), (1.0, 2.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn alpha_bounds_brownian() {
        for n in [8, 64, 500] {
            let b = alpha_bounds(hp(0.5), n, 64).unwrap();
            assert_relative_eq!(b.max_abs_alpha, 1.0 / n as f64, max_relative = 1e-12);
        }
        assert!(alpha_bounds(hp(0.5), 8, 10).is_err());
    }

    #[test]
    fn alpha_bound_holds_for_rough_paths() {
        for n in dyadic(6, 9) {
            let b = alpha_bounds(hp(0.3), n, 256).unwrap();
            let bound = (n as f64).powf(predicted::alpha_max(hp(0.3)));
            assert!(b.max_abs_alpha <= bound + 1e-12, "n={n}");
        }
    }

    #[test]
    fn alpha_max_constant_for_smooth_paths() {
        // t = 1, k = n/2: n|α| -> 2H 2^{1-2H} from a first-order expansion
        for hv in [0.7, 0.9] {
            let h = hp(hv);
            let limit = 2.0 * hv * 2f64.powf(1.0 - 2.0 * hv);
            let mut prev = f64::INFINITY;
            for n in dyadic(8, 11) {
                let b = alpha_bounds(h, n, 256).unwrap();
                let c = b.max_abs_alpha * n as f64;
                assert!((c - limit).abs() < 0.01, "H={hv} n={n} c={c}");
                assert!((c - limit).abs() <= prev + 1e-12);
                prev = (c - limit).abs();
            }
        }
    }

    #[test]
    fn beta_power_sum_examples() {
        for i in [0, 3, 9] {
            assert_relative_eq!(beta_power_sum(hp(0.5), 10, 1.0, i).unwrap(), 0.1, epsilon = 1e-15);
        }
        assert!(beta_power_sum(hp(0.5), 10, 0.5, 0).is_err());
        assert!(beta_power_sum(hp(0.5), 10, 1.0, 10).is_err());
    }

    #[test]
    fn double_sum_lag_form_matches_naive() {
        for (hv, a) in [(0.3, 1.0), (0.6, 2.0), (0.9, 1.5)] {
            let h = hp(hv);
            for n in [7usize, 64, 512] {
                let mut naive = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        naive += beta(h, n, j, k).unwrap().abs().powf(a);
                    }
                }
                assert_relative_eq!(beta_power_double_sum(h, n, a).unwrap(), naive, max_relative = 1e-12);
            }
        }
        assert_relative_eq!(beta_power_double_sum(hp(0.5), 33, 1.0).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn triple_sum_brownian_single_term() {
        let n = 40;
        let v = triple_beta_sum(hp(0.5), n, 1.0, 1.0, 20).unwrap();
        assert_relative_eq!(v, (n as f64).powf(-3.0), max_relative = 1e-14);
        let v = triple_beta_sum(hp(0.5), n, 2.0, 1.5, 7).unwrap();
        assert_relative_eq!(v, (n as f64).powf(-5.5), max_relative = 1e-14);
        assert!(triple_beta_sum(hp(0.5), n, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn triple_sum_reflection_symmetry() {
        for hv in [0.5, 0.3, 0.8] {
            let n = 50;
            for ell in [1, 10, 24] {
                let a = triple_beta_sum(hp(hv), n, 1.3, 1.1, ell).unwrap();
                let b = triple_beta_sum(hp(hv), n, 1.3, 1.1, n - 1 - ell).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn sweep_rows_carry_fit() {
        let sweep = LemmaSweep {
            lemma: LemmaQuantity::BetaDoubleSum,
            hurst: hp(0.6),
            a: 2.0,
            b: 1.0,
            t_grid_size: 64,
        };
        let (rows, fit) = sweep.run(&dyadic(5, 8)).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.fitted_slope == fit.slope));
        assert_relative_eq!(rows[0].predicted_exponent.unwrap(), -1.4, epsilon = 1e-12);
    }
}
