//! Browser bindings for the demo page in `www/`.
//!
//! Three operations: sample an fBm path, tabulate the rate exponent `φ(H)`,
//! and draw paired samples of `F_n` and its mixed-Gaussian limit `Sη`.
//! Each export is a thin wrapper over a plain Rust function of the same name
//! with a `_impl` suffix, which is what the native tests call.

use hermvar::covariance::{sigma_sq, HurstParam};
use hermvar::generator::{Method, PathSampler};
use hermvar::harness::{phi_two_branch, SIGMA_TOL};
use hermvar::seed::{derive_seed, GaussianStream, ETA_TAG, PATH_TAG};
use hermvar::variation::{in_theorem_range, limit_scale_with, weighted_variation};
use hermvar::weight::WeightFunction;
use wasm_bindgen::prelude::*;

/// Largest path the page may request.
pub const MAX_N: usize = 1 << 16;
pub const MAX_REPLICATES: usize = 20_000;

fn hurst(h: f64) -> Result<HurstParam, String> {
    HurstParam::new(h).map_err(|e| e.to_string())
}

/// `B_{k/n}`, `k = 0..=n`, by circulant embedding.
pub fn sample_path_impl(h: f64, n: usize, seed: u64) -> Result<Vec<f64>, String> {
    if !(2..=MAX_N).contains(&n) {
        return Err(format!("n must lie in 2..={MAX_N}"));
    }
    let sampler = PathSampler::new(hurst(h)?, n, Method::Circulant).map_err(|e| e.to_string())?;
    Ok(sampler.sample(derive_seed(seed, PATH_TAG, 0)).values().to_vec())
}

/// `φ(H)` at `H = i/(points+1)`, `i = 1..=points`; NaN outside the
/// theorem's range.
pub fn phi_curve_impl(q: u32, points: usize) -> Result<Vec<f64>, String> {
    if q < 2 {
        return Err("q must be at least 2".into());
    }
    if points == 0 || points > 10_000 {
        return Err("points must lie in 1..=10000".into());
    }
    Ok((1..=points)
        .map(|i| {
            let h = HurstParam::new(i as f64 / (points + 1) as f64).expect("interior point");
            if in_theorem_range(q, h) {
                phi_two_branch(q, h)
            } else {
                f64::NAN
            }
        })
        .collect())
}

/// `replicates` values of `F_n` followed by as many of `Sη`, coupled
/// through the path as in the rate experiments.
pub fn limit_samples_impl(
    h: f64,
    q: u32,
    n: usize,
    weight: &str,
    replicates: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let hp = hurst(h)?;
    if !(2..=MAX_N).contains(&n) {
        return Err(format!("n must lie in 2..={MAX_N}"));
    }
    if !(1..=MAX_REPLICATES).contains(&replicates) {
        return Err(format!("replicates must lie in 1..={MAX_REPLICATES}"));
    }
    let f = WeightFunction::from_label(weight).map_err(|e| e.to_string())?;
    let s2 = sigma_sq(hp, q, SIGMA_TOL).map_err(|e| e.to_string())?.value;
    let sampler = PathSampler::new(hp, n, Method::Circulant).map_err(|e| e.to_string())?;
    let mut out = vec![0.0; 2 * replicates];
    for r in 0..replicates {
        let path = sampler.sample(derive_seed(seed, PATH_TAG, r as u64));
        out[r] = weighted_variation(&path, &f, q).map_err(|e| e.to_string())?;
        let eta = GaussianStream::new(derive_seed(seed, ETA_TAG, r as u64)).next_normal();
        out[replicates + r] = limit_scale_with(&path, &f, s2).s * eta;
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn sample_path(h: f64, n: usize, seed: u64) -> Result<Vec<f64>, JsValue> {
    sample_path_impl(h, n, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn phi_curve(q: u32, points: usize) -> Result<Vec<f64>, JsValue> {
    phi_curve_impl(q, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn limit_samples(
    h: f64,
    q: u32,
    n: usize,
    weight: &str,
    replicates: usize,
    seed: u64,
) -> Result<Vec<f64>, JsValue> {
    limit_samples_impl(h, q, n, weight, replicates, seed).map_err(|e| JsValue::from_str(&e))
}
