//! Exact sampling of fractional Brownian motion on the grid `{k/n}`.
//!
//! Both methods draw the stationary increment sequence (fractional Gaussian
//! noise with autocovariance `ρ_H`) at unit scale, multiply by `n^{-H}` and
//! cumulate. [`CholeskyGenerator`] factors the `n × n` Toeplitz covariance
//! once; [`CirculantGenerator`] embeds it into a `2n` circulant matrix whose
//! eigenvalues come from one FFT.

use std::io::Write;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::covariance::{rho, HurstParam};
use crate::error::{Error, Result};
use crate::seed::GaussianStream;

/// Default upper bound on `n` for Cholesky setup (cubic cost).
pub const DEFAULT_CHOLESKY_CAP: usize = 4096;

/// Relative threshold below which a negative circulant eigenvalue is rounding.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cholesky,
    Circulant,
}

/// A sampled trajectory `B_0, B_{1/n}, ..., B_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FbmPath {
    pub hurst: HurstParam,
    pub n: usize,
    values: Vec<f64>,
    pub seed: u64,
    pub method: Method,
}

/// First differences `ΔB_{k/n} = B_{(k+1)/n} - B_{k/n}` of a path.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementVector {
    pub hurst: HurstParam,
    pub n: usize,
    pub deltas: Vec<f64>,
}

impl FbmPath {
    /// Build a path from explicit grid values. `values[0]` must be exactly
    /// zero and there must be at least two points.
    pub fn from_values(
        hurst: HurstParam,
        values: Vec<f64>,
        seed: u64,
        method: Method,
    ) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(
                "a path needs at least the two points B_0 and B_1".into(),
            ));
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidArgument("path must start at B_0 = 0".into()));
        }
        Ok(Self {
            hurst,
            n: values.len() - 1,
            values,
            seed,
            method,
        })
    }

    fn from_increments(hurst: HurstParam, deltas: &[f64], seed: u64, method: Method) -> Self {
        let mut values = Vec::with_capacity(deltas.len() + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for d in deltas {
            acc += d;
            values.push(acc);
        }
        Self {
            hurst,
            n: deltas.len(),
            values,
            seed,
            method,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.n]
    }

    pub fn increments(&self) -> IncrementVector {
        IncrementVector {
            hurst: self.hurst,
            n: self.n,
            deltas: self.values.windows(2).map(|w| w[1] - w[0]).collect(),
        }
    }

    /// Write the path as CSV with columns `k,t,B`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,t,B")?;
        for (k, b) in self.values.iter().enumerate() {
            writeln!(out, "{},{},{}", k, k as f64 / self.n as f64, b)?;
        }
        Ok(())
    }
}

/// Free-function form of [`FbmPath::increments`].
pub fn increments(path: &FbmPath) -> IncrementVector {
    path.increments()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("grid size n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Reusable Cholesky sampler for a fixed `(H, n)`.
pub struct CholeskyGenerator {
    hurst: HurstParam,
    n: usize,
    lower: DMatrix<f64>,
    scale: f64,
}

impl CholeskyGenerator {
    pub fn new(hurst: HurstParam, n: usize) -> Result<Self> {
        Self::with_cap(hurst, n, DEFAULT_CHOLESKY_CAP)
    }

    pub fn with_cap(hurst: HurstParam, n: usize, cap: usize) -> Result<Self> {
        check_n(n)?;
        if n > cap {
            return Err(Error::CholeskyCap { n, cap });
        }
        let lags: Vec<f64> = (0..n as i64).map(|k| rho(hurst, k)).collect();
        let cov = DMatrix::from_fn(n, n, |i, j| lags[i.abs_diff(j)]);
        let chol = cov.cholesky().ok_or(Error::Factorization(n))?;
        Ok(Self {
            hurst,
            n,
            lower: chol.unpack(),
            scale: (n as f64).powf(-hurst.value()),
        })
    }

    pub fn sample(&self, seed: u64) -> FbmPath {
        let mut stream = GaussianStream::new(seed);
        let z = DVector::from_fn(self.n, |_, _| stream.next_normal());
        let x = &self.lower * z;
        let deltas: Vec<f64> = x.iter().map(|v| v * self.scale).collect();
        FbmPath::from_increments(self.hurst, &deltas, seed, Method::Cholesky)
    }
}

/// Reusable circulant-embedding sampler for a fixed `(H, n)`.
pub struct CirculantGenerator {
    hurst: HurstParam,
    n: usize,
    /// `sqrt(λ_j / m)` for the `m = 2n` circulant eigenvalues.
    amplitudes: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl CirculantGenerator {
    pub fn new(hurst: HurstParam, n: usize) -> Result<Self> {
        check_n(n)?;
        let eig = circulant_eigenvalues(hurst, n);
        let max = eig.iter().cloned().fold(f64::MIN, f64::max);
        let min = eig.iter().cloned().fold(f64::MAX, f64::min);
        let threshold = EIGENVALUE_TOLERANCE * max;
        if min < -threshold {
            return Err(Error::NegativeEigenvalue {
                value: min,
                threshold,
            });
        }
        let m = eig.len() as f64;
        let amplitudes = eig.iter().map(|&l| (l.max(0.0) / m).sqrt()).collect();
        let fft = FftPlanner::new().plan_fft_forward(2 * n);
        Ok(Self {
            hurst,
            n,
            amplitudes,
            fft,
            scale: (n as f64).powf(-hurst.value()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hurst(&self) -> HurstParam {
        self.hurst
    }

    /// Unit-scale fractional Gaussian noise. Real and imaginary parts of the
    /// transformed vector are two independent exact samples; the first is
    /// written to `first`, the second to `second` when given.
    fn fgn_into(&self, seed: u64, first: &mut [f64], second: Option<&mut [f64]>) {
        let mut stream = GaussianStream::new(seed);
        let mut buf: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&a| {
                let re = stream.next_normal();
                let im = stream.next_normal();
                Complex64::new(a * re, a * im)
            })
            .collect();
        self.fft.process(&mut buf);
        for (dst, z) in first.iter_mut().zip(&buf) {
            *dst = z.re;
        }
        if let Some(second) = second {
            for (dst, z) in second.iter_mut().zip(&buf) {
                *dst = z.im;
            }
        }
    }

    pub fn sample(&self, seed: u64) -> FbmPath {
        let mut deltas = vec![0.0; self.n];
        self.fgn_into(seed, &mut deltas, None);
        for d in &mut deltas {
            *d *= self.scale;
        }
        FbmPath::from_increments(self.hurst, &deltas, seed, Method::Circulant)
    }

    /// Two independent paths from one transform. Both carry `seed`; the second
    /// is the imaginary-part sample.
    pub fn sample_pair(&self, seed: u64) -> (FbmPath, FbmPath) {
        let mut a = vec![0.0; self.n];
        let mut b = vec![0.0; self.n];
        self.fgn_into(seed, &mut a, Some(&mut b));
        for d in a.iter_mut().chain(b.iter_mut()) {
            *d *= self.scale;
        }
        (
            FbmPath::from_increments(self.hurst, &a, seed, Method::Circulant),
            FbmPath::from_increments(self.hurst, &b, seed, Method::Circulant),
        )
    }
}

/// Eigenvalues of the `2n` circulant matrix whose first row is
/// `ρ(0), ρ(1), ..., ρ(n-1), ρ(n), ρ(n-1), ..., ρ(1)`.
pub fn circulant_eigenvalues(hurst: HurstParam, n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut row: Vec<Complex64> = (0..m)
        .map(|j| {
            let lag = if j <= n { j } else { m - j };
            Complex64::new(rho(hurst, lag as i64), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut row);
    row.into_iter().map(|z| z.re).collect()
}

/// Sample a path by Cholesky factorisation of the increment covariance.
pub fn generate_cholesky(hurst: HurstParam, n: usize, seed: u64) -> Result<FbmPath> {
    Ok(CholeskyGenerator::new(hurst, n)?.sample(seed))
}

/// Sample a path by circulant embedding (Davies–Harte).
pub fn generate_circulant(hurst: HurstParam, n: usize, seed: u64) -> Result<FbmPath> {
    Ok(CirculantGenerator::new(hurst, n)?.sample(seed))
}

/// Either generator behind one interface; circulant falls back to Cholesky
/// when the embedding is not nonnegative definite.
pub enum PathSampler {
    Cholesky(CholeskyGenerator),
    Circulant(CirculantGenerator),
}

impl PathSampler {
    pub fn new(hurst: HurstParam, n: usize, method: Method) -> Result<Self> {
        match method {
            Method::Cholesky => Ok(Self::Cholesky(CholeskyGenerator::new(hurst, n)?)),
            Method::Circulant => match CirculantGenerator::new(hurst, n) {
                Ok(g) => Ok(Self::Circulant(g)),
                Err(Error::NegativeEigenvalue { .. }) => {
                    Ok(Self::Cholesky(CholeskyGenerator::new(hurst, n)?))
                }
                Err(e) => Err(e),
            },
        }
    }

    pub fn sample(&self, seed: u64) -> FbmPath {
        match self {
            Self::Cholesky(g) => g.sample(seed),
            Self::Circulant(g) => g.sample(seed),
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Self::Cholesky(_) => Method::Cholesky,
            Self::Circulant(_) => Method::Circulant,
        }
    }
}
