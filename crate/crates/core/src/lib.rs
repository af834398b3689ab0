//! Weighted Hermite variations of fractional Brownian motion: exact
//! covariance quantities, exact path samplers, the Skorohod decomposition of
//! `F_n`, bound sweeps and Monte Carlo checks of the mixed-Gaussian limit.

pub mod bounds;
pub mod covariance;
pub mod error;
pub mod generator;
pub mod harness;
pub mod hermite;
pub mod seed;
pub mod stats;
pub mod variation;
pub mod weight;

pub use covariance::{alpha, beta, fbm_covariance, rho, sigma_sq, HurstParam, SigmaSq};
pub use error::{Error, ErrorCategory, Result};
pub use generator::{FbmPath, Method, PathSampler};
pub use hermite::{hermite_eval, HermiteOrder};
pub use seed::{derive_seed, ETA_TAG, PATH_TAG};
pub use variation::{decompose, Decomposition, VariationConfig};
pub use weight::WeightFunction;
