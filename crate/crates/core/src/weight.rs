//! Weight functions `f` with analytically supplied derivative families.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Growth class of a weight function, as metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Growth {
    Polynomial,
    SubGaussianModerate,
}

type Family = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// A weight `f` together with `f^{(r)}` for `r = 0..=max_order`.
#[derive(Clone)]
pub struct WeightFunction {
    label: String,
    growth: Growth,
    /// `None` means every order is available.
    max_order: Option<usize>,
    family: Family,
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightFunction")
            .field("label", &self.label)
            .field("growth", &self.growth)
            .field("max_order", &self.max_order)
            .finish()
    }
}

/// Names accepted by [`WeightFunction::from_label`].
pub const CATALOG: [&str; 6] = ["zero", "one", "x", "x2", "cos", "lorentz"];

const CHECK_STEP: f64 = 1e-6;
const CHECK_TOL: f64 = 1e-3;

impl WeightFunction {
    fn builtin(label: &str, growth: Growth, family: Family) -> Self {
        Self {
            label: label.to_string(),
            growth,
            max_order: None,
            family,
        }
    }

    /// `f ≡ 0`.
    pub fn zero() -> Self {
        Self::builtin("zero", Growth::Polynomial, Arc::new(|_, _| 0.0))
    }

    /// `f ≡ 1`.
    pub fn one() -> Self {
        Self::builtin(
            "one",
            Growth::Polynomial,
            Arc::new(|r, _| if r == 0 { 1.0 } else { 0.0 }),
        )
    }

    /// `f(x) = x`.
    pub fn identity() -> Self {
        Self::builtin(
            "x",
            Growth::Polynomial,
            Arc::new(|r, x| match r {
                0 => x,
                1 => 1.0,
                _ => 0.0,
            }),
        )
    }

    /// `f(x) = x²`.
    pub fn square() -> Self {
        Self::builtin(
            "x2",
            Growth::Polynomial,
            Arc::new(|r, x| match r {
                0 => x * x,
                1 => 2.0 * x,
                2 => 2.0,
                _ => 0.0,
            }),
        )
    }

    /// `f(x) = cos x`.
    pub fn cos() -> Self {
        Self::builtin(
            "cos",
            Growth::Polynomial,
            Arc::new(|r, x| match r % 4 {
                0 => x.cos(),
                1 => -x.sin(),
                2 => -x.cos(),
                _ => x.sin(),
            }),
        )
    }

    /// `f(x) = 1/(1+x²) = Im 1/(x-i)`, so
    /// `f^{(r)}(x) = Im[(-1)^r r! (x-i)^{-(r+1)}]`.
    pub fn lorentz() -> Self {
        Self::builtin(
            "lorentz",
            Growth::Polynomial,
            Arc::new(|r, x| {
                let fact: f64 = (1..=r).map(|i| i as f64).product();
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                let z = Complex64::new(x, -1.0).powi(-(r as i32 + 1));
                sign * fact * z.im
            }),
        )
    }

    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "zero" | "0" => Ok(Self::zero()),
            "one" | "1" => Ok(Self::one()),
            "x" | "id" => Ok(Self::identity()),
            "x2" | "x^2" => Ok(Self::square()),
            "cos" => Ok(Self::cos()),
            "lorentz" | "1/(1+x^2)" => Ok(Self::lorentz()),
            other => Err(Error::InvalidArgument(format!(
                "unknown weight function '{other}', expected one of {CATALOG:?}"
            ))),
        }
    }

    /// A user-supplied derivative family `derivatives[r] = f^{(r)}`.
    ///
    /// Each consecutive pair is checked against a forward difference on a
    /// grid in `[-2, 2]`.
    pub fn custom(
        label: impl Into<String>,
        growth: Growth,
        derivatives: Vec<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    ) -> Result<Self> {
        let label = label.into();
        if derivatives.is_empty() {
            return Err(Error::InvalidArgument(
                "a weight function needs at least f itself".into(),
            ));
        }
        let max_order = derivatives.len() - 1;
        let derivs = derivatives.clone();
        let family: Family = Arc::new(move |r, x| derivs[r](x));
        let w = Self {
            label,
            growth,
            max_order: Some(max_order),
            family,
        };
        w.check_consistency()?;
        Ok(w)
    }

    /// Forward-difference consistency of each derivative with the next.
    pub fn check_consistency(&self) -> Result<()> {
        let top = self.max_order.unwrap_or(6);
        for order in 0..top {
            for i in 0..=16 {
                let x = -2.0 + 0.25 * i as f64;
                let fd = (self.eval(order, x + CHECK_STEP) - self.eval(order, x)) / CHECK_STEP;
                let exact = self.eval(order + 1, x);
                if (fd - exact).abs() > CHECK_TOL * exact.abs().max(1.0) {
                    return Err(Error::InconsistentDerivative {
                        label: self.label.clone(),
                        order: order + 1,
                        x,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    pub fn max_order(&self) -> Option<usize> {
        self.max_order
    }

    /// Error unless `f^{(order)}` is available.
    pub fn require_order(&self, order: usize) -> Result<()> {
        match self.max_order {
            Some(m) if order > m => Err(Error::MissingDerivative {
                label: self.label.clone(),
                available: m,
                requested: order,
            }),
            _ => Ok(()),
        }
    }

    /// `f^{(order)}(x)`. Callers check the order with [`Self::require_order`].
    #[inline]
    pub fn eval(&self, order: usize, x: f64) -> f64 {
        (self.family)(order, x)
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        self.eval(0, x)
    }

    /// True for `f ≡ 0`, detected by label.
    pub fn is_zero(&self) -> bool {
        self.label == "zero"
    }
}
