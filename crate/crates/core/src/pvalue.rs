//! Shifted p-values `p_j(mu)` for the hypotheses `theta_j <= mu` and their
//! inverses.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};
use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// Standard normal upper tail `1 - Phi(z)`, accurate far into the tail.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

/// Upper quantile `z_u` with `1 - Phi(z_u) = u`, for `u` in `(0, 1)`.
pub fn normal_upper_quantile(u: f64) -> f64 {
    SQRT_2 * erfc_inv(2.0 * u)
}

/// Family of p-values for the shifted hypotheses of one parameter.
///
/// Implementations must be continuous and strictly increasing in `mu` with
/// limits 0 and 1, and strictly decreasing in the evidence against the
/// hypothesis.
pub trait MarginalModel<T: Scalar> {
    /// `p(mu)`, with `p(-inf) = 0` and `p(+inf) = 1`.
    fn pvalue(&self, mu: T) -> T;

    /// The `mu` with `p(mu) = y`; `-inf` for `y = 0`.
    fn inverse_pvalue(&self, y: T) -> Result<T>;
}

/// Normal marginal: `p(mu) = 1 - Phi((estimate - mu) / stderr)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalMarginal<T> {
    estimate: T,
    stderr: T,
}

impl<T: Scalar> NormalMarginal<T> {
    pub fn new(estimate: T, stderr: T) -> Result<Self> {
        if !estimate.is_finite() {
            return Err(Error::NonFinite(format!("estimate {estimate}")));
        }
        if !(stderr.is_finite() && stderr > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "standard error must be positive and finite, got {stderr}"
            )));
        }
        Ok(Self { estimate, stderr })
    }

    pub fn estimate(&self) -> T {
        self.estimate
    }

    pub fn stderr(&self) -> T {
        self.stderr
    }

    /// Same standard error, estimate moved by `delta`.
    pub fn shifted(&self, delta: T) -> Self {
        Self {
            estimate: self.estimate + delta,
            stderr: self.stderr,
        }
    }
}

impl<T: Scalar> MarginalModel<T> for NormalMarginal<T> {
    fn pvalue(&self, mu: T) -> T {
        if mu == T::neg_infinity() {
            return T::zero();
        }
        if mu == T::infinity() {
            return T::one();
        }
        let z = (self.estimate - mu) / self.stderr;
        T::lit(normal_sf(z.as_f64()))
    }

    fn inverse_pvalue(&self, y: T) -> Result<T> {
        if !(y >= T::zero() && y < T::one()) {
            return Err(Error::Probability {
                value: y.as_f64(),
                range: "[0, 1)",
            });
        }
        if y == T::zero() {
            return Ok(T::neg_infinity());
        }
        let z = normal_upper_quantile(y.as_f64());
        Ok(self.estimate - self.stderr * T::lit(z))
    }
}

/// Checked evaluation of `p(mu)` rejecting NaN arguments.
pub fn shifted_pvalue<T: Scalar, M: MarginalModel<T>>(model: &M, mu: T) -> Result<T> {
    if mu.is_nan() {
        return Err(Error::NonFinite("mu is NaN".into()));
    }
    Ok(model.pvalue(mu))
}

pub fn inverse_pvalue<T: Scalar, M: MarginalModel<T>>(model: &M, y: T) -> Result<T> {
    model.inverse_pvalue(y)
}

/// Per-hypothesis coordinate offsets mapping a null border `-delta_j` to 0.
///
/// A non-inferiority hypothesis `theta_j <= -delta_j` is analysed as
/// `theta_j + delta_j <= 0`; bounds are moved back by `delta_j` for
/// reporting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShiftSpec<T> {
    offsets: Vec<T>,
}

impl<T: Scalar> ShiftSpec<T> {
    pub fn new(offsets: Vec<T>) -> Result<Self> {
        if let Some(d) = offsets.iter().find(|d| !d.is_finite()) {
            return Err(Error::NonFinite(format!("shift offset {d}")));
        }
        Ok(Self { offsets })
    }

    pub fn zero(m: usize) -> Self {
        Self {
            offsets: vec![T::zero(); m],
        }
    }

    pub fn offsets(&self) -> &[T] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Models in working coordinates (null border at zero).
    pub fn to_working(&self, models: &[NormalMarginal<T>]) -> Result<Vec<NormalMarginal<T>>> {
        if models.len() != self.offsets.len() {
            return Err(Error::Dimension {
                expected: self.offsets.len(),
                got: models.len(),
            });
        }
        Ok(models
            .iter()
            .zip(&self.offsets)
            .map(|(m, &d)| m.shifted(d))
            .collect())
    }

    /// Moves working-coordinate values back to the original scale.
    pub fn to_original(&self, values: &[T]) -> Vec<T> {
        values
            .iter()
            .zip(&self.offsets)
            .map(|(&v, &d)| v - d)
            .collect()
    }

    /// Null border of hypothesis `j` on the original scale.
    pub fn border(&self, j: usize) -> T {
        -self.offsets[j]
    }
}
