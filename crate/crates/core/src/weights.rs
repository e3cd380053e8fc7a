//! Information weight functions `Q_j(mu)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A user supplied weight function. Must be continuous, non-increasing,
/// equal to one for `mu <= 0`, positive, and tend to zero.
pub type WeightFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Information weights governing how much level a rejected hypothesis keeps
/// for sharpening its own bound.
///
/// `q = 1` is accepted and reproduces weighted Bonferroni bounds.
#[derive(Clone)]
pub enum InformationWeights<T: Scalar> {
    /// `Q_j(mu) = q^(mu v 0)` for every hypothesis.
    Uniform(T),
    /// `Q_j(mu) = q_j^(mu v 0)`.
    PerHypothesis(Vec<T>),
    Custom(Vec<WeightFn<T>>),
}

impl<T: Scalar> fmt::Debug for InformationWeights<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform(q) => f.debug_tuple("Uniform").field(q).finish(),
            Self::PerHypothesis(q) => f.debug_tuple("PerHypothesis").field(q).finish(),
            Self::Custom(v) => write!(f, "Custom({} functions)", v.len()),
        }
    }
}

fn check_q<T: Scalar>(q: T) -> Result<()> {
    if q > T::zero() && q <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidWeights(format!(
            "information weight {q} not in (0, 1]"
        )))
    }
}

impl<T: Scalar> InformationWeights<T> {
    /// Checks the specification against `m` hypotheses. Custom functions are
    /// spot-checked on a grid.
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            Self::Uniform(q) => check_q(*q),
            Self::PerHypothesis(qs) => {
                if qs.len() != m {
                    return Err(Error::InvalidWeights(format!(
                        "{} information weights for {} hypotheses",
                        qs.len(),
                        m
                    )));
                }
                qs.iter().try_for_each(|&q| check_q(q))
            }
            Self::Custom(fs) => {
                if fs.len() != m {
                    return Err(Error::InvalidWeights(format!(
                        "{} weight functions for {} hypotheses",
                        fs.len(),
                        m
                    )));
                }
                for (j, f) in fs.iter().enumerate() {
                    if f(T::zero()) != T::one() || f(-T::one()) != T::one() {
                        return Err(Error::InvalidWeights(format!(
                            "weight function {j} is not 1 for mu <= 0"
                        )));
                    }
                    let mut prev = T::one();
                    for k in 1..=200 {
                        let v = f(T::lit(k as f64 * 0.05));
                        if !(v > T::zero() && v <= prev) {
                            return Err(Error::InvalidWeights(format!(
                                "weight function {j} must be positive and non-increasing"
                            )));
                        }
                        prev = v;
                    }
                }
                Ok(())
            }
        }
    }

    fn base(&self, j: usize) -> Option<T> {
        match self {
            Self::Uniform(q) => Some(*q),
            Self::PerHypothesis(qs) => Some(qs[j]),
            Self::Custom(_) => None,
        }
    }

    /// `Q_j(mu)`; one for `mu <= 0` including `-inf`. Power forms are floored
    /// at the smallest normal float so that `Q_j > 0` survives underflow.
    pub fn value(&self, j: usize, mu: T) -> T {
        if !(mu > T::zero()) {
            return T::one();
        }
        match self.base(j) {
            Some(q) => (mu * q.ln()).exp().max(T::min_positive_value()),
            None => match self {
                Self::Custom(fs) => fs[j](mu),
                _ => unreachable!(),
            },
        }
    }

    /// `1 - Q_j(mu)`, without cancellation for power forms near `mu = 0`.
    pub fn complement(&self, j: usize, mu: T) -> T {
        if !(mu > T::zero()) {
            return T::zero();
        }
        match self.base(j) {
            Some(q) => -(mu * q.ln()).exp_m1().min(T::one()),
            None => T::one() - self.value(j, mu),
        }
    }
}
