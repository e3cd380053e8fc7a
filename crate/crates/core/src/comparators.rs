//! Reference confidence bounds: weighted Bonferroni, closed-form informative
//! bounds for fallback procedures, and compatible bounds.

use crate::error::{Error, Result};
use crate::graph::{run_graphical_test, HypothesisGraph};
use crate::pvalue::MarginalModel;
use crate::scalar::Scalar;
use crate::solver::{solve_level_equation, BoundsVector};
use crate::weights::InformationWeights;

/// Weighted Bonferroni bounds `L_j = p_j^{-1}(alpha_j)`.
pub fn bonferroni_bounds<T: Scalar, M: MarginalModel<T>>(
    models: &[M],
    levels: &[T],
) -> Result<BoundsVector<T>> {
    if models.len() != levels.len() {
        return Err(Error::Dimension {
            expected: models.len(),
            got: levels.len(),
        });
    }
    let lower = models
        .iter()
        .zip(levels)
        .map(|(m, &a)| {
            if a < T::zero() {
                return Err(Error::Probability {
                    value: a.as_f64(),
                    range: "[0, 1)",
                });
            }
            m.inverse_pvalue(a)
        })
        .collect::<Result<_>>()?;
    Ok(BoundsVector::new(lower))
}

/// Fallback procedure `H_1 -> H_2 -> ... -> H_m` with initial weights
/// `c_j = alpha_j / alpha` and one information weight.
#[derive(Clone, Debug, PartialEq)]
pub struct FallbackSpec<T> {
    weights: Vec<T>,
    q: T,
}

impl<T: Scalar> FallbackSpec<T> {
    pub fn new(weights: Vec<T>, q: T) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Shape("fallback needs at least one hypothesis".into()));
        }
        if weights.iter().any(|c| !(c.is_finite() && *c >= T::zero())) {
            return Err(Error::InvalidArgument("fallback weights must be non-negative".into()));
        }
        let sum = weights.iter().fold(T::zero(), |a, &b| a + b);
        if (sum - T::one()).abs() > T::structural_tolerance() {
            return Err(Error::InvalidArgument(format!(
                "fallback weights sum to {sum}, expected 1"
            )));
        }
        InformationWeights::Uniform(q).validate(weights.len())?;
        Ok(Self { weights, q })
    }

    /// Spec matching the initial levels of a graph.
    pub fn from_levels(alpha: T, levels: &[T], q: T) -> Result<Self> {
        Self::new(levels.iter().map(|&a| a / alpha).collect(), q)
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The fallback graph these weights describe.
    pub fn graph(&self, alpha: T) -> Result<HypothesisGraph<T>> {
        HypothesisGraph::fallback(alpha, self.weights.iter().map(|&c| c * alpha).collect())
    }
}

/// `nu_j(mu) = sum_{l<j} c_l prod_{s=l}^{j-1} (1 - q^(mu_s v 0)) + c_j`.
pub fn fallback_nu<T: Scalar>(spec: &FallbackSpec<T>, mu: &[T]) -> Result<Vec<T>> {
    if mu.len() != spec.len() {
        return Err(Error::Dimension {
            expected: spec.len(),
            got: mu.len(),
        });
    }
    let w = InformationWeights::Uniform(spec.q);
    // Running value of sum_{l<j} c_l prod_{s=l}^{j-1}(1 - Q_s) + c_j.
    let mut nu = Vec::with_capacity(mu.len());
    let mut carry = T::zero();
    for (j, &c) in spec.weights.iter().enumerate() {
        let v = carry + c;
        nu.push(v);
        carry = v * w.complement(j, mu[j]);
    }
    Ok(nu)
}

/// Informative bounds of the fallback procedure computed in one pass: `L_j`
/// solves `p_j(x) = nu_j(L_1..L_{j-1}) alpha omega_j(x)` with
/// `omega_j = q^(x v 0)` for `j < m` and `omega_m = 1`.
pub fn fallback_bounds<T: Scalar, M: MarginalModel<T>>(
    spec: &FallbackSpec<T>,
    models: &[M],
    alpha: T,
    root_tol: T,
) -> Result<BoundsVector<T>> {
    let m = spec.len();
    if models.len() != m {
        return Err(Error::Dimension {
            expected: m,
            got: models.len(),
        });
    }
    let w = InformationWeights::Uniform(spec.q);
    let mut lower = Vec::with_capacity(m);
    let mut carry = T::zero();
    for j in 0..m {
        let nu = carry + spec.weights[j];
        let last = j + 1 == m;
        let x = solve_level_equation(
            &models[j],
            nu * alpha,
            |x| if last { T::one() } else { w.value(j, x) },
            root_tol,
            j,
        )?;
        lower.push(x);
        carry = nu * w.complement(j, x);
    }
    Ok(BoundsVector::new(lower))
}

/// Compatible bounds reconstructed from the graphical test at `mu = 0`.
///
/// With rejected set `R` a proper subset, rejected hypotheses get the null
/// border 0 and survivors `p_j^{-1}` of their final local level. When every
/// hypothesis is rejected, `L_j = max(0, p_j^{-1}(alpha_j))` with the initial
/// levels.
pub fn compatible_sci<T: Scalar, M: MarginalModel<T>>(
    g: &HypothesisGraph<T>,
    models: &[M],
) -> Result<BoundsVector<T>> {
    if models.len() != g.size() {
        return Err(Error::Dimension {
            expected: g.size(),
            got: models.len(),
        });
    }
    let p: Vec<T> = models.iter().map(|m| m.pvalue(T::zero())).collect();
    let res = run_graphical_test(g, &p)?;
    let m = g.size();
    let lower = if res.rejected.len() == m {
        g.initial_levels()
            .iter()
            .zip(models)
            .map(|(&a, model)| Ok(model.inverse_pvalue(a)?.max(T::zero())))
            .collect::<Result<_>>()?
    } else {
        (0..m)
            .map(|j| {
                if res.is_rejected(j) {
                    Ok(T::zero())
                } else {
                    models[j].inverse_pvalue(res.final_levels[j])
                }
            })
            .collect::<Result<_>>()?
    };
    Ok(BoundsVector::new(lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::local_levels;
    use crate::pvalue::NormalMarginal;
    use crate::solver::{compute_bounds, SolverOptions};
    use approx::assert_abs_diff_eq;

    const Z_0_0125: f64 = 2.2414027276049454;

    fn normals(theta: &[f64]) -> Vec<NormalMarginal<f64>> {
        theta
            .iter()
            .map(|&t| NormalMarginal::new(t, 1.0).unwrap())
            .collect()
    }

    #[test]
    fn bonferroni_cases() {
        let b = bonferroni_bounds(&normals(&[2.5, 1.0]), &[0.0125, 0.0]).unwrap();
        assert_abs_diff_eq!(b.lower[0], 2.5 - Z_0_0125, epsilon = 1e-10);
        assert_eq!(b.lower[1], f64::NEG_INFINITY);
        assert!(bonferroni_bounds(&normals(&[1.0]), &[-0.1]).is_err());
    }

    #[test]
    fn fallback_nu_cases() {
        let s = FallbackSpec::new(vec![0.5, 0.5], 0.5).unwrap();
        assert_eq!(fallback_nu(&s, &[-1.0, 0.0]).unwrap(), vec![0.5, 0.5]);
        let nu = fallback_nu(&s, &[1.0, 3.0]).unwrap();
        assert_abs_diff_eq!(nu[1], 0.75, epsilon = 1e-15);
    }

    #[test]
    fn fallback_nu_matches_dual_graph() {
        let s = FallbackSpec::new(vec![0.4, 0.1, 0.3, 0.2], 0.3).unwrap();
        let g = s.graph(0.025).unwrap();
        let w = InformationWeights::Uniform(0.3);
        for mu in [
            [0.5, 1.0, -0.2, 2.0],
            [1.5, 0.1, 0.7, 0.3],
            [f64::NEG_INFINITY, 2.0, 2.0, 2.0],
        ] {
            let a = fallback_nu(&s, &mu).unwrap();
            let b = local_levels(&g, &mu, &w).unwrap().nu;
            for j in 0..4 {
                assert_abs_diff_eq!(a[j], b[j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn fallback_closed_form_matches_iteration() {
        let s = FallbackSpec::new(vec![0.6, 0.3, 0.1], 0.2).unwrap();
        let g = s.graph(0.025).unwrap();
        let models = normals(&[3.5, 2.0, 1.5]);
        let a = fallback_bounds(&s, &models, 0.025, 1e-12).unwrap();
        let (b, t) = compute_bounds(
            &g,
            &models,
            &InformationWeights::Uniform(0.2),
            &SolverOptions::default(),
        )
        .unwrap();
        assert!(t.converged);
        for j in 0..3 {
            assert_abs_diff_eq!(a.lower[j], b.lower[j], epsilon = 1e-7);
        }
    }

    #[test]
    fn fixed_sequence_stops_at_first_acceptance() {
        let s = FallbackSpec::new(vec![1.0, 0.0, 0.0], 0.5).unwrap();
        let b = fallback_bounds(&s, &normals(&[1.0, 5.0, 5.0]), 0.025, 1e-10).unwrap();
        assert!(b.lower[0] < 0.0);
        assert_eq!(b.lower[1], f64::NEG_INFINITY);
        assert_eq!(b.lower[2], f64::NEG_INFINITY);
    }

    #[test]
    fn single_fallback_is_classical() {
        let s = FallbackSpec::new(vec![1.0], 0.5).unwrap();
        let b = fallback_bounds(&s, &normals(&[3.0]), 0.025, 1e-12).unwrap();
        assert_abs_diff_eq!(b.lower[0], 3.0 - 1.959963984540054, epsilon = 1e-10);
    }

    #[test]
    fn spec_validation() {
        assert!(FallbackSpec::new(vec![0.5, 0.4], 0.5).is_err());
        assert!(FallbackSpec::new(vec![1.0, 0.0], 0.0).is_err());
        assert!(FallbackSpec::<f64>::new(vec![], 0.5).is_err());
    }

    #[test]
    fn compatible_bounds_follow_rejections() {
        let g = HypothesisGraph::holm(2, 0.025).unwrap();
        // nothing rejected: plain Bonferroni bounds at the initial levels
        let b = compatible_sci(&g, &normals(&[1.0, 0.5])).unwrap();
        assert_abs_diff_eq!(b.lower[0], 1.0 - Z_0_0125, epsilon = 1e-10);
        assert_abs_diff_eq!(b.lower[1], 0.5 - Z_0_0125, epsilon = 1e-10);
        // H1 rejected, H2 survives with the full level
        let b = compatible_sci(&g, &normals(&[3.0, 0.5])).unwrap();
        assert_eq!(b.lower[0], 0.0);
        assert_abs_diff_eq!(b.lower[1], 0.5 - 1.959963984540054, epsilon = 1e-10);
        // everything rejected
        let b = compatible_sci(&g, &normals(&[3.0, 2.1])).unwrap();
        assert_abs_diff_eq!(b.lower[0], 3.0 - Z_0_0125, epsilon = 1e-10);
        assert_eq!(b.lower[1], 0.0);
    }
}
