use serde::{Deserialize, Serialize};

use isci_core::{Graph, NormalMarginal, ShiftSpec, SolverOptions, Weights};

use crate::error::{SimError, SimResult};

/// Information weights as written in scenario files:
/// `{"uniform": 0.5}` or `{"per_hypothesis": [..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QSpec {
    Uniform(f64),
    PerHypothesis(Vec<f64>),
}

impl QSpec {
    pub fn to_weights(&self) -> Weights {
        match self {
            QSpec::Uniform(q) => Weights::Uniform(*q),
            QSpec::PerHypothesis(v) => Weights::PerHypothesis(v.clone()),
        }
    }

    pub fn per_hypothesis(&self, m: usize) -> Vec<f64> {
        match self {
            QSpec::Uniform(q) => vec![*q; m],
            QSpec::PerHypothesis(v) => v.clone(),
        }
    }

    /// Copy with `q` replaced by `value` for the listed hypotheses (all when
    /// `targets` is `None`).
    pub fn with_targets(&self, m: usize, targets: Option<&[usize]>, value: f64) -> QSpec {
        match targets {
            None => QSpec::Uniform(value),
            Some(t) => {
                let mut v = self.per_hypothesis(m);
                for &j in t {
                    v[j] = value;
                }
                QSpec::PerHypothesis(v)
            }
        }
    }
}

/// A grid of information weights applied to selected hypotheses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub q_grid: Vec<f64>,
    /// Hypotheses whose weight follows the grid; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_eps() -> f64 {
    1e-8
}

fn default_max_iter() -> usize {
    10_000
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps: default_eps(),
            max_iter: default_max_iter(),
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolverOptions<f64> {
        SolverOptions {
            eps: self.eps,
            max_iter: self.max_iter,
            ..Default::default()
        }
    }
}

/// Monte Carlo configuration. `theta` is on the original scale; `shifts`
/// move non-inferiority borders `-delta_j` to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub graph: Graph,
    pub q: QSpec,
    pub theta: Vec<f64>,
    pub se: Vec<f64>,
    pub corr: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<f64>>,
    pub n_sims: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl Scenario {
    pub fn size(&self) -> usize {
        self.graph.size()
    }

    pub fn from_json(text: &str) -> SimResult<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn shift_spec(&self) -> SimResult<ShiftSpec<f64>> {
        match &self.shifts {
            Some(d) => Ok(ShiftSpec::new(d.clone())?),
            None => Ok(ShiftSpec::zero(self.size())),
        }
    }

    /// True parameters in working coordinates.
    pub fn working_theta(&self) -> SimResult<Vec<f64>> {
        let s = self.shift_spec()?;
        Ok(self
            .theta
            .iter()
            .zip(s.offsets())
            .map(|(t, d)| t + d)
            .collect())
    }

    /// Working-coordinate marginal models for the given estimates.
    pub fn models(&self, working_estimates: &[f64]) -> SimResult<Vec<NormalMarginal<f64>>> {
        working_estimates
            .iter()
            .zip(&self.se)
            .map(|(&t, &s)| Ok(NormalMarginal::new(t, s)?))
            .collect()
    }

    pub fn validate(&self) -> SimResult<()> {
        let m = self.size();
        let report = self.graph.validate();
        if !report.is_valid() {
            return Err(SimError::Invalid(format!("graph: {report}")));
        }
        let dims = [
            ("theta", self.theta.len()),
            ("se", self.se.len()),
            ("corr", self.corr.len()),
        ];
        for (name, n) in dims {
            if n != m {
                return Err(SimError::Invalid(format!(
                    "{name} has {n} entries for {m} hypotheses"
                )));
            }
        }
        if let Some(d) = &self.shifts {
            if d.len() != m {
                return Err(SimError::Invalid(format!(
                    "shifts has {} entries for {m} hypotheses",
                    d.len()
                )));
            }
        }
        if self.theta.iter().any(|t| !t.is_finite()) {
            return Err(SimError::Invalid("theta must be finite".into()));
        }
        if self.se.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(SimError::Invalid("standard errors must be positive".into()));
        }
        if self.n_sims == 0 {
            return Err(SimError::Invalid("n_sims must be at least 1".into()));
        }
        self.q.to_weights().validate(m)?;
        if let Some(sw) = &self.sweep {
            if sw.q_grid.is_empty() {
                return Err(SimError::Invalid("sweep grid is empty".into()));
            }
            if let Some(t) = &sw.targets {
                if t.iter().any(|&j| j >= m) {
                    return Err(SimError::Invalid("sweep target out of range".into()));
                }
            }
            for &q in &sw.q_grid {
                Weights::Uniform(q).validate(m)?;
            }
        }
        if !(self.solver.eps > 0.0 && self.solver.max_iter > 0) {
            return Err(SimError::Invalid("solver eps and max_iter must be positive".into()));
        }
        crate::sampler::Sampler::new(&self.se, &self.corr)?;
        Ok(())
    }

    /// Copy with the sweep targets set to `q`.
    pub fn with_q(&self, q: f64) -> Scenario {
        let m = self.size();
        let targets = self.sweep.as_ref().and_then(|s| s.targets.as_deref());
        let mut s = self.clone();
        s.q = self.q.with_targets(m, targets, q);
        s
    }
}
