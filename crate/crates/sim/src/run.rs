use rayon::prelude::*;
use serde::Serialize;

use isci_core::{compatible_sci, BoundsSolver};

use crate::error::{SimError, SimResult};
use crate::sampler::{replication_rng, Sampler};
use crate::scenario::Scenario;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; the global rayon pool when `None`.
    pub threads: Option<usize>,
    /// Hypotheses pooled into [`PooledStats`]; all when `None`.
    pub focus: Option<Vec<usize>>,
}

/// Rejection and bound statistics pooled over the focus hypotheses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PooledStats {
    /// Mean of `L_j` over all (replication, hypothesis) pairs with `L_j`
    /// rejecting.
    pub mean_bound_rejected: f64,
    pub mean_bound_rejected_se: f64,
    /// Mean number of rejected focus hypotheses per replication.
    pub mean_rejections: f64,
    pub mean_rejections_se: f64,
}

/// Per-hypothesis metrics of one SCI method. Bounds are reported on the
/// original scale; means over empty sets are NaN.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodMetrics {
    pub power: Vec<f64>,
    pub mean_bound_finite: Vec<f64>,
    pub mean_bound_rejected: Vec<f64>,
    /// Percentage (0 to 100) of replications with a finite bound.
    pub pct_finite: Vec<f64>,
    /// Frequency of `theta_j > L_j` for all `j` simultaneously.
    pub coverage: f64,
    pub pooled: PooledStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub name: Option<String>,
    pub labels: Vec<String>,
    pub q: Vec<f64>,
    pub n_sims: usize,
    /// Replications entering the metrics.
    pub n_used: usize,
    /// Replications dropped because the solver failed or did not converge.
    pub failures: usize,
    pub isci: MethodMetrics,
    pub csci: MethodMetrics,
}

/// Bounds of one replication in working coordinates.
struct Outcome {
    isci: Vec<f64>,
    csci: Vec<f64>,
}

#[derive(Clone, Debug, Default)]
struct Moments {
    n: usize,
    sum: f64,
    sumsq: f64,
}

impl Moments {
    fn add(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sumsq += x * x;
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        self.sum += o.sum;
        self.sumsq += o.sumsq;
    }

    fn mean(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.sum / self.n as f64
        }
    }

    fn se(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        let var = ((self.sumsq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

struct Accumulator {
    m: usize,
    rejected: Vec<Moments>,
    finite: Vec<Moments>,
    covered: usize,
    rejections: Moments,
    n: usize,
}

impl Accumulator {
    fn new(m: usize) -> Self {
        Self {
            m,
            rejected: vec![Moments::default(); m],
            finite: vec![Moments::default(); m],
            covered: 0,
            rejections: Moments::default(),
            n: 0,
        }
    }

    fn add(&mut self, working: &[f64], theta_w: &[f64], shifts: &[f64], focus: &[bool]) {
        self.n += 1;
        let mut count = 0.0;
        let mut covered = true;
        for j in 0..self.m {
            let l = working[j];
            let orig = l - shifts[j];
            if l.is_finite() {
                self.finite[j].add(orig);
            }
            if l >= 0.0 {
                self.rejected[j].add(orig);
                if focus[j] {
                    count += 1.0;
                }
            }
            if !(theta_w[j] > l) {
                covered = false;
            }
        }
        self.rejections.add(count);
        if covered {
            self.covered += 1;
        }
    }

    fn finish(&self, focus: &[bool]) -> MethodMetrics {
        let n = self.n.max(1) as f64;
        let mut pooled = Moments::default();
        for j in 0..self.m {
            if focus[j] {
                pooled.merge(&self.rejected[j]);
            }
        }
        MethodMetrics {
            power: self.rejected.iter().map(|r| r.n as f64 / n).collect(),
            mean_bound_finite: self.finite.iter().map(Moments::mean).collect(),
            mean_bound_rejected: self.rejected.iter().map(Moments::mean).collect(),
            pct_finite: self.finite.iter().map(|f| 100.0 * f.n as f64 / n).collect(),
            coverage: self.covered as f64 / n,
            pooled: PooledStats {
                mean_bound_rejected: pooled.mean(),
                mean_bound_rejected_se: pooled.se(),
                mean_rejections: self.rejections.mean(),
                mean_rejections_se: self.rejections.se(),
            },
        }
    }
}

pub fn run_scenario(s: &Scenario) -> SimResult<ScenarioResult> {
    run_scenario_with(s, &RunOptions::default())
}

/// Simulates `n_sims` trials. Replication `r` draws from its own stream
/// keyed by `(seed, r)` and results are reduced in replication order, so
/// the output does not depend on the number of threads.
pub fn run_scenario_with(s: &Scenario, opts: &RunOptions) -> SimResult<ScenarioResult> {
    s.validate()?;
    match opts.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| SimError::Pool(e.to_string()))?;
            pool.install(|| run_inner(s, opts))
        }
        None => run_inner(s, opts),
    }
}

fn run_inner(s: &Scenario, opts: &RunOptions) -> SimResult<ScenarioResult> {
    let m = s.size();
    let sampler = Sampler::new(&s.se, &s.corr)?;
    let shifts = s.shift_spec()?.offsets().to_vec();
    let theta_w = s.working_theta()?;
    let weights = s.q.to_weights();
    let solver = BoundsSolver::new(&s.graph, weights, s.solver.options())?;
    let graph = &s.graph;

    let outcomes: Vec<Option<Outcome>> = (0..s.n_sims as u64)
        .into_par_iter()
        .map_init(
            || (solver.clone(), vec![0.0; m]),
            |(solver, est), rep| {
                let mut rng = replication_rng(s.seed, rep);
                sampler.sample_into(&theta_w, &mut rng, est);
                let models = s.models(est).ok()?;
                let (b, trace) = solver.solve(&models).ok()?;
                if !trace.converged {
                    return None;
                }
                let c = compatible_sci(graph, &models).ok()?;
                Some(Outcome {
                    isci: b.lower,
                    csci: c.lower,
                })
            },
        )
        .collect();

    let mut focus = vec![opts.focus.is_none(); m];
    if let Some(f) = &opts.focus {
        for &j in f {
            if j < m {
                focus[j] = true;
            }
        }
    }
    let mut isci = Accumulator::new(m);
    let mut csci = Accumulator::new(m);
    let mut failures = 0;
    for o in &outcomes {
        match o {
            Some(o) => {
                isci.add(&o.isci, &theta_w, &shifts, &focus);
                csci.add(&o.csci, &theta_w, &shifts, &focus);
            }
            None => failures += 1,
        }
    }
    Ok(ScenarioResult {
        name: s.name.clone(),
        labels: s.graph.labels().to_vec(),
        q: s.q.per_hypothesis(m),
        n_sims: s.n_sims,
        n_used: isci.n,
        failures,
        isci: isci.finish(&focus),
        csci: csci.finish(&focus),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        let mut m = Moments::default();
        assert!(m.mean().is_nan());
        for x in [1.0, 2.0, 3.0] {
            m.add(x);
        }
        assert_eq!(m.mean(), 2.0);
        assert!((m.se() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
