use serde::Serialize;

use crate::error::{SimError, SimResult};
use crate::run::{run_scenario_with, RunOptions, ScenarioResult};
use crate::scenario::{Scenario, Sweep};

/// One point of the rejections versus bound size trade-off.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub q: f64,
    pub mean_bound_rejected: f64,
    pub mean_bound_rejected_se: f64,
    pub mean_rejections: f64,
    pub mean_rejections_se: f64,
    pub result: ScenarioResult,
}

/// Reruns `template` for each `q` in the grid, with `q` applied to
/// `targets` (all hypotheses when `None`) and statistics pooled over the
/// same hypotheses.
pub fn trade_off_curve(
    template: &Scenario,
    q_grid: &[f64],
    targets: Option<&[usize]>,
    threads: Option<usize>,
) -> SimResult<Vec<CurvePoint>> {
    if q_grid.is_empty() {
        return Err(SimError::Invalid("empty q grid".into()));
    }
    let mut base = template.clone();
    base.sweep = Some(Sweep {
        q_grid: q_grid.to_vec(),
        targets: targets.map(<[usize]>::to_vec),
    });
    base.validate()?;
    let opts = RunOptions {
        threads,
        focus: targets.map(<[usize]>::to_vec),
    };
    q_grid
        .iter()
        .map(|&q| {
            let r = run_scenario_with(&base.with_q(q), &opts)?;
            let p = &r.isci.pooled;
            Ok(CurvePoint {
                q,
                mean_bound_rejected: p.mean_bound_rejected,
                mean_bound_rejected_se: p.mean_bound_rejected_se,
                mean_rejections: p.mean_rejections,
                mean_rejections_se: p.mean_rejections_se,
                result: r,
            })
        })
        .collect()
}

/// Curve for the sweep stored in the scenario.
pub fn scenario_curve(s: &Scenario, threads: Option<usize>) -> SimResult<Vec<CurvePoint>> {
    let sw = s
        .sweep
        .as_ref()
        .ok_or_else(|| SimError::Invalid("scenario has no sweep".into()))?;
    trade_off_curve(s, &sw.q_grid, sw.targets.as_deref(), threads)
}
