//! Sample size and information weight arithmetic for planning a trial.

use serde::Serialize;

use isci_core::{normal_sf, normal_upper_quantile};

use crate::error::{SimError, SimResult};

/// Information needed for power `1 - beta` at local level `alpha_local`
/// against effect `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerDesign {
    pub alpha_local: f64,
    pub beta: f64,
    pub delta: f64,
    /// `I = (z_alpha + z_beta)^2 / delta^2`.
    pub information: f64,
}

impl PowerDesign {
    pub fn stderr(&self) -> f64 {
        1.0 / self.information.sqrt()
    }

    /// Level giving power `1 - beta` against the larger effect `delta_e` at
    /// the same information: `1 - Phi(delta_e sqrt(I) - z_beta)`.
    pub fn alpha_for_effect(&self, delta_e: f64) -> f64 {
        normal_sf(delta_e * self.information.sqrt() - normal_upper_quantile(self.beta))
    }
}

fn check_prob(name: &str, p: f64) -> SimResult<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(SimError::Invalid(format!("{name} = {p} not in (0, 1)")))
    }
}

pub fn power_design(alpha_local: f64, beta: f64, delta: f64) -> SimResult<PowerDesign> {
    check_prob("alpha", alpha_local)?;
    check_prob("beta", beta)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(SimError::Invalid(format!("effect {delta} must be positive")));
    }
    let z = normal_upper_quantile(alpha_local) + normal_upper_quantile(beta);
    Ok(PowerDesign {
        alpha_local,
        beta,
        delta,
        information: z * z / (delta * delta),
    })
}

/// Information weight `q` with `q^delta alpha_local = target`, i.e. the
/// weight that leaves level `target` for a bound at distance `delta` above
/// the null border.
pub fn calibrate_information_weight(target: f64, alpha_local: f64, delta: f64) -> SimResult<f64> {
    check_prob("alpha", alpha_local)?;
    if !(target > 0.0 && target <= alpha_local) {
        return Err(SimError::Invalid(format!(
            "target level {target} must lie in (0, {alpha_local}]"
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(SimError::Invalid(format!("distance {delta} must be positive")));
    }
    Ok((target / alpha_local).powf(1.0 / delta))
}
