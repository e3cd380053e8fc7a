//! Monte Carlo evaluation of informative SCIs against compatible SCIs.

pub mod curve;
pub mod design;
pub mod error;
pub mod output;
pub mod run;
pub mod sampler;
pub mod scenario;

pub use curve::{scenario_curve, trade_off_curve, CurvePoint};
pub use design::{calibrate_information_weight, power_design, PowerDesign};
pub use error::{SimError, SimResult};
pub use output::{write_curve_csv, write_result_csv};
pub use run::{run_scenario, run_scenario_with, MethodMetrics, PooledStats, RunOptions, ScenarioResult};
pub use sampler::{replication_rng, Sampler};
pub use scenario::{QSpec, Scenario, SolverConfig, Sweep};
