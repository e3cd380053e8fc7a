//! Informative simultaneous confidence intervals for graphical multiple
//! test procedures.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`.

pub mod comparators;
pub mod dual;
pub mod error;
pub mod graph;
pub mod pvalue;
pub mod scalar;
pub mod solver;
pub mod weights;

pub use comparators::{
    bonferroni_bounds, compatible_sci, fallback_bounds, fallback_nu, FallbackSpec,
};
pub use dual::{build_dual_graph, local_levels, DualGraph, LocalLevels};
pub use error::{Error, Result};
pub use graph::{
    run_graphical_test, validate_graph, GraphState, HypothesisGraph, RejectionResult,
    ValidationReport, Violation,
};
pub use pvalue::{
    inverse_pvalue, normal_cdf, normal_sf, normal_upper_quantile, shifted_pvalue, MarginalModel,
    NormalMarginal, ShiftSpec,
};
pub use scalar::Scalar;
pub use solver::{
    adjusted_p, brute_force_bounds, compute_bounds, compute_bounds_from, induced_test,
    iterate_step, satisfies_start_condition, starting_value, BoundsSolver, BoundsVector, GridBounds, GridSpec,
    IterationTrace, SolverOptions,
};
pub use weights::{InformationWeights, WeightFn};

pub type Graph = HypothesisGraph<f64>;
pub type Normal = NormalMarginal<f64>;
pub type Weights = InformationWeights<f64>;
pub type Shifts = ShiftSpec<f64>;
pub type Bounds = BoundsVector<f64>;
