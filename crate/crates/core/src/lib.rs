//! Derivative-free trust-region search over Gaussian source-noise spaces.
//!
//! The optimizer treats an expensive reward pipeline as a black box
//! `x -> r` and searches the source-noise vector `x` directly. It maintains
//! a set of hypercubic trust regions whose side lengths adapt to observed
//! successes and failures, proposes candidates by masked Sobol or Gaussian
//! perturbations of the region centers, and re-centers regions on the
//! globally best points seen so far. Random-search (best-of-N) and
//! zero-order baselines share the same evaluation and reporting machinery,
//! so comparisons run under identical evaluation budgets.
//!
//! External reward pipelines plug in through a line-delimited JSON
//! subprocess protocol (see [`evalproto`]); in-process synthetic objectives
//! live in [`objectives`].

pub mod budget;
pub mod error;
pub mod evalproto;
pub mod noise;
pub mod objectives;
pub mod optimizers;
pub mod regions;
pub mod rng;
pub mod sampling;
pub mod select;

pub use budget::{budget_split, Budget};
pub use error::{ConfigError, EvalError, ProtocolError, RunError};
pub use noise::{EvaluationRecord, NoiseVector};
pub use objectives::{
    brute_force_optimum, make_objective, BatchObjective, ObjectiveKind, ObjectiveSpec,
    SyntheticObjective,
};
pub use optimizers::{
    run, run_random_search, run_trs, run_with_records, run_zero_order, Algorithm,
    OptimizerConfig, RegionTraceRow, RunReport,
};
pub use regions::{
    recenter, restart_region, AdaptationConfig, CenterStrategy, TrustRegionState,
};
pub use rng::RngStream;
pub use sampling::{MaskConfig, PerturbScheme};
pub use select::topk_select;
