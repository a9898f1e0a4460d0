//! The three search drivers: trust-region search, random search, and
//! zero-order search, sharing evaluation, budget, and reporting plumbing.

mod baselines;
mod trs;

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{ConfigError, RunError};
use crate::noise::{EvaluationRecord, NoiseVector};
use crate::objectives::BatchObjective;
use crate::regions::{AdaptationConfig, CenterStrategy};
use crate::rng::RngStream;
use crate::sampling::{MaskConfig, PerturbScheme};

pub use baselines::{run_random_search, run_zero_order};
pub use trs::run_trs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Trs,
    Random,
    ZeroOrder,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Algorithm::Trs => "trs",
            Algorithm::Random => "random",
            Algorithm::ZeroOrder => "zero_order",
        };
        write!(f, "{name}")
    }
}

fn default_k_regions() -> usize {
    5
}
fn default_scheme() -> PerturbScheme {
    PerturbScheme::Sobol
}
fn default_center_strategy() -> CenterStrategy {
    CenterStrategy::GlobalTopk
}
fn default_zo_epsilon() -> f64 {
    0.1
}

/// Every knob of one optimizer run. Fully serializable so reports can echo
/// their exact configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    pub dim: usize,
    pub budget: Budget,
    #[serde(default = "default_k_regions")]
    pub k_regions: usize,
    #[serde(default = "default_scheme")]
    pub scheme: PerturbScheme,
    #[serde(default)]
    pub adaptation: AdaptationConfig,
    #[serde(default)]
    pub mask: MaskConfig,
    #[serde(default = "default_center_strategy")]
    pub center_strategy: CenterStrategy,
    #[serde(default = "default_zo_epsilon")]
    pub zo_epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    /// Optional Joe-Kuo direction-number file; the embedded 64-dimension
    /// table is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sobol_table: Option<PathBuf>,
}

impl OptimizerConfig {
    pub fn new(algorithm: Algorithm, dim: usize, n_total: usize, seed: u64) -> Self {
        Self {
            algorithm,
            dim,
            budget: Budget::new(n_total, 20, 0.2),
            k_regions: default_k_regions(),
            scheme: default_scheme(),
            adaptation: AdaptationConfig::default(),
            mask: MaskConfig::default(),
            center_strategy: default_center_strategy(),
            zo_epsilon: default_zo_epsilon(),
            seed,
            sobol_table: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim == 0 {
            return Err(ConfigError::ZeroDimension);
        }
        self.budget.validate()?;
        self.mask.validate()?;
        self.adaptation.validate()?;
        match self.algorithm {
            Algorithm::Trs => {
                if self.k_regions == 0 || self.k_regions > self.budget.batch_size {
                    return Err(ConfigError::InvalidRegionCount {
                        k: self.k_regions,
                        batch_size: self.budget.batch_size,
                    });
                }
                crate::budget::budget_split(
                    self.budget.n_total,
                    self.budget.warm_fraction,
                    self.budget.batch_size,
                )?;
            }
            Algorithm::ZeroOrder => {
                if !(self.zo_epsilon > 0.0 && self.zo_epsilon.is_finite()) {
                    return Err(ConfigError::InvalidZeroOrderRadius(self.zo_epsilon));
                }
            }
            Algorithm::Random => {}
        }
        Ok(())
    }
}

/// Per-iteration snapshot of one region, for audit trails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionTraceRow {
    pub iteration: usize,
    pub region_id: usize,
    pub side_length: f64,
    pub center_reward: f64,
    pub restarts: usize,
}

/// Outcome of one optimizer run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub config_echo: OptimizerConfig,
    pub best_candidate: NoiseVector,
    pub best_reward: f64,
    /// Best reward observed so far, after each batch (non-decreasing).
    pub best_per_batch: Vec<f64>,
    pub per_region_trace: Vec<RegionTraceRow>,
    pub total_evaluations: usize,
    /// Seconds; excluded from determinism guarantees.
    pub wall_time: f64,
}

impl RunReport {
    /// Field equality ignoring `wall_time`.
    pub fn deterministic_eq(&self, other: &Self) -> bool {
        self.config_echo == other.config_echo
            && self.best_candidate == other.best_candidate
            && self.best_reward == other.best_reward
            && self.best_per_batch == other.best_per_batch
            && self.per_region_trace == other.per_region_trace
            && self.total_evaluations == other.total_evaluations
    }
}

/// Runs the configured algorithm.
pub fn run(
    config: &OptimizerConfig,
    objective: &mut dyn BatchObjective,
) -> Result<RunReport, RunError> {
    run_with_records(config, objective).map(|(report, _)| report)
}

/// Runs the configured algorithm, also returning the full evaluation
/// trajectory (candidates, rewards, provenance) in evaluation order.
pub fn run_with_records(
    config: &OptimizerConfig,
    objective: &mut dyn BatchObjective,
) -> Result<(RunReport, Vec<EvaluationRecord>), RunError> {
    match config.algorithm {
        Algorithm::Trs => run_trs(config, objective),
        Algorithm::Random => run_random_search(config, objective),
        Algorithm::ZeroOrder => run_zero_order(config, objective),
    }
}

/// Shared evaluation/bookkeeping loop state.
pub(crate) struct Driver<'a> {
    objective: &'a mut dyn BatchObjective,
    budget: Budget,
    pub(crate) records: Vec<EvaluationRecord>,
    pub(crate) best_per_batch: Vec<f64>,
    best_index: usize,
    started: Instant,
}

impl<'a> Driver<'a> {
    pub(crate) fn new(objective: &'a mut dyn BatchObjective, budget: Budget) -> Self {
        Self {
            objective,
            budget,
            records: Vec::with_capacity(budget.planned_evaluations()),
            best_per_batch: Vec::with_capacity(budget.total_batches()),
            best_index: 0,
            started: Instant::now(),
        }
    }

    /// Evaluates one batch, validates rewards, and appends records.
    /// Returns the index of the first new record.
    pub(crate) fn evaluate_batch(
        &mut self,
        candidates: Vec<NoiseVector>,
        region_of: &[Option<usize>],
        iteration: usize,
    ) -> Result<usize, RunError> {
        debug_assert_eq!(candidates.len(), region_of.len());
        let start = self.records.len();
        let rewards = self
            .objective
            .evaluate(&candidates)
            .map_err(|source| RunError::ObjectiveFailed {
                completed: start,
                source,
            })?;
        if rewards.len() != candidates.len() {
            return Err(RunError::RewardCountMismatch {
                expected: candidates.len(),
                got: rewards.len(),
            });
        }
        self.budget.consume(candidates.len())?;
        for ((candidate, reward), region_id) in
            candidates.into_iter().zip(rewards).zip(region_of.iter())
        {
            let index = self.records.len();
            if !reward.is_finite() {
                return Err(RunError::NonFiniteReward {
                    index,
                    value: reward,
                    completed: index,
                });
            }
            self.records.push(EvaluationRecord {
                index,
                candidate,
                reward,
                region_id: *region_id,
                iteration,
            });
            // strict improvement keeps the earliest index on ties
            if reward > self.records[self.best_index].reward {
                self.best_index = index;
            }
        }
        self.best_per_batch.push(self.records[self.best_index].reward);
        Ok(start)
    }

    pub(crate) fn best(&self) -> &EvaluationRecord {
        &self.records[self.best_index]
    }

    pub(crate) fn into_report(
        self,
        config: &OptimizerConfig,
        per_region_trace: Vec<RegionTraceRow>,
    ) -> (RunReport, Vec<EvaluationRecord>) {
        let best = self.records[self.best_index].clone();
        let report = RunReport {
            config_echo: config.clone(),
            best_candidate: best.candidate,
            best_reward: best.reward,
            best_per_batch: self.best_per_batch,
            per_region_trace,
            total_evaluations: self.records.len(),
            wall_time: self.started.elapsed().as_secs_f64(),
        };
        (report, self.records)
    }
}

/// Draws one batch of candidates from the standard-normal prior.
pub(crate) fn draw_prior_batch(rng: &mut RngStream, batch_size: usize, dim: usize) -> Vec<NoiseVector> {
    (0..batch_size)
        .map(|_| {
            let mut values = vec![0.0; dim];
            rng.fill_standard_normal(&mut values);
            NoiseVector::new(values).expect("normal draws are finite")
        })
        .collect()
}
