//! Trust-region state: success/failure counting, side-length adaptation,
//! restarts, and the four center-selection strategies.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::noise::{EvaluationRecord, NoiseVector};
use crate::select::topk_select;

/// Side-length adaptation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptationConfig {
    /// Multiplicative expansion/contraction factor, > 1.
    pub length_factor: f64,
    /// Consecutive improving batches required to expand.
    pub c_succ: u32,
    /// Consecutive non-improving batches required to contract.
    pub c_fail: u32,
    pub l_init: f64,
    pub l_min: f64,
    pub l_max: f64,
}

impl Default for AdaptationConfig {
    fn default() -> Self {
        Self {
            length_factor: 1.5,
            c_succ: 3,
            c_fail: 3,
            l_init: 0.8,
            l_min: 0.05,
            l_max: 2.4,
        }
    }
}

impl AdaptationConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.length_factor > 1.0 && self.length_factor.is_finite()) {
            return Err(ConfigError::InvalidAdaptation(format!(
                "length_factor must be > 1, got {}",
                self.length_factor
            )));
        }
        if self.c_succ == 0 || self.c_fail == 0 {
            return Err(ConfigError::InvalidAdaptation(
                "counter thresholds must be >= 1".into(),
            ));
        }
        let lengths_ok = self.l_min > 0.0
            && self.l_min <= self.l_init
            && self.l_init <= self.l_max
            && self.l_max.is_finite();
        if !lengths_ok {
            return Err(ConfigError::InvalidAdaptation(format!(
                "need 0 < l_min <= l_init <= l_max, got {} / {} / {}",
                self.l_min, self.l_init, self.l_max
            )));
        }
        Ok(())
    }
}

/// How centers move after each batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterStrategy {
    /// All centers jump to the globally best k points observed so far.
    GlobalTopk,
    /// All centers jump to the best k points of the latest batch.
    GlobalLastIter,
    /// Each region keeps its own incumbent best; strict separation.
    LocalBest,
    /// Each region follows the best point of its own latest sub-batch.
    LocalLastIter,
}

impl CenterStrategy {
    pub const ALL: [CenterStrategy; 4] = [
        CenterStrategy::GlobalTopk,
        CenterStrategy::GlobalLastIter,
        CenterStrategy::LocalBest,
        CenterStrategy::LocalLastIter,
    ];
}

impl std::fmt::Display for CenterStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CenterStrategy::GlobalTopk => "global_topk",
            CenterStrategy::GlobalLastIter => "global_last_iter",
            CenterStrategy::LocalBest => "local_best",
            CenterStrategy::LocalLastIter => "local_last_iter",
        };
        write!(f, "{name}")
    }
}

/// One trust region: a hypercube of side `side_length` around `center`.
///
/// At most one of the two counters is nonzero; each batch outcome bumps one
/// and clears the other.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrustRegionState {
    pub region_id: usize,
    pub center: NoiseVector,
    pub center_reward: f64,
    pub side_length: f64,
    pub success_count: u32,
    pub failure_count: u32,
    pub region_best_reward: f64,
    pub restarts: usize,
}

impl TrustRegionState {
    pub fn new(region_id: usize, center: NoiseVector, reward: f64, l_init: f64) -> Self {
        Self {
            region_id,
            center,
            center_reward: reward,
            side_length: l_init,
            success_count: 0,
            failure_count: 0,
            region_best_reward: reward,
            restarts: 0,
        }
    }

    /// Folds one batch of rewards into the success/failure counters.
    ///
    /// A batch counts as a success only when it strictly improves the best
    /// reward observed within this region.
    pub fn record_batch_outcome(&mut self, batch_rewards: &[f64]) {
        assert!(!batch_rewards.is_empty(), "region received an empty sub-batch");
        let batch_best = batch_rewards.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if batch_best > self.region_best_reward {
            self.success_count += 1;
            self.failure_count = 0;
            self.region_best_reward = batch_best;
        } else {
            self.failure_count += 1;
            self.success_count = 0;
        }
    }

    /// Applies the threshold rules to the side length. Returns true when the
    /// failure threshold fires at the minimum length, i.e. the region wants
    /// a restart.
    pub fn adapt_length(&mut self, cfg: &AdaptationConfig) -> bool {
        if self.success_count >= cfg.c_succ {
            self.side_length = (self.side_length * cfg.length_factor).min(cfg.l_max);
            self.success_count = 0;
        }
        if self.failure_count >= cfg.c_fail {
            if self.side_length > cfg.l_min {
                self.side_length = (self.side_length / cfg.length_factor).max(cfg.l_min);
                self.failure_count = 0;
            } else {
                return true;
            }
        }
        false
    }

    /// Moves the center. A no-op if the new center equals the current one.
    ///
    /// Re-centering is a shift, not a restart: counters and the side length
    /// persist, and the region best only ratchets up (it tracks the best
    /// value this region has been exposed to, so a success still means a
    /// strict improvement on everything it has seen).
    pub fn assign_center(&mut self, center: &NoiseVector, reward: f64) {
        if self.center == *center {
            return;
        }
        self.center = center.clone();
        self.center_reward = reward;
        self.region_best_reward = self.region_best_reward.max(reward);
    }
}

fn sorted_record_indices(records: &[EvaluationRecord]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| {
        records[b]
            .reward
            .partial_cmp(&records[a].reward)
            .expect("rewards are finite")
            .then(records[a].index.cmp(&records[b].index))
    });
    order
}

/// Resets a saturated region: side length back to `l_init`, counters cleared,
/// and the center moved to the best historical point not already serving as
/// some region's center (falling back to the global best when every good
/// point is taken).
pub fn restart_region(
    region: &mut TrustRegionState,
    history: &[EvaluationRecord],
    occupied_centers: &[NoiseVector],
    cfg: &AdaptationConfig,
) -> Result<(), ConfigError> {
    if history.is_empty() {
        return Err(ConfigError::EmptyHistory);
    }
    let order = sorted_record_indices(history);
    let chosen = order
        .iter()
        .map(|&i| &history[i])
        .find(|r| !occupied_centers.contains(&r.candidate))
        .unwrap_or(&history[order[0]]);
    region.center = chosen.candidate.clone();
    region.center_reward = chosen.reward;
    region.region_best_reward = chosen.reward;
    region.side_length = cfg.l_init;
    region.success_count = 0;
    region.failure_count = 0;
    region.restarts += 1;
    Ok(())
}

/// Re-centers all regions after a batch according to the strategy.
///
/// Global strategies rank candidate points by reward (ties toward earlier
/// evaluations) and hand them out to regions in ascending `region_id`;
/// local strategies never exchange points across regions.
pub fn recenter(
    regions: &mut [TrustRegionState],
    history: &[EvaluationRecord],
    last_batch: &[EvaluationRecord],
    strategy: CenterStrategy,
) -> Result<(), ConfigError> {
    if history.is_empty() {
        return Err(ConfigError::EmptyHistory);
    }
    let k = regions.len();
    match strategy {
        CenterStrategy::GlobalTopk => {
            let top = topk_select(history, k)?;
            for (region, record) in regions.iter_mut().zip(top.iter()) {
                region.assign_center(&record.candidate, record.reward);
            }
        }
        CenterStrategy::GlobalLastIter => {
            let top = topk_select(last_batch, k)?;
            for (region, record) in regions.iter_mut().zip(top.iter()) {
                region.assign_center(&record.candidate, record.reward);
            }
        }
        CenterStrategy::LocalBest => {
            for region in regions.iter_mut() {
                let best = best_for_region(history, region.region_id);
                if let Some(record) = best {
                    // the incumbent includes the seeding center: only move
                    // when a proposed point strictly beats it
                    if record.reward > region.center_reward {
                        region.assign_center(&record.candidate, record.reward);
                    }
                }
            }
        }
        CenterStrategy::LocalLastIter => {
            for region in regions.iter_mut() {
                let best = best_for_region(last_batch, region.region_id);
                if let Some(record) = best {
                    region.assign_center(&record.candidate, record.reward);
                }
            }
        }
    }
    Ok(())
}

fn best_for_region(records: &[EvaluationRecord], region_id: usize) -> Option<&EvaluationRecord> {
    records
        .iter()
        .filter(|r| r.region_id == Some(region_id))
        .max_by(|a, b| {
            a.reward
                .partial_cmp(&b.reward)
                .expect("rewards are finite")
                .then(b.index.cmp(&a.index))
        })
}
