//! The trust-region search driver.
//!
//! One iteration: each region proposes its share of the global batch by
//! masked perturbation of its center, the whole batch is evaluated in a
//! single objective call, then per-region counters, side lengths, restarts,
//! and finally re-centering are applied in that order.

use std::sync::Arc;

use crate::budget::budget_split;
use crate::error::{ConfigError, RunError};
use crate::noise::{EvaluationRecord, NoiseVector};
use crate::objectives::BatchObjective;
use crate::regions::{recenter, restart_region, TrustRegionState};
use crate::rng::RngStream;
use crate::sampling::{
    propose_candidate, DirectionTable, PerturbScheme, PerturbSource, SobolEngine,
};
use crate::select::topk_select;

use super::{draw_prior_batch, Driver, OptimizerConfig, RegionTraceRow, RunReport};

enum SamplerSource {
    Sobol(SobolEngine),
    Gaussian(RngStream),
}

struct RegionSampler {
    mask_rng: RngStream,
    source: SamplerSource,
}

impl RegionSampler {
    fn propose(
        &mut self,
        region: &TrustRegionState,
        mask_cfg: &crate::sampling::MaskConfig,
    ) -> Result<NoiseVector, ConfigError> {
        let mut source = match &mut self.source {
            SamplerSource::Sobol(engine) => PerturbSource::Sobol(engine),
            SamplerSource::Gaussian(rng) => PerturbSource::Gaussian(rng),
        };
        let (candidate, _) = propose_candidate(
            &region.center,
            region.side_length,
            mask_cfg,
            &mut source,
            &mut self.mask_rng,
        )?;
        Ok(candidate)
    }
}

fn build_samplers(config: &OptimizerConfig) -> Result<Vec<RegionSampler>, ConfigError> {
    let mut scheme = config.scheme;
    let table = if scheme == PerturbScheme::Sobol {
        let table = match &config.sobol_table {
            Some(path) => Arc::new(DirectionTable::from_file(path)?),
            None => DirectionTable::embedded().clone(),
        };
        if config.dim > table.max_dimension() {
            log::warn!(
                "search dimension {} exceeds the direction-number table ({} dims); \
                 falling back to the Gaussian perturbation scheme",
                config.dim,
                table.max_dimension()
            );
            scheme = PerturbScheme::Gaussian;
        }
        Some(table)
    } else {
        None
    };

    (0..config.k_regions)
        .map(|j| {
            let mask_rng = RngStream::new(config.seed, &format!("region/{j}/mask"));
            let source = match scheme {
                PerturbScheme::Sobol => SamplerSource::Sobol(SobolEngine::for_region(
                    table.as_ref().expect("table loaded for sobol").clone(),
                    config.dim,
                    j,
                )?),
                PerturbScheme::Gaussian => SamplerSource::Gaussian(RngStream::new(
                    config.seed,
                    &format!("region/{j}/perturb"),
                )),
            };
            Ok(RegionSampler { mask_rng, source })
        })
        .collect()
}

/// Splits the global batch across regions: `B / k` each, with the `B mod k`
/// remainder granted one-by-one to the regions holding the best rewards.
fn allocate_batch(batch_size: usize, regions: &[TrustRegionState]) -> Vec<usize> {
    let k = regions.len();
    let mut counts = vec![batch_size / k; k];
    let remainder = batch_size % k;
    if remainder > 0 {
        let mut rank: Vec<usize> = (0..k).collect();
        rank.sort_by(|&a, &b| {
            regions[b]
                .region_best_reward
                .partial_cmp(&regions[a].region_best_reward)
                .expect("rewards are finite")
                .then(a.cmp(&b))
        });
        for &j in rank.iter().take(remainder) {
            counts[j] += 1;
        }
    }
    counts
}

pub fn run_trs(
    config: &OptimizerConfig,
    objective: &mut dyn BatchObjective,
) -> Result<(RunReport, Vec<EvaluationRecord>), RunError> {
    config.validate()?;
    let batch_size = config.budget.batch_size;
    let (warm_batches, opt_batches) = budget_split(
        config.budget.n_total,
        config.budget.warm_fraction,
        batch_size,
    )?;

    let mut driver = Driver::new(objective, config.budget);

    let mut warm_rng = RngStream::new(config.seed, "warmup");
    let no_region = vec![None; batch_size];
    for batch_idx in 0..warm_batches {
        let candidates = draw_prior_batch(&mut warm_rng, batch_size, config.dim);
        driver.evaluate_batch(candidates, &no_region, batch_idx)?;
    }

    let top = topk_select(&driver.records, config.k_regions)?;
    let mut regions: Vec<TrustRegionState> = top
        .iter()
        .enumerate()
        .map(|(j, rec)| {
            TrustRegionState::new(j, rec.candidate.clone(), rec.reward, config.adaptation.l_init)
        })
        .collect();
    let mut samplers = build_samplers(config)?;

    let mut trace = Vec::with_capacity(opt_batches * config.k_regions);
    for it in 0..opt_batches {
        let iteration = warm_batches + it;
        let counts = allocate_batch(batch_size, &regions);

        let mut candidates = Vec::with_capacity(batch_size);
        let mut region_of = Vec::with_capacity(batch_size);
        for region in &regions {
            let sampler = &mut samplers[region.region_id];
            for _ in 0..counts[region.region_id] {
                candidates.push(sampler.propose(region, &config.mask)?);
                region_of.push(Some(region.region_id));
            }
        }

        let start = driver.evaluate_batch(candidates, &region_of, iteration)?;

        for region in regions.iter_mut() {
            let rewards: Vec<f64> = driver.records[start..]
                .iter()
                .filter(|r| r.region_id == Some(region.region_id))
                .map(|r| r.reward)
                .collect();
            region.record_batch_outcome(&rewards);
        }

        for j in 0..regions.len() {
            if regions[j].adapt_length(&config.adaptation) {
                let occupied: Vec<NoiseVector> =
                    regions.iter().map(|r| r.center.clone()).collect();
                restart_region(&mut regions[j], &driver.records, &occupied, &config.adaptation)?;
            }
        }

        recenter(
            &mut regions,
            &driver.records,
            &driver.records[start..],
            config.center_strategy,
        )?;

        for region in &regions {
            trace.push(RegionTraceRow {
                iteration,
                region_id: region.region_id,
                side_length: region.side_length,
                center_reward: region.center_reward,
                restarts: region.restarts,
            });
        }
    }

    Ok(driver.into_report(config, trace))
}
