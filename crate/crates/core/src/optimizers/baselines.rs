//! Random-search (best-of-N) and zero-order baselines.
//!
//! Zero-order search is the degenerate trust-region configuration: one
//! region, Gaussian proposals at a fixed length, no masking, best-so-far
//! re-centering. It shares the trust-region RNG labels ("warmup",
//! "region/0/perturb") and the same proposal primitive, so the two paths
//! are bit-identical under that configuration.

use crate::error::{ConfigError, RunError};
use crate::noise::{EvaluationRecord, NoiseVector};
use crate::objectives::BatchObjective;
use crate::rng::RngStream;
use crate::sampling::gaussian_perturbation;

use super::{draw_prior_batch, Driver, OptimizerConfig, RunReport};

pub fn run_random_search(
    config: &OptimizerConfig,
    objective: &mut dyn BatchObjective,
) -> Result<(RunReport, Vec<EvaluationRecord>), RunError> {
    config.validate()?;
    let batch_size = config.budget.batch_size;
    let total_batches = config.budget.total_batches();

    let mut driver = Driver::new(objective, config.budget);
    let mut rng = RngStream::new(config.seed, "warmup");
    let no_region = vec![None; batch_size];
    for batch_idx in 0..total_batches {
        let candidates = draw_prior_batch(&mut rng, batch_size, config.dim);
        driver.evaluate_batch(candidates, &no_region, batch_idx)?;
    }
    Ok(driver.into_report(config, Vec::new()))
}

pub fn run_zero_order(
    config: &OptimizerConfig,
    objective: &mut dyn BatchObjective,
) -> Result<(RunReport, Vec<EvaluationRecord>), RunError> {
    config.validate()?;
    if !(config.zo_epsilon > 0.0 && config.zo_epsilon.is_finite()) {
        return Err(ConfigError::InvalidZeroOrderRadius(config.zo_epsilon).into());
    }
    let batch_size = config.budget.batch_size;
    let total_batches = config.budget.total_batches();

    let mut driver = Driver::new(objective, config.budget);
    let no_region = vec![None; batch_size];

    let mut warm_rng = RngStream::new(config.seed, "warmup");
    let candidates = draw_prior_batch(&mut warm_rng, batch_size, config.dim);
    driver.evaluate_batch(candidates, &no_region, 0)?;

    let mut center = driver.best().candidate.clone();
    let mut center_reward = driver.best().reward;

    // epsilon expressed as an equivalent trust-region side length so the
    // perturbation math is shared with the trust-region driver
    let side_length = config.zo_epsilon * 12f64.sqrt();
    let mut perturb_rng = RngStream::new(config.seed, "region/0/perturb");

    for iteration in 1..total_batches {
        let candidates: Vec<NoiseVector> = (0..batch_size)
            .map(|_| {
                let delta = gaussian_perturbation(side_length, config.dim, &mut perturb_rng);
                let values = center
                    .iter()
                    .zip(delta.iter())
                    .map(|(&c, &d)| c + d)
                    .collect();
                NoiseVector::new(values).expect("finite center plus finite delta")
            })
            .collect();
        driver.evaluate_batch(candidates, &no_region, iteration)?;

        let best = driver.best();
        if best.reward > center_reward {
            center = best.candidate.clone();
            center_reward = best.reward;
        }
    }
    Ok(driver.into_report(config, Vec::new()))
}
