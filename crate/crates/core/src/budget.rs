//! Evaluation budget accounting.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Total evaluation budget, batch size, and warm-up split for one run.
///
/// A run consumes whole batches only: a budget not divisible by the batch
/// size drops the trailing remainder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub n_total: usize,
    pub batch_size: usize,
    pub warm_fraction: f64,
    #[serde(default)]
    pub consumed: usize,
}

impl Budget {
    pub fn new(n_total: usize, batch_size: usize, warm_fraction: f64) -> Self {
        Self {
            n_total,
            batch_size,
            warm_fraction,
            consumed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.batch_size == 0 {
            return Err(ConfigError::ZeroBatchSize);
        }
        if self.batch_size > self.n_total {
            return Err(ConfigError::BatchExceedsBudget {
                batch_size: self.batch_size,
                n_total: self.n_total,
            });
        }
        if !(self.warm_fraction > 0.0 && self.warm_fraction < 1.0) {
            return Err(ConfigError::WarmFractionOutOfRange(self.warm_fraction));
        }
        Ok(())
    }

    /// Whole batches the run will execute.
    pub fn total_batches(&self) -> usize {
        self.n_total / self.batch_size
    }

    /// Evaluations actually performed: `floor(n_total / B) * B`.
    pub fn planned_evaluations(&self) -> usize {
        self.total_batches() * self.batch_size
    }

    pub fn consume(&mut self, n: usize) -> Result<(), ConfigError> {
        let next = self.consumed + n;
        if next > self.n_total {
            return Err(ConfigError::BudgetExceeded {
                consumed: next,
                n_total: self.n_total,
            });
        }
        self.consumed = next;
        Ok(())
    }
}

/// Splits a budget into warm-up and optimization batches.
///
/// The warm-up batch count rounds the requested fraction to the nearest
/// whole batch with a floor of one; everything else (of the whole batches
/// the budget affords) goes to optimization. Configurations that leave no
/// optimization batch are rejected.
pub fn budget_split(
    n_total: usize,
    warm_fraction: f64,
    batch_size: usize,
) -> Result<(usize, usize), ConfigError> {
    Budget::new(n_total, batch_size, warm_fraction).validate()?;
    let warm_batches =
        ((warm_fraction * n_total as f64 / batch_size as f64).round() as usize).max(1);
    let total_batches = n_total / batch_size;
    if total_batches <= warm_batches {
        return Err(ConfigError::BudgetTooSmall {
            n_total,
            batch_size,
            warm_batches,
        });
    }
    Ok((warm_batches, total_batches - warm_batches))
}
