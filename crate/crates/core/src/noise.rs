//! Points in the source-noise search space and their evaluation records.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// A point in the M-dimensional source-noise space, the optimization variable.
///
/// Entries are unitless and nominally standard normal under the model prior.
/// Construction rejects empty and non-finite vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NoiseVector(Vec<f64>);

impl NoiseVector {
    pub fn new(values: Vec<f64>) -> Result<Self, ConfigError> {
        if values.is_empty() {
            return Err(ConfigError::ZeroDimension);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(ConfigError::NonFiniteEntry { index, value });
            }
        }
        Ok(Self(values))
    }

    pub fn zeros(dim: usize) -> Result<Self, ConfigError> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Deref for NoiseVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// One (candidate, reward) pair with its global evaluation index.
///
/// Indices are dense within a run: record `i` was the `i`-th objective
/// evaluation. `region_id` is absent for warm-up and baseline draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub index: usize,
    pub candidate: NoiseVector,
    pub reward: f64,
    pub region_id: Option<usize>,
    pub iteration: usize,
}
