//! Trust-region perturbations and masked candidate assembly.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::noise::NoiseVector;
use crate::rng::RngStream;
use crate::sampling::mask::{draw_mask, MaskConfig};
use crate::sampling::sobol::SobolEngine;

/// How raw perturbations are drawn inside the trust-region hypercube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbScheme {
    /// Low-discrepancy points mapped affinely into the hypercube; hard
    /// bound |delta_i| <= l/2.
    Sobol,
    /// Zero-mean normals with sigma = l / sqrt(12), matching the variance of
    /// a uniform draw over the hypercube; unbounded support.
    Gaussian,
}

impl std::fmt::Display for PerturbScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PerturbScheme::Sobol => write!(f, "sobol"),
            PerturbScheme::Gaussian => write!(f, "gaussian"),
        }
    }
}

/// One proposed displacement: raw deltas, the coordinate mask, and the
/// probability the mask was drawn with. The mask always has a set bit.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub delta: Vec<f64>,
    pub mask: Vec<bool>,
    pub mask_probability: f64,
}

/// Mutable state backing one region's perturbation draws.
pub enum PerturbSource<'a> {
    Sobol(&'a mut SobolEngine),
    Gaussian(&'a mut RngStream),
}

/// Maps a unit-cube point into `[-l/2, l/2]^M`.
pub fn affine_map(unit_point: &[f64], side_length: f64) -> Vec<f64> {
    let half = 0.5 * side_length;
    unit_point.iter().map(|&u| side_length * u - half).collect()
}

pub fn sigma_for_length(side_length: f64) -> f64 {
    side_length / 12f64.sqrt()
}

/// Draws i.i.d. normal perturbations with spread matched to the hypercube.
pub fn gaussian_perturbation(side_length: f64, dim: usize, rng: &mut RngStream) -> Vec<f64> {
    let sigma = sigma_for_length(side_length);
    (0..dim).map(|_| sigma * rng.standard_normal()).collect()
}

fn validate_side_length(side_length: f64) -> Result<(), ConfigError> {
    if side_length.is_finite() && side_length > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::InvalidSideLength(side_length))
    }
}

/// Assembles one candidate: `center + delta (.) mask`.
///
/// Coordinates with a cleared mask bit equal the center bit-for-bit; set
/// bits add the raw delta. The result is never clamped or re-normalized.
pub fn propose_candidate(
    center: &NoiseVector,
    side_length: f64,
    mask_cfg: &MaskConfig,
    source: &mut PerturbSource<'_>,
    mask_rng: &mut RngStream,
) -> Result<(NoiseVector, Perturbation), ConfigError> {
    validate_side_length(side_length)?;
    let dim = center.dim();
    let (mask_probability, mask) = draw_mask(mask_cfg, side_length, dim, mask_rng)?;
    let delta = match source {
        PerturbSource::Sobol(engine) => {
            if engine.dim() != dim {
                return Err(ConfigError::DimensionMismatch {
                    want: dim,
                    got: engine.dim(),
                });
            }
            affine_map(&engine.next_point(), side_length)
        }
        PerturbSource::Gaussian(rng) => gaussian_perturbation(side_length, dim, rng),
    };
    let values: Vec<f64> = center
        .iter()
        .zip(mask.iter().zip(delta.iter()))
        .map(|(&c, (&m, &d))| if m { c + d } else { c })
        .collect();
    let candidate = NoiseVector::new(values)?;
    Ok((
        candidate,
        Perturbation {
            delta,
            mask,
            mask_probability,
        },
    ))
}
