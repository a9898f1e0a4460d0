//! Candidate generation: Sobol and Gaussian perturbation schemes plus
//! stochastic coordinate masking.

pub mod mask;
pub mod perturb;
pub mod sobol;

pub use mask::{draw_mask, length_probability_cap, MaskConfig};
pub use perturb::{
    affine_map, gaussian_perturbation, propose_candidate, sigma_for_length, Perturbation,
    PerturbScheme, PerturbSource,
};
pub use sobol::{DirectionTable, SobolEngine, REGION_STRIDE};
