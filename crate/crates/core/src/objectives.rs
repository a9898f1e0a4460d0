//! Seeded synthetic black-box objectives and brute-force oracles.
//!
//! Each spec fully determines its objective: hidden parameters (targets,
//! mixture modes, network weights, grid tables) are derived from the spec
//! seed and never exposed through the evaluation API. The oracle below is
//! the only sanctioned way to peek at an optimum, and it earns it by
//! exhaustive scanning.

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, EvalError};
use crate::noise::NoiseVector;
use crate::rng::RngStream;

/// A black box mapping batches of noise vectors to finite scalar rewards.
///
/// Implementations must be pure (same candidate, same reward) and return
/// exactly one reward per candidate, in order.
pub trait BatchObjective {
    fn dim(&self) -> usize;
    fn evaluate(&mut self, batch: &[NoiseVector]) -> Result<Vec<f64>, EvalError>;
    /// Total number of candidate vectors ever evaluated.
    fn eval_count(&self) -> usize;
}

/// Fully deterministic description of a synthetic objective.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub dim: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub kind: ObjectiveKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// `R(x) = -|x - t|^2` with a hidden standard-normal target `t`.
    Sphere {
        #[serde(default = "default_target_scale")]
        target_scale: f64,
    },
    /// Weighted sum of Gaussian bumps: broad low guide modes whose
    /// overlapping mass forms a smooth slope toward a summit region, plus
    /// one dominant sharp mode (weight 1, width `width_lo * sqrt(M)`)
    /// hiding near that summit. The guide mass makes the summit easy to
    /// approach from prior samples, but most of the reward sits in the
    /// sharp peak, which only fine final steps can resolve. Guide widths
    /// are uniform in the upper half of `[width_lo, width_hi] * sqrt(M)`
    /// with weights in [0.15, 0.35]; all centers stay within twice the
    /// prior's typical radius.
    GaussianMixture {
        #[serde(default = "default_components")]
        components: usize,
        #[serde(default = "default_width_lo")]
        width_lo: f64,
        #[serde(default = "default_width_hi")]
        width_hi: f64,
    },
    /// Negated Rastrigin composed with a hidden random rotation and shift.
    RotatedRastrigin {
        #[serde(default = "default_target_scale")]
        target_scale: f64,
    },
    /// `R(x) = -|tanh(W2 tanh(W1 x)) - y*|_1`, a fixed nonlinear map toward
    /// a reachable target.
    ToyFlow {
        #[serde(default = "default_target_scale")]
        target_scale: f64,
    },
    /// Seeded reward table over a uniform grid; candidates snap to the
    /// nearest node. Only M <= 3.
    DiscreteGrid {
        #[serde(default = "default_resolution")]
        resolution: usize,
    },
}

fn default_target_scale() -> f64 {
    1.0
}
fn default_components() -> usize {
    5
}
fn default_width_lo() -> f64 {
    0.3
}
fn default_width_hi() -> f64 {
    0.6
}
fn default_resolution() -> usize {
    16
}

const GRID_HALF_WIDTH: f64 = 3.0;

impl ObjectiveSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim == 0 {
            return Err(ConfigError::ZeroDimension);
        }
        match &self.kind {
            ObjectiveKind::GaussianMixture {
                components,
                width_lo,
                width_hi,
            } => {
                if *components == 0 {
                    return Err(ConfigError::InvalidObjective(
                        "mixture needs at least one component".into(),
                    ));
                }
                if !(0.0 < *width_lo && width_lo <= width_hi) {
                    return Err(ConfigError::InvalidObjective(format!(
                        "mixture widths must satisfy 0 < lo <= hi, got [{width_lo}, {width_hi}]"
                    )));
                }
            }
            ObjectiveKind::DiscreteGrid { resolution } => {
                if self.dim > 3 {
                    return Err(ConfigError::InvalidObjective(format!(
                        "discrete grid supports M <= 3, got {}",
                        self.dim
                    )));
                }
                if *resolution < 2 {
                    return Err(ConfigError::InvalidObjective(
                        "grid resolution must be >= 2".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ObjectiveKind::Sphere { .. } => "sphere",
            ObjectiveKind::GaussianMixture { .. } => "gaussian_mixture",
            ObjectiveKind::RotatedRastrigin { .. } => "rotated_rastrigin",
            ObjectiveKind::ToyFlow { .. } => "toy_flow",
            ObjectiveKind::DiscreteGrid { .. } => "discrete_grid",
        }
    }
}

enum Landscape {
    Sphere {
        target: Vec<f64>,
    },
    Mixture {
        means: Vec<Vec<f64>>,
        weights: Vec<f64>,
        widths: Vec<f64>,
    },
    Rastrigin {
        rotation: DMatrix<f64>,
        shift: DVector<f64>,
    },
    ToyFlow {
        w1: DMatrix<f64>,
        w2: DMatrix<f64>,
        target: DVector<f64>,
    },
    Grid {
        nodes_per_axis: usize,
        values: Vec<f64>,
    },
}

/// An in-process synthetic objective with an atomic evaluation counter.
pub struct SyntheticObjective {
    spec: ObjectiveSpec,
    landscape: Landscape,
    evaluations: AtomicUsize,
}

/// Builds the black box described by `spec`.
pub fn make_objective(spec: &ObjectiveSpec) -> Result<SyntheticObjective, ConfigError> {
    spec.validate()?;
    let dim = spec.dim;
    let landscape = match &spec.kind {
        ObjectiveKind::Sphere { target_scale } => {
            let mut rng = RngStream::new(spec.seed, "objective/sphere/target");
            let target = (0..dim)
                .map(|_| target_scale * rng.standard_normal())
                .collect();
            Landscape::Sphere { target }
        }
        ObjectiveKind::GaussianMixture {
            components,
            width_lo,
            width_hi,
        } => {
            let mut rng = RngStream::new(spec.seed, "objective/mixture/params");
            let scale = (dim as f64).sqrt();
            let radius_cap = 2.0 * scale;
            let cap = |mut mu: Vec<f64>| {
                let norm = mu.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > radius_cap {
                    for v in &mut mu {
                        *v *= radius_cap / norm;
                    }
                }
                mu
            };
            let guides = components - 1;
            let guide_means: Vec<Vec<f64>> = (0..guides)
                .map(|_| cap((0..dim).map(|_| rng.standard_normal()).collect()))
                .collect();
            // the dominant peak hides near the summit of the guide mass,
            // which lies around the guide centroid (within the radius cap
            // by convexity)
            let dominant: Vec<f64> = (0..dim)
                .map(|d| {
                    let centroid = if guides > 0 {
                        guide_means.iter().map(|mu| mu[d]).sum::<f64>() / guides as f64
                    } else {
                        0.0
                    };
                    centroid + (0.5 / scale) * rng.standard_normal()
                })
                .collect();

            let mut means = vec![cap(dominant)];
            let mut widths = vec![width_lo * scale];
            let mut weights = vec![1.0];
            let guide_lo = 0.5 * (width_lo + width_hi);
            for mu in guide_means {
                means.push(mu);
                widths.push(rng.uniform(guide_lo * scale, width_hi * scale));
                weights.push(rng.uniform(0.15, 0.35));
            }
            Landscape::Mixture {
                means,
                weights,
                widths,
            }
        }
        ObjectiveKind::RotatedRastrigin { target_scale } => {
            let mut rng = RngStream::new(spec.seed, "objective/rastrigin/params");
            let raw = DMatrix::from_fn(dim, dim, |_, _| rng.standard_normal());
            let rotation = raw.qr().q();
            let shift = DVector::from_fn(dim, |_, _| target_scale * rng.standard_normal());
            Landscape::Rastrigin { rotation, shift }
        }
        ObjectiveKind::ToyFlow { target_scale } => {
            let mut rng = RngStream::new(spec.seed, "objective/toy_flow/params");
            let hidden = 2 * dim;
            let s1 = 1.0 / (dim as f64).sqrt();
            let s2 = 1.0 / (hidden as f64).sqrt();
            let w1 = DMatrix::from_fn(hidden, dim, |_, _| s1 * rng.standard_normal());
            let w2 = DMatrix::from_fn(dim, hidden, |_, _| s2 * rng.standard_normal());
            let source = DVector::from_fn(dim, |_, _| target_scale * rng.standard_normal());
            let target = flow_forward(&w1, &w2, &source);
            Landscape::ToyFlow { w1, w2, target }
        }
        ObjectiveKind::DiscreteGrid { resolution } => {
            let mut rng = RngStream::new(spec.seed, "objective/grid/table");
            let nodes = resolution.pow(dim as u32);
            let values = (0..nodes).map(|_| rng.uniform(0.0, 1.0)).collect();
            Landscape::Grid {
                nodes_per_axis: *resolution,
                values,
            }
        }
    };
    Ok(SyntheticObjective {
        spec: spec.clone(),
        landscape,
        evaluations: AtomicUsize::new(0),
    })
}

fn flow_forward(w1: &DMatrix<f64>, w2: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    let mut h = w1 * x;
    h.apply(|v| *v = v.tanh());
    let mut out = w2 * &h;
    out.apply(|v| *v = v.tanh());
    out
}

fn grid_node_coordinate(index: usize, nodes_per_axis: usize) -> f64 {
    let step = 2.0 * GRID_HALF_WIDTH / (nodes_per_axis - 1) as f64;
    -GRID_HALF_WIDTH + index as f64 * step
}

fn snap_to_grid(x: f64, nodes_per_axis: usize) -> usize {
    let clamped = x.clamp(-GRID_HALF_WIDTH, GRID_HALF_WIDTH);
    let step = 2.0 * GRID_HALF_WIDTH / (nodes_per_axis - 1) as f64;
    let idx = ((clamped + GRID_HALF_WIDTH) / step).round() as usize;
    idx.min(nodes_per_axis - 1)
}

impl SyntheticObjective {
    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    fn reward(&self, x: &[f64]) -> f64 {
        match &self.landscape {
            Landscape::Sphere { target } => {
                -x.iter()
                    .zip(target.iter())
                    .map(|(xi, ti)| (xi - ti) * (xi - ti))
                    .sum::<f64>()
            }
            Landscape::Mixture {
                means,
                weights,
                widths,
            } => {
                let mut total = 0.0;
                for ((mu, &w), &s) in means.iter().zip(weights.iter()).zip(widths.iter()) {
                    let d2: f64 = x
                        .iter()
                        .zip(mu.iter())
                        .map(|(xi, mi)| (xi - mi) * (xi - mi))
                        .sum();
                    total += w * (-d2 / (2.0 * s * s)).exp();
                }
                total
            }
            Landscape::Rastrigin { rotation, shift } => {
                let v = DVector::from_column_slice(x) - shift;
                let z = rotation * v;
                let m = x.len() as f64;
                let sum: f64 = z
                    .iter()
                    .map(|&zi| zi * zi - 10.0 * (2.0 * std::f64::consts::PI * zi).cos())
                    .sum();
                -(10.0 * m + sum)
            }
            Landscape::ToyFlow { w1, w2, target } => {
                let out = flow_forward(w1, w2, &DVector::from_column_slice(x));
                -(out - target).abs().sum()
            }
            Landscape::Grid {
                nodes_per_axis,
                values,
            } => {
                let mut flat = 0usize;
                for &xi in x {
                    flat = flat * nodes_per_axis + snap_to_grid(xi, *nodes_per_axis);
                }
                values[flat]
            }
        }
    }
}

impl BatchObjective for SyntheticObjective {
    fn dim(&self) -> usize {
        self.spec.dim
    }

    fn evaluate(&mut self, batch: &[NoiseVector]) -> Result<Vec<f64>, EvalError> {
        let mut rewards = Vec::with_capacity(batch.len());
        for candidate in batch {
            if candidate.dim() != self.spec.dim {
                return Err(EvalError::DimensionMismatch {
                    want: self.spec.dim,
                    got: candidate.dim(),
                });
            }
            rewards.push(self.reward(candidate));
        }
        self.evaluations.fetch_add(batch.len(), Ordering::Relaxed);
        Ok(rewards)
    }

    fn eval_count(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }
}

const SCAN_NODE_LIMIT: u128 = 80_000_000;

/// Exhaustive grid scan returning the exact argmax (ties resolve to the
/// lexicographically smallest node).
///
/// Continuous kinds scan `[-b, b]^M` with `b = 2 sqrt(M) + 1` at the given
/// per-axis resolution and require M <= 3; the discrete grid scans its own
/// node table.
pub fn brute_force_optimum(
    spec: &ObjectiveSpec,
    resolution: usize,
) -> Result<(NoiseVector, f64), ConfigError> {
    spec.validate()?;
    let objective = make_objective(spec)?;

    let (nodes_per_axis, coord): (usize, Box<dyn Fn(usize) -> f64>) = match &spec.kind {
        ObjectiveKind::DiscreteGrid { resolution } => {
            let n = *resolution;
            (n, Box::new(move |i| grid_node_coordinate(i, n)))
        }
        _ => {
            if spec.dim > 3 {
                return Err(ConfigError::InvalidObjective(format!(
                    "exhaustive scan supports M <= 3, got {}",
                    spec.dim
                )));
            }
            if resolution < 2 {
                return Err(ConfigError::InvalidObjective(
                    "scan resolution must be >= 2".into(),
                ));
            }
            let half = 2.0 * (spec.dim as f64).sqrt() + 1.0;
            let n = resolution;
            let step = 2.0 * half / (n - 1) as f64;
            (n, Box::new(move |i| -half + i as f64 * step))
        }
    };

    let total = (nodes_per_axis as u128).pow(spec.dim as u32);
    if total > SCAN_NODE_LIMIT {
        return Err(ConfigError::ScanTooLarge {
            nodes: total,
            limit: SCAN_NODE_LIMIT,
        });
    }

    let mut best_reward = f64::NEG_INFINITY;
    let mut best_point = vec![0.0; spec.dim];
    let mut indices = vec![0usize; spec.dim];
    let mut point = vec![0.0; spec.dim];
    loop {
        for (d, &i) in indices.iter().enumerate() {
            point[d] = coord(i);
        }
        let reward = objective.reward(&point);
        if reward > best_reward {
            best_reward = reward;
            best_point.copy_from_slice(&point);
        }
        // lexicographic advance
        let mut axis = spec.dim;
        loop {
            if axis == 0 {
                return Ok((NoiseVector::new(best_point)?, best_reward));
            }
            axis -= 1;
            indices[axis] += 1;
            if indices[axis] < nodes_per_axis {
                break;
            }
            indices[axis] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_spec(dim: usize, seed: u64) -> ObjectiveSpec {
        ObjectiveSpec {
            dim,
            seed,
            kind: ObjectiveKind::Sphere { target_scale: 1.0 },
        }
    }

    fn mixture_spec(dim: usize, seed: u64) -> ObjectiveSpec {
        ObjectiveSpec {
            dim,
            seed,
            kind: ObjectiveKind::GaussianMixture {
                components: 5,
                width_lo: 0.3,
                width_hi: 0.6,
            },
        }
    }

    fn hidden_sphere_target(spec: &ObjectiveSpec) -> Vec<f64> {
        let mut rng = RngStream::new(spec.seed, "objective/sphere/target");
        (0..spec.dim).map(|_| rng.standard_normal()).collect()
    }

    #[test]
    fn sphere_maximum_at_target() {
        let spec = sphere_spec(6, 3);
        let mut obj = make_objective(&spec).unwrap();
        let t = NoiseVector::new(hidden_sphere_target(&spec)).unwrap();
        let r = obj.evaluate(&[t]).unwrap()[0];
        assert_eq!(r, 0.0);
        let off = NoiseVector::new(vec![0.5; 6]).unwrap();
        assert!(obj.evaluate(&[off]).unwrap()[0] < 0.0);
    }

    #[test]
    fn mixture_dominant_mode_reward_at_least_its_weight() {
        let spec = mixture_spec(4, 9);
        let mut obj = make_objective(&spec).unwrap();
        let mu0 = match &obj.landscape {
            Landscape::Mixture { means, .. } => means[0].clone(),
            _ => unreachable!(),
        };
        let r = obj.evaluate(&[NoiseVector::new(mu0).unwrap()]).unwrap()[0];
        assert!(r >= 1.0, "reward at dominant mode = {r}");
    }

    #[test]
    fn evaluation_is_pure_and_order_invariant() {
        let spec = mixture_spec(8, 1);
        let mut a = make_objective(&spec).unwrap();
        let mut b = make_objective(&spec).unwrap();
        let mut rng = RngStream::new(2, "purity");
        let batch: Vec<NoiseVector> = (0..6)
            .map(|_| {
                let mut v = vec![0.0; 8];
                rng.fill_standard_normal(&mut v);
                NoiseVector::new(v).unwrap()
            })
            .collect();
        let r1 = a.evaluate(&batch).unwrap();
        let r2 = a.evaluate(&batch).unwrap();
        assert_eq!(r1, r2);

        let reversed: Vec<NoiseVector> = batch.iter().rev().cloned().collect();
        let r3 = b.evaluate(&reversed).unwrap();
        let mut r3 = r3;
        r3.reverse();
        assert_eq!(r1, r3);
    }

    #[test]
    fn eval_count_accumulates() {
        let spec = sphere_spec(3, 0);
        let mut obj = make_objective(&spec).unwrap();
        let batch = vec![NoiseVector::zeros(3).unwrap(); 4];
        obj.evaluate(&batch).unwrap();
        obj.evaluate(&batch[..2]).unwrap();
        assert_eq!(obj.eval_count(), 6);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let spec = sphere_spec(3, 0);
        let mut obj = make_objective(&spec).unwrap();
        let bad = vec![NoiseVector::zeros(2).unwrap()];
        assert!(matches!(
            obj.evaluate(&bad),
            Err(EvalError::DimensionMismatch { want: 3, got: 2 })
        ));
    }

    #[test]
    fn rastrigin_peak_at_hidden_shift() {
        let spec = ObjectiveSpec {
            dim: 3,
            seed: 4,
            kind: ObjectiveKind::RotatedRastrigin { target_scale: 1.0 },
        };
        let mut obj = make_objective(&spec).unwrap();
        let shift = match &obj.landscape {
            Landscape::Rastrigin { shift, .. } => shift.iter().cloned().collect::<Vec<_>>(),
            _ => unreachable!(),
        };
        let at_peak = obj
            .evaluate(&[NoiseVector::new(shift).unwrap()])
            .unwrap()[0];
        assert!(at_peak.abs() < 1e-9, "rastrigin at optimum = {at_peak}");
    }

    #[test]
    fn toy_flow_target_is_reachable() {
        let spec = ObjectiveSpec {
            dim: 4,
            seed: 5,
            kind: ObjectiveKind::ToyFlow { target_scale: 1.0 },
        };
        let mut obj = make_objective(&spec).unwrap();
        let mut rng = RngStream::new(spec.seed, "objective/toy_flow/params");
        let hidden = 8;
        for _ in 0..(hidden * 4 + 4 * hidden) {
            rng.standard_normal();
        }
        let source: Vec<f64> = (0..4).map(|_| rng.standard_normal()).collect();
        let r = obj.evaluate(&[NoiseVector::new(source).unwrap()]).unwrap()[0];
        assert!(r.abs() < 1e-12, "reward at generating source = {r}");
    }

    #[test]
    fn grid_objective_snaps_and_matches_table_max() {
        let spec = ObjectiveSpec {
            dim: 2,
            seed: 6,
            kind: ObjectiveKind::DiscreteGrid { resolution: 16 },
        };
        let (loc, reward) = brute_force_optimum(&spec, 0).unwrap();
        let mut rng = RngStream::new(6, "objective/grid/table");
        let table: Vec<f64> = (0..256).map(|_| rng.uniform(0.0, 1.0)).collect();
        let max = table.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(reward, max);

        let mut obj = make_objective(&spec).unwrap();
        let r = obj.evaluate(&[loc]).unwrap()[0];
        assert_eq!(r, max);
    }

    #[test]
    fn grid_rejects_high_dimensions() {
        let spec = ObjectiveSpec {
            dim: 4,
            seed: 0,
            kind: ObjectiveKind::DiscreteGrid { resolution: 4 },
        };
        assert!(make_objective(&spec).is_err());
    }

    #[test]
    fn oracle_finds_sphere_target_within_one_cell() {
        let spec = sphere_spec(2, 11);
        let t = hidden_sphere_target(&spec);
        let half = 2.0 * 2f64.sqrt() + 1.0;
        assert!(t.iter().all(|v| v.abs() < half), "target inside scan box");
        let (loc, _) = brute_force_optimum(&spec, 401).unwrap();
        let cell = 2.0 * half / 400.0;
        for (l, ti) in loc.iter().zip(t.iter()) {
            assert!((l - ti).abs() <= cell, "oracle off by more than a cell");
        }
    }

    #[test]
    fn oracle_rejects_oversized_scans() {
        let spec = sphere_spec(3, 0);
        assert!(matches!(
            brute_force_optimum(&spec, 600),
            Err(ConfigError::ScanTooLarge { .. })
        ));
    }

    #[test]
    fn spec_round_trips_through_serde() {
        let spec = mixture_spec(64, 0);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ObjectiveSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
    }
}
