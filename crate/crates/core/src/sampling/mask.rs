//! Stochastic coordinate masks with length-dependent probability caps.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::rng::RngStream;

/// Bounds for the per-batch perturbation probability `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskConfig {
    pub p_min: f64,
    pub p_max: f64,
    /// Couple `p` to the trust-region side length (large regions get sparse
    /// masks). Disable for raw proposal statistics.
    pub constraints_enabled: bool,
}

impl Default for MaskConfig {
    fn default() -> Self {
        Self {
            p_min: 0.1,
            p_max: 0.9,
            constraints_enabled: true,
        }
    }
}

impl MaskConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let ok = self.p_min >= 0.0
            && self.p_max <= 1.0
            && self.p_min <= self.p_max
            && self.p_min.is_finite()
            && self.p_max.is_finite();
        if ok {
            Ok(())
        } else {
            Err(ConfigError::InvalidMaskRange {
                p_min: self.p_min,
                p_max: self.p_max,
            })
        }
    }
}

/// Maximum admissible perturbation probability for a given side length.
///
/// Larger regions must perturb fewer coordinates to stay stable:
/// l >= 2.0 caps p at 0.2, l >= 1.6 at 0.5, l >= 1.2 at 0.7.
pub fn length_probability_cap(side_length: f64) -> f64 {
    if side_length >= 2.0 {
        0.2
    } else if side_length >= 1.6 {
        0.5
    } else if side_length >= 1.2 {
        0.7
    } else {
        1.0
    }
}

const REJECTION_CAP: usize = 10_000;

/// Draws a perturbation probability and a Bernoulli coordinate mask.
///
/// `p` is uniform on `[p_min, p_max]`, rejection-sampled against the length
/// cap when constraints are enabled; an all-zero mask is redrawn with the
/// same `p` until at least one bit is set. Both loops are bounded and report
/// a configuration error instead of spinning forever.
pub fn draw_mask(
    cfg: &MaskConfig,
    side_length: f64,
    dim: usize,
    rng: &mut RngStream,
) -> Result<(f64, Vec<bool>), ConfigError> {
    cfg.validate()?;
    if dim == 0 {
        return Err(ConfigError::ZeroDimension);
    }
    let cap = if cfg.constraints_enabled {
        length_probability_cap(side_length)
    } else {
        1.0
    };
    if cfg.p_min > cap {
        return Err(ConfigError::MaskConstraintUnsatisfiable {
            side_length,
            cap,
            p_min: cfg.p_min,
        });
    }

    let mut p = rng.uniform(cfg.p_min, cfg.p_max);
    let mut attempts = 1;
    while p > cap {
        if attempts >= REJECTION_CAP {
            return Err(ConfigError::MaskRejectionCap { attempts });
        }
        p = rng.uniform(cfg.p_min, cfg.p_max);
        attempts += 1;
    }

    for attempt in 0..REJECTION_CAP {
        let mask: Vec<bool> = (0..dim).map(|_| rng.bernoulli(p)).collect();
        if mask.iter().any(|&b| b) {
            return Ok((p, mask));
        }
        let _ = attempt;
    }
    Err(ConfigError::MaskAllZero {
        attempts: REJECTION_CAP,
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_table_matches_length_thresholds() {
        assert_eq!(length_probability_cap(2.4), 0.2);
        assert_eq!(length_probability_cap(2.0), 0.2);
        assert_eq!(length_probability_cap(1.9), 0.5);
        assert_eq!(length_probability_cap(1.6), 0.5);
        assert_eq!(length_probability_cap(1.3), 0.7);
        assert_eq!(length_probability_cap(1.2), 0.7);
        assert_eq!(length_probability_cap(1.0), 1.0);
        assert_eq!(length_probability_cap(0.05), 1.0);
    }

    #[test]
    fn large_regions_only_accept_sparse_probabilities() {
        let cfg = MaskConfig {
            p_min: 0.1,
            p_max: 0.9,
            constraints_enabled: true,
        };
        let mut rng = RngStream::new(0, "mask-cap");
        for _ in 0..500 {
            let (p, _) = draw_mask(&cfg, 2.1, 16, &mut rng).unwrap();
            assert!(p <= 0.2, "accepted p = {p} above the l >= 2.0 cap");
        }
    }

    #[test]
    fn degenerate_bernoulli_yields_all_ones() {
        let cfg = MaskConfig {
            p_min: 1.0,
            p_max: 1.0,
            constraints_enabled: false,
        };
        let mut rng = RngStream::new(1, "mask-ones");
        let (p, mask) = draw_mask(&cfg, 6.4, 32, &mut rng).unwrap();
        assert_eq!(p, 1.0);
        assert!(mask.iter().all(|&b| b));
    }

    #[test]
    fn mask_always_has_a_set_bit() {
        let cfg = MaskConfig {
            p_min: 0.02,
            p_max: 0.05,
            constraints_enabled: true,
        };
        let mut rng = RngStream::new(2, "mask-nonzero");
        for _ in 0..2000 {
            let (_, mask) = draw_mask(&cfg, 0.8, 4, &mut rng).unwrap();
            assert!(mask.iter().any(|&b| b));
        }
    }

    #[test]
    fn unsatisfiable_constraint_is_a_config_error() {
        let cfg = MaskConfig {
            p_min: 0.5,
            p_max: 0.9,
            constraints_enabled: true,
        };
        let mut rng = RngStream::new(3, "mask-bad");
        assert!(matches!(
            draw_mask(&cfg, 2.0, 8, &mut rng),
            Err(ConfigError::MaskConstraintUnsatisfiable { .. })
        ));
        // same range is fine with constraints disabled
        let cfg = MaskConfig {
            constraints_enabled: false,
            ..cfg
        };
        assert!(draw_mask(&cfg, 2.0, 8, &mut rng).is_ok());
    }

    #[test]
    fn set_bit_fraction_tracks_p() {
        let cfg = MaskConfig {
            p_min: 0.3,
            p_max: 0.3,
            constraints_enabled: false,
        };
        let mut rng = RngStream::new(4, "mask-frac");
        let dim = 64;
        let draws = 2000;
        let mut set = 0usize;
        for _ in 0..draws {
            let (_, mask) = draw_mask(&cfg, 0.8, dim, &mut rng).unwrap();
            set += mask.iter().filter(|&&b| b).count();
        }
        let n = (draws * dim) as f64;
        let frac = set as f64 / n;
        let sigma = (0.3 * 0.7 / n).sqrt();
        assert!(
            (frac - 0.3).abs() < 3.0 * sigma + 1e-3,
            "fraction {frac} not within 3 sigma of 0.3"
        );
    }
}
