//! Property tests for the spec-level invariants.

use proptest::prelude::*;

use trs_core::regions::{AdaptationConfig, TrustRegionState};
use trs_core::sampling::{draw_mask, length_probability_cap, MaskConfig};
use trs_core::{topk_select, EvaluationRecord, NoiseVector, RngStream};

fn record(index: usize, reward: f64) -> EvaluationRecord {
    EvaluationRecord {
        index,
        candidate: NoiseVector::new(vec![index as f64]).unwrap(),
        reward,
        region_id: None,
        iteration: 0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn topk_is_permutation_stable(
        rewards in proptest::collection::vec(-100.0f64..100.0, 1..40),
        k in 1usize..10,
        shuffle_seed in 0u64..1000,
    ) {
        let records: Vec<_> = rewards.iter().enumerate().map(|(i, &r)| record(i, r)).collect();
        let baseline: Vec<(usize, u64)> = topk_select(&records, k)
            .unwrap()
            .iter()
            .map(|r| (r.index, r.reward.to_bits()))
            .collect();

        let mut shuffled = records.clone();
        let mut rng = RngStream::new(shuffle_seed, "shuffle");
        for i in (1..shuffled.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        let permuted: Vec<(usize, u64)> = topk_select(&shuffled, k)
            .unwrap()
            .iter()
            .map(|r| (r.index, r.reward.to_bits()))
            .collect();
        prop_assert_eq!(baseline, permuted);
    }

    #[test]
    fn adapt_length_stays_within_bounds(
        start in 0.05f64..2.4,
        events in proptest::collection::vec(any::<bool>(), 1..60),
    ) {
        let cfg = AdaptationConfig::default();
        let mut region = TrustRegionState::new(0, NoiseVector::zeros(2).unwrap(), 0.0, start);
        for success in events {
            if success {
                region.success_count = cfg.c_succ;
            } else {
                region.failure_count = cfg.c_fail;
            }
            let restart = region.adapt_length(&cfg);
            prop_assert!(region.side_length >= cfg.l_min - 1e-15);
            prop_assert!(region.side_length <= cfg.l_max + 1e-15);
            if restart {
                region.side_length = cfg.l_init;
                region.failure_count = 0;
            }
        }
    }

    #[test]
    fn counters_stay_mutually_exclusive(
        rewards in proptest::collection::vec(-5.0f64..5.0, 1..80),
    ) {
        let mut region = TrustRegionState::new(0, NoiseVector::zeros(2).unwrap(), 0.0, 0.8);
        for chunk in rewards.chunks(3) {
            region.record_batch_outcome(chunk);
            prop_assert_eq!(region.success_count * region.failure_count, 0);
        }
    }

    #[test]
    fn accepted_masks_never_violate_the_constraint_table(
        side_length in 0.05f64..2.4,
        seed in 0u64..500,
    ) {
        let cfg = MaskConfig::default();
        let mut rng = RngStream::new(seed, "prop-mask");
        let (p, mask) = draw_mask(&cfg, side_length, 16, &mut rng).unwrap();
        prop_assert!(p <= length_probability_cap(side_length));
        prop_assert!(p >= cfg.p_min && p <= cfg.p_max);
        prop_assert!(mask.iter().any(|&b| b));
    }

    #[test]
    fn contraction_then_expansion_restores_interior_lengths(
        start in 0.12f64..1.5,
    ) {
        let cfg = AdaptationConfig::default();
        let mut region = TrustRegionState::new(0, NoiseVector::zeros(2).unwrap(), 0.0, start);
        region.failure_count = cfg.c_fail;
        region.adapt_length(&cfg);
        prop_assume!(region.side_length > cfg.l_min); // interior: no clamp hit
        region.success_count = cfg.c_succ;
        region.adapt_length(&cfg);
        prop_assert!((region.side_length - start).abs() <= 8.0 * f64::EPSILON * start);
    }
}
