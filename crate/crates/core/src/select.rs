//! Top-k selection over evaluation records.

use crate::error::ConfigError;
use crate::noise::EvaluationRecord;

/// Returns the `k` highest-reward records in descending reward order.
///
/// Ties break toward the smaller evaluation index, so the result is a pure
/// function of the record *set* (permutation-stable). When fewer than `k`
/// records exist, the best records repeat cyclically to fill all `k` slots.
pub fn topk_select(
    records: &[EvaluationRecord],
    k: usize,
) -> Result<Vec<EvaluationRecord>, ConfigError> {
    if k == 0 {
        return Err(ConfigError::ZeroTopK);
    }
    if records.is_empty() {
        return Err(ConfigError::EmptyRecords);
    }
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| {
        records[b]
            .reward
            .partial_cmp(&records[a].reward)
            .expect("rewards are finite")
            .then(records[a].index.cmp(&records[b].index))
    });
    Ok((0..k)
        .map(|slot| records[order[slot % order.len()]].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseVector;

    fn record(index: usize, reward: f64) -> EvaluationRecord {
        EvaluationRecord {
            index,
            candidate: NoiseVector::new(vec![index as f64]).unwrap(),
            reward,
            region_id: None,
            iteration: 0,
        }
    }

    #[test]
    fn ties_break_toward_earliest_index() {
        let records: Vec<_> = [3.0, 1.0, 3.0, 2.0]
            .iter()
            .enumerate()
            .map(|(i, &r)| record(i, r))
            .collect();
        let top = topk_select(&records, 2).unwrap();
        assert_eq!(top[0].index, 0);
        assert_eq!(top[1].index, 2);
    }

    #[test]
    fn fills_cyclically_when_short() {
        let records = vec![record(0, 5.0)];
        let top = topk_select(&records, 3).unwrap();
        assert_eq!(top.len(), 3);
        assert!(top.iter().all(|r| r.index == 0 && r.reward == 5.0));

        let records = vec![record(0, 1.0), record(1, 4.0)];
        let top = topk_select(&records, 5).unwrap();
        let idx: Vec<_> = top.iter().map(|r| r.index).collect();
        assert_eq!(idx, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn matches_full_sort_oracle_on_warmup_sized_history() {
        // 80 synthetic records, k = 15, checked against an independent sort.
        let mut s = crate::rng::RngStream::new(11, "topk-oracle");
        let records: Vec<_> = (0..80)
            .map(|i| record(i, (s.next_f64() * 8.0).floor()))
            .collect();
        let top = topk_select(&records, 15).unwrap();

        let mut oracle: Vec<(f64, usize)> = records.iter().map(|r| (r.reward, r.index)).collect();
        oracle.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let expect: Vec<usize> = oracle.iter().take(15).map(|&(_, i)| i).collect();
        let got: Vec<usize> = top.iter().map(|r| r.index).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn descending_reward_order() {
        let records: Vec<_> = (0..10).map(|i| record(i, (i * 7 % 10) as f64)).collect();
        let top = topk_select(&records, 10).unwrap();
        for pair in top.windows(2) {
            assert!(pair[0].reward >= pair[1].reward);
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(matches!(topk_select(&[], 1), Err(ConfigError::EmptyRecords)));
        assert!(matches!(
            topk_select(&[record(0, 1.0)], 0),
            Err(ConfigError::ZeroTopK)
        ));
    }
}
