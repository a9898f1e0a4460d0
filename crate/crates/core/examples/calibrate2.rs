// Deep diagnostic of region dynamics (scratch, delete before release).

use trs_core::*;

fn main() {
    let spec = ObjectiveSpec {
        dim: 64,
        seed: 0,
        kind: ObjectiveKind::GaussianMixture {
            components: 5,
            width_lo: 0.08,
            width_hi: 1.2,
        },
    };
    let mut config = OptimizerConfig::new(Algorithm::Trs, 64, 2000, 0);
    config.k_regions = 5;
    let mut obj = make_objective(&spec).unwrap();
    let report = run(&config, &mut obj).unwrap();
    // per-iteration: lengths of all regions and spread of center rewards
    let mut by_iter: std::collections::BTreeMap<usize, Vec<&RegionTraceRow>> = Default::default();
    for row in &report.per_region_trace {
        by_iter.entry(row.iteration).or_default().push(row);
    }
    for (it, rows) in by_iter.iter().step_by(4) {
        let lengths: Vec<f64> = rows.iter().map(|r| r.side_length).collect();
        let rewards: Vec<f64> = rows.iter().map(|r| r.center_reward).collect();
        let restarts: usize = rows.iter().map(|r| r.restarts).sum();
        println!(
            "iter {it:3}  l={lengths:.3?}  centers=[{:.3},{:.3}]  restarts={restarts}  best={:.4}",
            rewards.iter().cloned().fold(f64::INFINITY, f64::min),
            rewards.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            report.best_per_batch[*it],
        );
    }

    // ZO curve for comparison
    let zcfg = OptimizerConfig::new(Algorithm::ZeroOrder, 64, 2000, 0);
    let mut obj2 = make_objective(&spec).unwrap();
    let zreport = run(&zcfg, &mut obj2).unwrap();
    let t: Vec<String> = zreport.best_per_batch.iter().step_by(4).map(|v| format!("{v:.3}")).collect();
    println!("zo   best curve: {}", t.join(" "));
    let t: Vec<String> = report.best_per_batch.iter().step_by(4).map(|v| format!("{v:.3}")).collect();
    println!("trs  best curve: {}", t.join(" "));
}
