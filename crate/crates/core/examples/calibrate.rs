// Scratch calibration for the benchmark defaults (delete before release).

use trs_core::*;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn bests(algorithm: Algorithm, spec: &ObjectiveSpec, budget: usize, seeds: u64) -> Vec<f64> {
    (0..seeds)
        .map(|seed| {
            let mut config = OptimizerConfig::new(algorithm, spec.dim, budget, seed);
            config.k_regions = 5;
            let mut obj = make_objective(spec).unwrap();
            run(&config, &mut obj).unwrap().best_reward
        })
        .collect()
}

fn main() {
    for (components, lo, hi) in [
        (5usize, 0.05, 1.5),
        (5, 0.06, 1.5),
        (5, 0.08, 1.5),
        (5, 0.05, 1.2),
    ] {
        let spec = ObjectiveSpec {
            dim: 64,
            seed: 0,
            kind: ObjectiveKind::GaussianMixture {
                components,
                width_lo: lo,
                width_hi: hi,
            },
        };
        let trs = bests(Algorithm::Trs, &spec, 2000, 20);
        let zo = bests(Algorithm::ZeroOrder, &spec, 2000, 20);
        let rs = bests(Algorithm::Random, &spec, 2000, 20);
        let wins = trs.iter().zip(rs.iter()).filter(|(a, b)| a > b).count();
        println!(
            "comps={components} widths=[{lo},{hi}]  TRS med {:.4}  ZO med {:.4}  RS med {:.4}  trs>rs {wins}/20",
            median(trs.clone()),
            median(zo.clone()),
            median(rs.clone()),
        );
    }
}
