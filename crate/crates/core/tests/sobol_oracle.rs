//! Cross-checks the Sobol generator against an independent reference
//! implementation (values computed from the published Joe-Kuo direction
//! numbers with a separate natural-order generator) and verifies the
//! digital-net stratification the sampler relies on.

use trs_core::sampling::{affine_map, DirectionTable, SobolEngine};

/// Natural-order points at fixed raw indices, M = 5, frozen from the
/// reference implementation. All coordinates are dyadic rationals, so
/// equality is exact.
const REFERENCE_POINTS: &[(u32, [f64; 5])] = &[
    (
        65536,
        [
            7.62939453125e-06,
            0.5000076293945312,
            0.9082107543945312,
            0.12718963623046875,
            0.13488006591796875,
        ],
    ),
    (
        65537,
        [
            0.5000076293945312,
            7.62939453125e-06,
            0.40821075439453125,
            0.6271896362304688,
            0.6348800659179688,
        ],
    ),
    (
        65538,
        [
            0.25000762939453125,
            0.25000762939453125,
            0.15821075439453125,
            0.8771896362304688,
            0.38488006591796875,
        ],
    ),
    (
        65551,
        [
            0.9375076293945312,
            0.5625076293945312,
            0.34571075439453125,
            0.06468963623046875,
            0.44738006591796875,
        ],
    ),
    (
        131072,
        [
            3.814697265625e-06,
            0.7500114440917969,
            0.3623161315917969,
            0.3174934387207031,
            0.7022972106933594,
        ],
    ),
];

#[test]
fn matches_reference_points_exactly() {
    let engine = SobolEngine::new(DirectionTable::embedded().clone(), 5).unwrap();
    let mut out = vec![0.0; 5];
    for (index, expect) in REFERENCE_POINTS {
        engine.point_at(*index, &mut out);
        assert_eq!(out.as_slice(), expect.as_slice(), "raw index {index}");
    }
}

#[test]
fn engine_stream_starts_at_the_skip_offset() {
    let mut engine = SobolEngine::new(DirectionTable::embedded().clone(), 5).unwrap();
    let first = engine.next_point();
    assert_eq!(first.as_slice(), REFERENCE_POINTS[0].1.as_slice());
    let second = engine.next_point();
    assert_eq!(second.as_slice(), REFERENCE_POINTS[1].1.as_slice());
}

#[test]
fn first_256_post_skip_points_fill_every_16x16_cell_once() {
    let mut engine = SobolEngine::new(DirectionTable::embedded().clone(), 2).unwrap();
    let mut cells = vec![0usize; 256];
    for _ in 0..256 {
        let p = engine.next_point();
        let cx = (p[0] * 16.0) as usize;
        let cy = (p[1] * 16.0) as usize;
        cells[cx * 16 + cy] += 1;
    }
    assert!(
        cells.iter().all(|&c| c == 1),
        "expected exactly one point per dyadic cell, got {cells:?}"
    );
}

#[test]
fn mapped_points_never_leave_the_trust_region() {
    let mut engine = SobolEngine::new(DirectionTable::embedded().clone(), 8).unwrap();
    for side_length in [0.05, 0.8, 2.4] {
        for _ in 0..512 {
            let delta = affine_map(&engine.next_point(), side_length);
            for d in delta {
                assert!(
                    d.abs() <= side_length / 2.0,
                    "|{d}| exceeds {} / 2",
                    side_length
                );
            }
        }
    }
}

#[test]
fn every_embedded_dimension_is_usable() {
    let table = DirectionTable::embedded().clone();
    assert_eq!(table.max_dimension(), 64);
    let mut engine = SobolEngine::new(table, 64).unwrap();
    // per-dimension one-point-per-half check over an aligned block of 2
    let a = engine.next_point();
    let b = engine.next_point();
    for d in 0..64 {
        let halves = [(a[d] * 2.0) as usize, (b[d] * 2.0) as usize];
        assert_ne!(halves[0], halves[1], "dimension {d} not balanced: {a:?} {b:?}");
    }
}
