//! Shared fixture generators for the integration tests.
#![allow(dead_code)] // each test binary uses a subset

use modmet_core::{DistanceMatrix, PointSpace, XReal};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random points in a cube; Euclidean distances satisfy the triangle
/// inequality to rounding, so the space validates as a metric.
pub fn random_metric_space(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> PointSpace {
    let pts: Vec<[f64; 3]> = (0..n)
        .map(|_| {
            [
                rng.random_range(0.0..scale),
                rng.random_range(0.0..scale),
                rng.random_range(0.0..scale),
            ]
        })
        .collect();
    let base = DistanceMatrix::from_fn(n, "euclidean", |i, j| {
        let d = pts[i]
            .iter()
            .zip(pts[j].iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        Ok(XReal::finite(d))
    })
    .unwrap();
    PointSpace::with_distance(
        (0..n).map(|i| format!("p{i}")).collect(),
        base,
        1e-9,
    )
    .unwrap()
}

/// Points jittered around a regular hexagon on the unit circle: pairwise
/// distances stay within roughly [0.68, 2], away from quantization traps.
pub fn jittered_hexagon_space(rng: &mut ChaCha8Rng) -> PointSpace {
    let n = 6;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let jitter = rng.random_range(-core::f64::consts::PI / 18.0..core::f64::consts::PI / 18.0);
            let angle = 2.0 * core::f64::consts::PI * i as f64 / n as f64 + jitter;
            (angle.cos(), angle.sin())
        })
        .collect();
    let base = DistanceMatrix::from_fn(n, "hexagon", |i, j| {
        let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
        Ok(XReal::finite((dx * dx + dy * dy).sqrt()))
    })
    .unwrap();
    PointSpace::with_distance((0..n).map(|i| format!("p{i}")).collect(), base, 1e-9).unwrap()
}
