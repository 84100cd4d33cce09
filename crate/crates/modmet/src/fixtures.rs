//! Seeded fixture generators: random metric spaces, sign-pattern and
//! Lipschitz function families, and the canonical convergence fixtures.
//! Equal seeds produce identical fixtures.

use modmet_core::compactness::SequenceTrace;
use modmet_core::orlicz::{DiscreteMeasureSpace, FunctionFamily};
use modmet_core::{DistanceMatrix, ModularFamily, PointSpace, XReal};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

/// Random Euclidean point cloud in a cube; always a metric to rounding.
pub fn random_metric_space(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Result<PointSpace, CliError> {
    if n == 0 {
        return Err(CliError::Config("random space needs n >= 1".into()));
    }
    if !(scale > 0.0) {
        return Err(CliError::Config(format!("scale must be positive, got {scale}")));
    }
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
    .map_err(CliError::Core)?;
    PointSpace::with_distance((0..n).map(|i| format!("p{i}")).collect(), base, 1e-9)
        .map_err(CliError::Core)
}

/// Six points jittered around a regular hexagon on the unit circle; pairwise
/// distances stay within roughly [0.68, 2].
pub fn jittered_hexagon(rng: &mut ChaCha8Rng) -> Result<PointSpace, CliError> {
    let n = 6;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let jitter = rng.random_range(-std::f64::consts::PI / 18.0..std::f64::consts::PI / 18.0);
            let angle = 2.0 * std::f64::consts::PI * i as f64 / n as f64 + jitter;
            (angle.cos(), angle.sin())
        })
        .collect();
    let base = DistanceMatrix::from_fn(n, "hexagon", |i, j| {
        let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
        Ok(XReal::finite((dx * dx + dy * dy).sqrt()))
    })
    .map_err(CliError::Core)?;
    PointSpace::with_distance((0..n).map(|i| format!("p{i}")).collect(), base, 1e-9)
        .map_err(CliError::Core)
}

/// First `m` rows of the `cells × cells` Walsh sign matrix. Distinct rows
/// disagree on exactly half the cells, so pairwise L¹ distances are exactly
/// 1 under uniform unit mass.
pub fn rademacher_family(m: usize, cells: usize) -> Result<FunctionFamily, CliError> {
    if !cells.is_power_of_two() {
        return Err(CliError::Config(format!("cell count must be a power of two, got {cells}")));
    }
    if m == 0 || m > cells {
        return Err(CliError::Config(format!("need 1 <= m <= cells, got m={m}, cells={cells}")));
    }
    let rows = (0..m)
        .map(|r| {
            (0..cells)
                .map(|c| if (r & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    FunctionFamily::new(rows).map_err(CliError::Core)
}

/// {c·x : c in m evenly spaced values of [0,1]} sampled at grid cell centers.
pub fn lipschitz_family(m: usize, cells: usize) -> Result<FunctionFamily, CliError> {
    if m < 2 || cells == 0 {
        return Err(CliError::Config(format!("need m >= 2 and cells >= 1, got m={m}, cells={cells}")));
    }
    let rows = (0..m)
        .map(|k| {
            let c = k as f64 / (m - 1) as f64;
            (0..cells).map(|i| c * (i as f64 + 0.5) / cells as f64).collect()
        })
        .collect();
    FunctionFamily::new(rows).map_err(CliError::Core)
}

/// Unit-mass 1-D grid for a family of the given width.
pub fn unit_omega(cells: usize) -> Result<DiscreteMeasureSpace, CliError> {
    DiscreteMeasureSpace::grid_1d(cells, 1.0 / cells as f64).map_err(CliError::Core)
}

/// The convergence fixture for the Δ₂ diagnostic: geometric decay points
/// with their limit, and subsampled sequences converging to it.
pub struct Delta2Fixture {
    pub modular: ModularFamily,
    pub sequences: Vec<SequenceTrace>,
    pub lambda_set: Vec<f64>,
}

/// Scaled family over points at `0.5^k`; every sequence settles below any
/// tolerance within the trace, so the premise of the diagnostic fires.
pub fn delta2_scaled_fixture(
    rng: &mut ChaCha8Rng,
    count: usize,
    len: usize,
    p: f64,
) -> Result<Delta2Fixture, CliError> {
    let len = len.max(8);
    let mut coords: Vec<f64> = (0..len).map(|k| 0.5f64.powi(k as i32)).collect();
    coords.push(0.0);
    let limit = coords.len() - 1;
    let space = PointSpace::line(&coords);
    let modular = ModularFamily::power_scaled(space, p).map_err(CliError::Core)?;
    let mut sequences = Vec::with_capacity(count);
    for _ in 0..count {
        let start = rng.random_range(0..3usize);
        let stride = rng.random_range(1..3usize);
        let mut points: Vec<usize> = (0..len)
            .map(|k| (start + stride * k).min(len - 1))
            .collect();
        // settle on the deepest decay point so the tail is numerically tiny
        let tail = rng.random_range(3..6);
        for _ in 0..tail {
            points.push(len - 1);
        }
        sequences.push(SequenceTrace::with_limit(points, limit).map_err(CliError::Core)?);
    }
    Ok(Delta2Fixture { modular, sequences, lambda_set: vec![1.0, 0.5] })
}

/// Step family over points at `1 - 1/k`: the premise holds at λ = 1 while
/// `w(1/2, x_k, x)` stays infinite, the canonical Δ₂ violation.
pub fn delta2_step_fixture(count: usize, len: usize) -> Result<Delta2Fixture, CliError> {
    let len = len.max(4);
    let mut coords: Vec<f64> = (1..=len).map(|k| 1.0 - 1.0 / k as f64).collect();
    coords.push(0.0);
    let limit = coords.len() - 1;
    let space = PointSpace::line(&coords);
    let modular = ModularFamily::step(space).map_err(CliError::Core)?;
    let mut sequences = Vec::with_capacity(count);
    for s in 0..count.max(1) {
        let start = s % 2;
        let points: Vec<usize> = (start..len).collect();
        sequences.push(SequenceTrace::with_limit(points, limit).map_err(CliError::Core)?);
    }
    Ok(Delta2Fixture { modular, sequences, lambda_set: vec![1.0] })
}

/// Space and mixed traces for the Cauchy-equivalence corpus: geometric decay
/// points plus a separated far pair, with clearly converging and clearly
/// separated traces.
pub struct CauchyFixture {
    pub modular: ModularFamily,
    pub traces: Vec<SequenceTrace>,
}

pub fn cauchy_fixture(
    rng: &mut ChaCha8Rng,
    count: usize,
    len: usize,
    p: f64,
) -> Result<CauchyFixture, CliError> {
    let decay = len.clamp(12, 40);
    let q: f64 = rng.random_range(0.55..0.7);
    let mut coords: Vec<f64> = (0..decay).map(|k| q.powi(k as i32)).collect();
    coords.push(0.0);
    coords.push(10.0);
    coords.push(11.5);
    let far = (coords.len() - 2, coords.len() - 1);
    let space = PointSpace::line(&coords);
    let modular = ModularFamily::power_scaled(space, p).map_err(CliError::Core)?;
    let mut traces = Vec::with_capacity(count);
    for t in 0..count {
        if t % 2 == 0 {
            let start = rng.random_range(0..3usize);
            let points: Vec<usize> = (0..decay).map(|k| (start + k).min(decay - 1)).collect();
            traces.push(SequenceTrace::new(points).map_err(CliError::Core)?);
        } else {
            let mut points = Vec::with_capacity(len);
            for k in 0..len.max(4) {
                points.push(if k % 2 == 0 { far.0 } else { far.1 });
            }
            traces.push(SequenceTrace::new(points).map_err(CliError::Core)?);
        }
    }
    Ok(CauchyFixture { modular, traces })
}

/// Eventually constant traces, one per point: finite-sample completeness
/// witnesses for a finite space.
pub fn settling_traces(n: usize, len: usize) -> Vec<SequenceTrace> {
    (0..n)
        .map(|target| {
            let mut points: Vec<usize> = (0..n).collect();
            points.extend(std::iter::repeat(target).take(len.max(4)));
            SequenceTrace::new(points).expect("nonempty")
        })
        .collect()
}
