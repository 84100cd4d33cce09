//! The standard fuzzy metric `M_d(x,y,t) = t/(t+d(x,y))` and the comparison
//! of its ball system with the metric's own.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::matrix::DistanceMatrix;
use crate::topology::{RefinementDirection, RefinementVerdict, RefinementWitness};

/// `M_d(x,y,t) = t/(t+d(x,y))`; infinite distance gives 0, zero gives 1.
pub fn fuzzy_value(d: &DistanceMatrix, i: usize, j: usize, t: f64) -> Result<f64> {
    d.check_point(i)?;
    d.check_point(j)?;
    check_t(t)?;
    let dv = d.get(i, j);
    Ok(if dv.is_infinite() { 0.0 } else { t / (t + dv.value()) })
}

/// The full `n×n` matrix of `M_d(·,·,t)`, row-major.
pub fn fuzzy_matrix(d: &DistanceMatrix, t: f64) -> Result<Vec<f64>> {
    check_t(t)?;
    let n = d.n();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(fuzzy_value(d, i, j, t)?);
        }
    }
    Ok(out)
}

/// Fuzzy ball `B(x,r,t) = {y : M_d(x,y,t) > 1-r}`, ascending indices.
pub fn fuzzy_ball(d: &DistanceMatrix, center: usize, r: f64, t: f64) -> Result<Vec<usize>> {
    d.check_point(center)?;
    check_t(t)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(CoreError::Domain(alloc::format!("fuzzy radius must lie in (0,1), got {r}")));
    }
    let mut out = Vec::new();
    for y in 0..d.n() {
        if fuzzy_value(d, center, y, t)? > 1.0 - r {
            out.push(y);
        }
    }
    Ok(out)
}

/// Exhaustive mutual-refinement check between the fuzzy ball system sampled
/// at `(r, t)` pairs and the metric ball system sampled at `radii`. For the
/// standard fuzzy metric the two systems coincide via
/// `B(x,r,t) = {y : d(x,y) < t·r/(1-r)}`, so rich enough sample lists give a
/// mutual verdict.
pub fn fuzzy_refinement(
    d: &DistanceMatrix,
    ts: &[f64],
    rs: &[f64],
    radii: &[f64],
) -> Result<RefinementVerdict> {
    if ts.is_empty() || rs.is_empty() || radii.is_empty() {
        return Err(CoreError::Domain("fuzzy refinement needs nonempty t, r, radii lists".into()));
    }
    for &t in ts {
        check_t(t)?;
    }
    for &r in rs {
        if !(r > 0.0 && r < 1.0) {
            return Err(CoreError::Domain(alloc::format!("fuzzy radius must lie in (0,1), got {r}")));
        }
    }
    if radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(CoreError::Domain("radii must be positive finite reals".into()));
    }

    // all sampled fuzzy balls per point, alongside their (r,t) tags
    let fuzzy_balls = |x: usize| -> Result<Vec<((f64, f64), Vec<usize>)>> {
        let mut out = Vec::with_capacity(rs.len() * ts.len());
        for &r in rs {
            for &t in ts {
                out.push(((r, t), fuzzy_ball(d, x, r, t)?));
            }
        }
        Ok(out)
    };

    let contains = |outer: &[usize], inner: &[usize]| inner.iter().all(|z| outer.binary_search(z).is_ok());

    let mut witnesses = Vec::new();
    let mut fuzzy_into_metric = true;
    let mut metric_into_fuzzy = true;
    for x in 0..d.n() {
        let fb = fuzzy_balls(x)?;
        // each metric ball must contain some fuzzy ball
        for (ti, &rho) in radii.iter().enumerate() {
            let target = d.ball(x, rho);
            if !fb.iter().any(|(_, b)| contains(&target, b)) {
                fuzzy_into_metric = false;
                witnesses.push(RefinementWitness {
                    a_into_b: true,
                    point: x,
                    target_radius: rho,
                    target_index: ti,
                    tried: fb.len(),
                });
            }
        }
        // each fuzzy ball must contain some metric ball
        for (fi, ((r, t), target)) in fb.iter().enumerate() {
            if !radii.iter().any(|&rho| contains(target, &d.ball(x, rho))) {
                metric_into_fuzzy = false;
                witnesses.push(RefinementWitness {
                    a_into_b: false,
                    point: x,
                    target_radius: t * r / (1.0 - r),
                    target_index: fi,
                    tried: radii.len(),
                });
            }
        }
    }
    let direction = match (fuzzy_into_metric, metric_into_fuzzy) {
        (true, true) => RefinementDirection::Mutual,
        (true, false) => RefinementDirection::ARefinesB,
        (false, true) => RefinementDirection::BRefinesA,
        (false, false) => RefinementDirection::Neither,
    };
    Ok(RefinementVerdict { direction, witnesses })
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(CoreError::Domain(alloc::format!("fuzzy parameter t must be a positive real, got {t}")))
    }
}
