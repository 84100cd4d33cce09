//! Sampled verification of the modular axioms, φ-convexity, modular-set
//! membership, one-sided regularizations and scale inverses.
//!
//! The axioms quantify over all λ > 0; checks run on a caller-supplied
//! [`LambdaGrid`], so a failing report carries an exact witness while a
//! passing one certifies only the grid resolution.

use alloc::vec::Vec;

use crate::error::{check_index, check_tol, CoreError, Result};
use crate::gauge::{infimum_monotone, GaugeResult};
use crate::modular::{LambdaGrid, ModularFamily};
use crate::report::{DiagnosticReport, Witness};
use crate::xreal::XReal;

/// Checks (a) self-distance zero, (b) symmetry, (c) the split-scale triangle
/// inequality `w(λ+μ,x,y) ≤ w(λ,x,z) + w(μ,z,y) + tol` over all point
/// triples and all grid (λ,μ) pairs. Stops at the first violation.
pub fn check_modular_axioms(
    w: &ModularFamily,
    grid: &LambdaGrid,
    tol: f64,
) -> Result<DiagnosticReport> {
    check_tol(tol)?;
    if grid.is_empty() {
        return Err(CoreError::EmptyGrid);
    }
    let n = w.len();
    let tol_x = XReal::finite(tol);

    for &l in grid.values() {
        for i in 0..n {
            let v = w.eval(l, i, i);
            if v > tol_x {
                let witness = Witness::new("self_distance")
                    .points(&[i])
                    .scales(&[l])
                    .sides(v, XReal::ZERO)
                    .note("w(lambda, x, x) must vanish");
                return Ok(DiagnosticReport::fail(
                    "modular_axioms",
                    alloc::format!("self-distance nonzero at point {i}"),
                    witness,
                ));
            }
        }
    }

    for &l in grid.values() {
        for i in 0..n {
            for j in (i + 1)..n {
                let a = w.eval(l, i, j);
                let b = w.eval(l, j, i);
                let symmetric = match (a.is_finite(), b.is_finite()) {
                    (true, true) => crate::math::abs(a.value() - b.value()) <= tol,
                    (false, false) => true,
                    _ => false,
                };
                if !symmetric {
                    let witness = Witness::new("symmetry")
                        .points(&[i, j])
                        .scales(&[l])
                        .sides(a, b)
                        .note("w(lambda, x, y) must equal w(lambda, y, x)");
                    return Ok(DiagnosticReport::fail(
                        "modular_axioms",
                        alloc::format!("asymmetry at pair ({i},{j})"),
                        witness,
                    ));
                }
            }
        }
    }

    for &l in grid.values() {
        for &m in grid.values() {
            for x in 0..n {
                for y in 0..n {
                    let lhs = w.eval(l + m, x, y);
                    for z in 0..n {
                        let rhs = w.eval(l, x, z) + w.eval(m, z, y);
                        let violated = if rhs.is_infinite() {
                            false
                        } else {
                            lhs.value() > rhs.value() + tol
                        };
                        if violated {
                            let witness = Witness::new("triangle")
                                .points(&[x, y, z])
                                .scales(&[l, m])
                                .sides(lhs, rhs)
                                .note("w(l+m,x,y) <= w(l,x,z) + w(m,z,y) fails");
                            return Ok(DiagnosticReport::fail(
                                "modular_axioms",
                                alloc::format!("triangle fails at triple ({x},{y},{z})"),
                                witness,
                            ));
                        }
                    }
                }
            }
        }
    }

    Ok(DiagnosticReport::pass(
        "modular_axioms",
        "all axioms hold on the sampled grid",
    ))
}

/// Validates superadditivity of φ on grid pairs, then checks the φ-convexity
/// inequality over grid (λ,μ) pairs and all triples.
pub fn check_phi_convexity(
    w: &ModularFamily,
    phi: &dyn Fn(f64) -> f64,
    grid: &LambdaGrid,
    tol: f64,
) -> Result<DiagnosticReport> {
    check_tol(tol)?;
    if grid.is_empty() {
        return Err(CoreError::EmptyGrid);
    }
    let z = phi(0.0);
    if z != 0.0 {
        return Err(CoreError::Domain(alloc::format!("phi(0) must be 0, got {z}")));
    }
    // superadditivity on sampled pairs (precondition)
    for &a in grid.values() {
        for &b in grid.values() {
            if phi(a + b) < phi(a) + phi(b) - tol {
                return Err(CoreError::NonSuperadditive { a, b });
            }
        }
    }

    let n = w.len();
    for &l in grid.values() {
        for &m in grid.values() {
            let total = l + m;
            let (wl, wm) = (l / total, m / total);
            let (pl, pm, ps) = (phi(l), phi(m), phi(total));
            if !(pl > 0.0 && pm > 0.0 && ps > 0.0) {
                continue; // φ not yet positive at this scale; inequality undefined as a w-scale
            }
            for x in 0..n {
                for y in 0..n {
                    let lhs = w.eval(ps, x, y);
                    for zp in 0..n {
                        let rhs = w.eval(pl, x, zp).scale(wl) + w.eval(pm, zp, y).scale(wm);
                        let violated = if rhs.is_infinite() {
                            false
                        } else {
                            lhs.value() > rhs.value() + tol
                        };
                        if violated {
                            let witness = Witness::new("phi_convexity")
                                .points(&[x, y, zp])
                                .scales(&[l, m])
                                .sides(lhs, rhs)
                                .note("w at phi(l+m) exceeds the convex combination");
                            return Ok(DiagnosticReport::fail(
                                "phi_convexity",
                                alloc::format!("phi-convexity fails at triple ({x},{y},{zp})"),
                                witness,
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(DiagnosticReport::pass(
        "phi_convexity",
        "phi-convexity holds on the sampled grid",
    ))
}

/// Finite-resolution membership in the modular set: scanning the grid for a
/// scale at which `w` is finite decides membership positively; a negative
/// answer is inconclusive beyond the grid cap.
#[derive(Clone, Copy, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Membership {
    pub member: bool,
    /// Smallest grid scale with finite modular distance to the basepoint.
    pub witness: Option<f64>,
    /// Set when no grid scale qualified: larger scales were not examined.
    pub inconclusive_beyond_cap: bool,
}

pub fn modular_set_membership(
    w: &ModularFamily,
    x: usize,
    basepoint: usize,
    grid: &LambdaGrid,
) -> Result<Membership> {
    check_index(x, w.len())?;
    check_index(basepoint, w.len())?;
    if grid.is_empty() {
        return Err(CoreError::EmptyGrid);
    }
    for &l in grid.values() {
        if w.eval(l, x, basepoint).is_finite() {
            return Ok(Membership { member: true, witness: Some(l), inconclusive_beyond_cap: false });
        }
    }
    Ok(Membership { member: false, witness: None, inconclusive_beyond_cap: true })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    Right,
    Left,
}

/// One-sided regularization estimate with the evaluation trail.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Regularization {
    /// The last evaluation, approximating `w₊₀` (right) or `w₋₀` (left).
    pub value: XReal,
    /// The (scale, value) evaluations, in approach order.
    pub samples: Vec<(f64, XReal)>,
    /// Whether the trail was monotone within tol, as it must be for a
    /// nonincreasing family; false is evidence of non-monotone behavior.
    pub monotone: bool,
}

/// Approximates the one-sided limit of `w(·,i,j)` at λ by evaluating at
/// `λ(1 ± shrink^k)`, k = 1..steps, and returning the last value.
pub fn regularize(
    w: &ModularFamily,
    side: Side,
    lambda: f64,
    i: usize,
    j: usize,
    steps: usize,
    shrink: f64,
    tol: f64,
) -> Result<Regularization> {
    check_index(i, w.len())?;
    check_index(j, w.len())?;
    check_tol(tol)?;
    if steps < 2 {
        return Err(CoreError::Domain("regularization needs at least 2 steps".into()));
    }
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(CoreError::Domain(alloc::format!(
            "shrink must lie in (0,1), got {shrink}"
        )));
    }
    if !(lambda > 0.0) {
        return Err(CoreError::Domain(alloc::format!("lambda must be positive, got {lambda}")));
    }

    let mut samples = Vec::with_capacity(steps);
    let mut offset = shrink;
    for _ in 0..steps {
        let l = match side {
            Side::Right => lambda * (1.0 + offset),
            Side::Left => {
                let l = lambda * (1.0 - offset);
                if l <= 0.0 {
                    return Err(CoreError::Domain(alloc::format!(
                        "left regularization leaves the domain: lambda(1-shrink) = {l}"
                    )));
                }
                l
            }
        };
        samples.push((l, w.eval(l, i, j)));
        offset *= shrink;
    }

    // right side approaches λ from above: values must be nondecreasing in k;
    // left side approaches from below: values must be nonincreasing in k.
    let mut monotone = true;
    for pair in samples.windows(2) {
        let (a, b) = (pair[0].1, pair[1].1);
        let ok = match side {
            Side::Right => match (a.is_finite(), b.is_finite()) {
                (true, true) => b.value() >= a.value() - tol,
                (false, true) => false,
                _ => true,
            },
            Side::Left => match (a.is_finite(), b.is_finite()) {
                (true, true) => b.value() <= a.value() + tol,
                (true, false) => false,
                _ => true,
            },
        };
        if !ok {
            monotone = false;
        }
    }

    Ok(Regularization { value: samples.last().unwrap().1, samples, monotone })
}

/// Right inverse `w⁺_μ = inf{λ : w(λ,i,j) ≤ μ}` or left inverse
/// `w⁻_μ = sup{λ : w(λ,i,j) ≥ μ}`, by monotone bisection on the bracket.
///
/// Requires λ ↦ w(λ,i,j) nonincreasing on the bracket, validated on the grid
/// samples; a detected increase reports the offending pair of scales.
pub fn inverse_gauge(
    w: &ModularFamily,
    side: Side,
    mu: f64,
    i: usize,
    j: usize,
    bracket: &LambdaGrid,
    tol: f64,
) -> Result<GaugeResult> {
    check_index(i, w.len())?;
    check_index(j, w.len())?;
    check_tol(tol)?;
    if !(mu >= 0.0) {
        return Err(CoreError::Domain(alloc::format!("mu must be nonnegative, got {mu}")));
    }

    // monotonicity on the supplied bracket samples
    let mut prev: Option<(f64, XReal)> = None;
    for &l in bracket.values() {
        let v = w.eval(l, i, j);
        if let Some((pl, pv)) = prev {
            let increased = match (pv.is_finite(), v.is_finite()) {
                (true, true) => v.value() > pv.value() * (1.0 + 1e-9) + 1e-300,
                (true, false) => true,
                _ => false,
            };
            if increased {
                return Err(CoreError::NotNonincreasing { lambda_lo: pl, lambda_hi: l, i, j });
            }
        }
        prev = Some((l, v));
    }

    let mu_x = XReal::new(mu).expect("mu validated nonnegative");
    let (floor, cap) = (bracket.floor(), bracket.cap());
    match side {
        Side::Right => {
            infimum_monotone(|l| w.eval(l, i, j) <= mu_x, floor, cap, tol)
        }
        Side::Left => {
            // sup{λ : w(λ) ≥ μ} = inf{λ : w(λ) < μ} for nonincreasing w
            infimum_monotone(|l| w.eval(l, i, j) < mu_x, floor, cap, tol)
        }
    }
}
