//! Balls, entourages, the 2⁻ⁿ metrization, finite-resolution topology
//! comparison, the Δ₂ diagnostic, and the adequacy defect.

use alloc::vec::Vec;

use crate::compactness::SequenceTrace;
use crate::error::{check_index, check_tol, CoreError, Result};
use crate::math;
use crate::matrix::DistanceMatrix;
use crate::modular::ModularFamily;
use crate::report::{DiagnosticReport, Witness};
use crate::xreal::XReal;

/// Modular ball `B_{λ,μ}(x) = {z : w(λ,x,z) < μ}`.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Ball {
    pub center: usize,
    pub lambda: f64,
    pub mu: f64,
    /// Member indices, ascending. Always contains the center.
    pub members: Vec<usize>,
}

pub fn ball(w: &ModularFamily, lambda: f64, mu: f64, center: usize) -> Result<Ball> {
    check_index(center, w.len())?;
    if !(lambda > 0.0 && mu > 0.0) {
        return Err(CoreError::Domain(alloc::format!(
            "ball requires lambda > 0 and mu > 0, got ({lambda}, {mu})"
        )));
    }
    let bound = XReal::finite(mu);
    let members = (0..w.len()).filter(|&z| w.eval(lambda, center, z) < bound).collect();
    Ok(Ball { center, lambda, mu, members })
}

/// Entourage `Vₙ = {(x,y) : w(1/n,x,y) < 1/n}` as a symmetric relation.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Entourage {
    pub n: u32,
    points: usize,
    pairs: Vec<bool>,
}

impl Entourage {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs[i * self.points + j]
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Member pairs with `i <= j`, lexicographic.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.points {
            for j in i..self.points {
                if self.contains(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

pub fn entourage(w: &ModularFamily, n: u32) -> Result<Entourage> {
    if n == 0 {
        return Err(CoreError::Domain("entourage index n must be >= 1".into()));
    }
    let points = w.len();
    let scale = 1.0 / n as f64;
    let bound = XReal::finite(scale);
    let mut pairs = alloc::vec![false; points * points];
    for i in 0..points {
        for j in i..points {
            let inside = w.eval(scale, i, j) < bound;
            pairs[i * points + j] = inside;
            pairs[j * points + i] = inside;
        }
    }
    Ok(Entourage { n, points, pairs })
}

/// Result of the exhaustive `V₂ₙ ∘ V₂ₙ ⊆ Vₙ` search. A failure means the
/// family is not a modular — useful as a secondary axiom probe.
#[derive(Clone, Copy, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CompositionCheck {
    pub n: u32,
    pub holds: bool,
    /// `(x, z, y)` with both legs in `V₂ₙ` but `(x,y)` outside `Vₙ`.
    pub witness: Option<(usize, usize, usize)>,
}

pub fn composition_check(w: &ModularFamily, n: u32) -> Result<CompositionCheck> {
    let coarse = entourage(w, n)?;
    let fine = entourage(w, 2 * n)?;
    let points = w.len();
    for x in 0..points {
        for z in 0..points {
            if !fine.contains(x, z) {
                continue;
            }
            for y in 0..points {
                if fine.contains(z, y) && !coarse.contains(x, y) {
                    return Ok(CompositionCheck { n, holds: false, witness: Some((x, z, y)) });
                }
            }
        }
    }
    Ok(CompositionCheck { n, holds: true, witness: None })
}

/// Output of the entourage metrization `d(x,y) = inf{2⁻ⁿ : (x,y) ∈ Vₙ}`.
///
/// The raw infimum is not itself a metric; the chained matrix applies the
/// shortest-path closure that the textbook metrization construction relies
/// on. Both are reported. Diagonal entries are exactly 0 in both matrices;
/// the computed diagonal value 2^{-n_max} is recorded in `diagonal_floor`.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Metrization {
    pub raw: DistanceMatrix,
    pub chained: DistanceMatrix,
    pub diagonal_floor: f64,
    pub n_max: u32,
    /// Pairs outside every computed Vₙ receive this value (= 2⁰).
    pub sentinel: f64,
}

pub fn metrize_uniformity(w: &ModularFamily, n_max: u32) -> Result<Metrization> {
    if n_max == 0 {
        return Err(CoreError::Domain("metrization needs n_max >= 1".into()));
    }
    let points = w.len();
    // deepest level containing the pair gives the infimum of 2^-n
    let mut best = alloc::vec![0u32; points * points];
    for n in 1..=n_max {
        let e = entourage(w, n)?;
        for i in 0..points {
            for j in (i + 1)..points {
                if e.contains(i, j) {
                    best[i * points + j] = n;
                }
            }
        }
    }
    let raw = DistanceMatrix::from_fn(points, "metrize_raw", |i, j| {
        let n = best[i * points + j];
        Ok(if n == 0 { XReal::ONE } else { XReal::finite(math::pow2_neg(n)) })
    })?;
    let chained = raw.chained("metrize_chained");
    Ok(Metrization {
        raw,
        chained,
        diagonal_floor: math::pow2_neg(n_max),
        n_max,
        sentinel: 1.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RefinementDirection {
    Mutual,
    ARefinesB,
    BRefinesA,
    Neither,
}

/// A (point, target radius) at which no candidate radius from the list
/// produced a ball inside the target ball.
#[derive(Clone, Copy, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RefinementWitness {
    /// Which inclusion failed: true = "A into B", false = "B into A".
    pub a_into_b: bool,
    pub point: usize,
    pub target_radius: f64,
    pub target_index: usize,
    /// Number of candidate radii tried (the whole list).
    pub tried: usize,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RefinementVerdict {
    pub direction: RefinementDirection,
    pub witnesses: Vec<RefinementWitness>,
}

/// Finite-resolution topology comparison: for each point and each target
/// radius, searches the same radii list for a source radius whose ball is
/// contained in the target ball. A "mutual" verdict is evidence at this
/// radii resolution, not proof of topology equality.
pub fn refinement_compare(
    a: &DistanceMatrix,
    b: &DistanceMatrix,
    radii: &[f64],
) -> Result<RefinementVerdict> {
    a.check_square(b)?;
    if radii.is_empty() {
        return Err(CoreError::Domain("refinement comparison needs a nonempty radii list".into()));
    }
    if radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(CoreError::Domain("radii must be positive finite reals".into()));
    }
    let mut rs = radii.to_vec();
    rs.sort_by(f64::total_cmp);

    let refines = |src: &DistanceMatrix,
                   dst: &DistanceMatrix,
                   out: &mut Vec<RefinementWitness>,
                   a_into_b: bool| {
        let mut all = true;
        for x in 0..src.n() {
            for (ti, &rt) in rs.iter().enumerate() {
                let target = dst.ball(x, rt);
                let found = rs.iter().any(|&rc| {
                    let cand = src.ball(x, rc);
                    cand.iter().all(|z| target.binary_search(z).is_ok())
                });
                if !found {
                    all = false;
                    out.push(RefinementWitness {
                        a_into_b,
                        point: x,
                        target_radius: rt,
                        target_index: ti,
                        tried: rs.len(),
                    });
                }
            }
        }
        all
    };

    let mut witnesses = Vec::new();
    let a_into_b = refines(a, b, &mut witnesses, true);
    let b_into_a = refines(b, a, &mut witnesses, false);
    let direction = match (a_into_b, b_into_a) {
        (true, true) => RefinementDirection::Mutual,
        (true, false) => RefinementDirection::ARefinesB,
        (false, true) => RefinementDirection::BRefinesA,
        (false, false) => RefinementDirection::Neither,
    };
    Ok(RefinementVerdict { direction, witnesses })
}

/// Falsification-only Δ₂ probe: for each sequence and each λ whose premise
/// `w(λ,x_k,x) → 0` is numerically satisfied within the horizon, checks that
/// `w(λ/2,x_k,x)` also settles below tol within the horizon. Never concludes
/// that Δ₂ holds.
pub fn delta2_diagnostic(
    w: &ModularFamily,
    sequences: &[SequenceTrace],
    lambda_set: &[f64],
    horizon: usize,
    tol: f64,
) -> Result<DiagnosticReport> {
    check_tol(tol)?;
    if lambda_set.is_empty() {
        return Err(CoreError::Domain("lambda_set must be nonempty".into()));
    }
    if horizon < 3 {
        return Err(CoreError::Domain("delta2 diagnostic needs horizon >= 3".into()));
    }
    if lambda_set.iter().any(|&l| !(l > 0.0)) {
        return Err(CoreError::Domain("lambda_set values must be positive".into()));
    }

    // settles = Some(K) with K the first index whose tail stays <= tol,
    // provided K falls within the horizon; also returns the last bad index.
    let settles = |trace: &SequenceTrace, limit: usize, l: f64| -> (Option<usize>, Option<usize>) {
        let len = trace.points.len();
        let mut last_bad: Option<usize> = None;
        for (k, &p) in trace.points.iter().enumerate() {
            let v = w.eval(l, p, limit);
            if !(v <= XReal::finite(tol)) {
                last_bad = Some(k);
            }
        }
        let first_ok = last_bad.map_or(0, |k| k + 1);
        if first_ok < len && first_ok < horizon {
            (Some(first_ok), last_bad)
        } else {
            (None, last_bad)
        }
    };

    for (si, trace) in sequences.iter().enumerate() {
        let limit = trace.claimed_limit.ok_or_else(|| {
            CoreError::Domain(alloc::format!("sequence {si} carries no claimed limit point"))
        })?;
        check_index(limit, w.len())?;
        for &p in &trace.points {
            check_index(p, w.len())?;
        }
        for &l in lambda_set {
            let (premise, _) = settles(trace, limit, l);
            if premise.is_none() {
                continue; // premise not satisfied at this scale; nothing to test
            }
            let (conclusion, last_bad) = settles(trace, limit, l / 2.0);
            if conclusion.is_none() {
                let k = last_bad.unwrap_or(trace.points.len().saturating_sub(1));
                let witness = Witness::new("delta2")
                    .points(&[trace.points[k], limit])
                    .scales(&[l, l / 2.0])
                    .sides(w.eval(l / 2.0, trace.points[k], limit), XReal::finite(tol))
                    .note(alloc::format!(
                        "sequence {si}: w(lambda,.) settles but w(lambda/2,.) still exceeds tol at k={k}"
                    ));
                return Ok(DiagnosticReport::fail(
                    "delta2",
                    alloc::format!("delta2 violation in sequence {si} at lambda={l}"),
                    witness,
                ));
            }
        }
    }
    Ok(DiagnosticReport::pass(
        "delta2",
        "no violation found within the horizon (not a proof that the condition holds)",
    ))
}

/// `max` over ordered pairs `(x₁,x₂)` of
/// `d(x₁,x₂) − sup_{a∈A} (d(a,x₂) − d(a,x₁))`.
///
/// Nonnegative for any pseudometric; 0 means the anchor set reconstructs
/// every distance at this resolution.
pub fn adequacy_defect(d: &DistanceMatrix, anchors: &[usize]) -> Result<f64> {
    if anchors.is_empty() {
        return Err(CoreError::Domain("anchor set must be nonempty".into()));
    }
    for &a in anchors {
        d.check_point(a)?;
    }
    let n = d.n();
    let mut worst = 0.0f64;
    for x1 in 0..n {
        for x2 in 0..n {
            if x1 == x2 {
                continue;
            }
            // sup over anchors, routing infinities through ordering
            let mut sup: Option<f64> = None; // None = nothing comparable yet
            let mut sup_is_inf = false;
            for &a in anchors {
                let (da2, da1) = (d.get(a, x2), d.get(a, x1));
                match (da2.is_finite(), da1.is_finite()) {
                    (true, true) => {
                        let diff = da2.value() - da1.value();
                        sup = Some(sup.map_or(diff, |s| s.max(diff)));
                    }
                    (false, true) => sup_is_inf = true,
                    _ => {} // difference is -inf or undefined: cannot raise the sup
                }
            }
            let dx = d.get(x1, x2);
            let defect = if sup_is_inf {
                0.0 // an infinite sup dominates every extended distance
            } else {
                match (dx.is_finite(), sup) {
                    (true, Some(s)) => dx.value() - s,
                    (true, None) => 0.0,
                    (false, Some(_)) => f64::INFINITY,
                    (false, None) => 0.0,
                }
            };
            if defect > worst {
                worst = defect;
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::PointSpace;
    use alloc::vec;

    fn scaled(coords: &[f64]) -> ModularFamily {
        ModularFamily::power_scaled(PointSpace::line(coords), 1.0).unwrap()
    }

    #[test]
    fn ball_contains_center_and_respects_strictness() {
        let w = scaled(&[0.0, 2.0]);
        // w(1, x, y) = 2 >= 1: y excluded
        let b = ball(&w, 1.0, 1.0, 0).unwrap();
        assert_eq!(b.members, vec![0]);
        // huge radius captures the whole component
        let b = ball(&w, 1.0, 1e12, 0).unwrap();
        assert_eq!(b.members, vec![0, 1]);
    }

    #[test]
    fn entourage_contains_diagonal_and_excludes_far_pairs() {
        let w = scaled(&[0.0, 0.05]);
        let e = entourage(&w, 10).unwrap();
        assert!(e.contains(0, 0) && e.contains(1, 1));
        // w(0.1, x, y) = 0.5 >= 0.1: excluded
        assert!(!e.contains(0, 1));
    }

    #[test]
    fn composition_holds_for_builders() {
        for w in [
            scaled(&[0.0, 0.3, 1.1]),
            ModularFamily::step(PointSpace::line(&[0.0, 0.3, 1.1])).unwrap(),
            ModularFamily::saturating_metric(PointSpace::line(&[0.0, 0.3, 1.1]), |l| l).unwrap(),
        ] {
            for n in 1..=16 {
                let c = composition_check(&w, n).unwrap();
                assert!(c.holds, "composition fails for {} at n={n}", w.name());
            }
        }
    }

    #[test]
    fn metrize_levels_and_sentinel() {
        // scaled p=1: (x,y) in V_n iff d < 1/n^2; d = 0.07 gives V_1..V_3 only
        let w = scaled(&[0.0, 0.07]);
        let m = metrize_uniformity(&w, 8).unwrap();
        assert_eq!(m.raw.get(0, 1), XReal::finite(0.125));
        assert_eq!(m.raw.get(0, 0), XReal::ZERO);
        assert_eq!(m.diagonal_floor, math::pow2_neg(8));
        // pair beyond V_1: sentinel 1
        let far = scaled(&[0.0, 5.0]);
        let m = metrize_uniformity(&far, 8).unwrap();
        assert_eq!(m.raw.get(0, 1), XReal::ONE);
    }

    #[test]
    fn refinement_identical_matrices_are_mutual() {
        let d = PointSpace::line(&[0.0, 1.0, 2.5]).base_distance().unwrap().clone();
        let v = refinement_compare(&d, &d, &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(v.direction, RefinementDirection::Mutual);
        assert!(v.witnesses.is_empty());
    }

    #[test]
    fn refinement_detects_collapsed_source() {
        // A collapses two B-separable points below the radii floor
        let a = DistanceMatrix::from_fn(3, "a", |i, j| {
            Ok(XReal::finite(if (i, j) == (0, 1) { 1e-6 } else { 1.0 }))
        })
        .unwrap();
        let b = PointSpace::line(&[0.0, 0.4, 1.0]).base_distance().unwrap().clone();
        let v = refinement_compare(&a, &b, &[0.1, 0.3, 0.8]).unwrap();
        // ball_a(0, r) always contains point 1 (distance 1e-6 < 0.1) but
        // ball_b(0, 0.3) does not: A cannot refine B
        assert!(matches!(
            v.direction,
            RefinementDirection::BRefinesA | RefinementDirection::Neither
        ));
        assert!(v.witnesses.iter().any(|w| w.a_into_b && w.point == 0));
    }

    #[test]
    fn delta2_scaled_family_finds_no_violation() {
        // geometric decay deep enough that the premise genuinely fires:
        // w(1, x_k, x) = 0.5^k drops below tol within the horizon, and the
        // halved scale settles right behind it
        let coords: Vec<f64> = (0..25).map(|k| math::powf(0.5, k as f64)).chain([0.0]).collect();
        let limit = coords.len() - 1;
        let w = scaled(&coords);
        let seq = SequenceTrace::with_limit((0..25).collect(), limit).unwrap();
        let r = delta2_diagnostic(&w, &[seq], &[1.0, 0.5], 25, 1e-6).unwrap();
        assert!(r.passed(), "{}", r.summary);

        // shortened horizon starves the conclusion and must NOT count as a
        // violation when the premise itself stops firing
        let seq = SequenceTrace::with_limit((0..10).collect(), limit).unwrap();
        let r = delta2_diagnostic(&w, &[seq], &[1.0], 10, 1e-6).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn delta2_constant_sequence_passes() {
        let w = scaled(&[0.0, 1.0]);
        let seq = SequenceTrace::with_limit(vec![0; 8], 0).unwrap();
        assert!(delta2_diagnostic(&w, &[seq], &[1.0], 5, 1e-9).unwrap().passed());
    }

    #[test]
    fn delta2_step_family_yields_witness() {
        // d(x_k, x) = 1 - 1/k: premise holds at lambda = 1, fails at 1/2
        let coords: Vec<f64> = (1..=8).map(|k| 1.0 - 1.0 / k as f64).chain([0.0]).collect();
        let limit = coords.len() - 1;
        let w = ModularFamily::step(PointSpace::line(&coords)).unwrap();
        let seq = SequenceTrace::with_limit((0..8).collect(), limit).unwrap();
        let r = delta2_diagnostic(&w, &[seq], &[1.0], 6, 1e-9).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses[0].kind, "delta2");
    }

    #[test]
    fn adequacy_full_anchor_set_is_exact_zero() {
        let d = PointSpace::line(&[0.0, 0.7, 2.0, 3.1]).base_distance().unwrap().clone();
        let all: Vec<usize> = (0..4).collect();
        assert_eq!(adequacy_defect(&d, &all).unwrap(), 0.0);
    }

    #[test]
    fn adequacy_oracle_values() {
        // exhaustive-oracle values; the independent oracle lives in the
        // integration tests and froze these numbers
        let two = PointSpace::line(&[0.0, 0.6]).base_distance().unwrap().clone();
        let v = adequacy_defect(&two, &[0]).unwrap();
        assert!((v - 1.2).abs() < 1e-12, "two-point single anchor gives 2d, got {v}");

        let eq = DistanceMatrix::from_fn(3, "equilateral", |_, _| Ok(XReal::ONE)).unwrap();
        let v = adequacy_defect(&eq, &[0]).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "equilateral single anchor gives 2, got {v}");
    }

    #[test]
    fn adequacy_rejects_empty_anchor_set() {
        let d = PointSpace::line(&[0.0, 1.0]).base_distance().unwrap().clone();
        assert!(adequacy_defect(&d, &[]).is_err());
    }
}
