//! Topology-layer properties: ball monotonicity, entourage composition,
//! metrization, refinement behavior, fuzzy correspondence, adequacy.

mod common;

use modmet_core::fuzzy::{fuzzy_ball, fuzzy_refinement};
use modmet_core::gauge::{d0_matrix, Bracket};
use modmet_core::modular::ModularFamily;
use modmet_core::topology::{
    adequacy_defect, ball, composition_check, metrize_uniformity, refinement_compare,
    RefinementDirection,
};
use modmet_core::{DistanceMatrix, PointSpace, XReal};
use rand::Rng;

#[test]
fn ball_monotone_in_radius_and_scale() {
    let mut rng = common::rng(13);
    let space = common::random_metric_space(&mut rng, 6, 3.0);
    let w = ModularFamily::power_scaled(space, 1.0).unwrap();
    for x in 0..w.len() {
        for &l in &[0.2, 1.0, 5.0] {
            let mut prev: Option<Vec<usize>> = None;
            for &mu in &[0.05, 0.2, 1.0, 4.0] {
                let b = ball(&w, l, mu, x).unwrap().members;
                if let Some(p) = &prev {
                    assert!(p.iter().all(|z| b.contains(z)), "radius monotonicity");
                }
                prev = Some(b);
            }
        }
        // nonincreasing families grow balls as the scale grows
        for &mu in &[0.3, 1.0] {
            let small = ball(&w, 0.2, mu, x).unwrap().members;
            let large = ball(&w, 3.0, mu, x).unwrap().members;
            assert!(small.iter().all(|z| large.contains(z)), "scale monotonicity");
        }
    }
}

#[test]
fn entourage_composition_on_builders_over_random_spaces() {
    let mut rng = common::rng(17);
    for _ in 0..5 {
        let space = common::random_metric_space(&mut rng, 6, 2.0);
        let families = vec![
            ModularFamily::power_scaled(space.clone(), 1.0).unwrap(),
            ModularFamily::power_scaled(space.clone(), 2.0).unwrap(),
            ModularFamily::saturating_metric(space.clone(), |l| l).unwrap(),
            ModularFamily::step(space).unwrap(),
        ];
        for w in families {
            for n in 1..=16 {
                let c = composition_check(&w, n).unwrap();
                assert!(c.holds, "{} fails composition at n={n}: {:?}", w.name(), c.witness);
            }
        }
    }
}

#[test]
fn metrization_chained_matrix_is_pseudometric() {
    let mut rng = common::rng(19);
    for _ in 0..5 {
        let space = common::random_metric_space(&mut rng, 6, 2.0);
        let w = ModularFamily::power_scaled(space, 1.0).unwrap();
        let m = metrize_uniformity(&w, 12).unwrap();
        assert!(m.chained.is_pseudometric(1e-12));
        // chaining never increases entries
        for i in 0..m.raw.n() {
            for j in 0..m.raw.n() {
                assert!(m.chained.get(i, j) <= m.raw.get(i, j));
            }
        }
    }
}

#[test]
fn refinement_reflexive_and_scale_invariant() {
    let mut rng = common::rng(29);
    for _ in 0..5 {
        let space = common::random_metric_space(&mut rng, 6, 2.0);
        let d = space.base_distance().unwrap().clone();
        let radii: Vec<f64> = (0..8).map(|k| 0.02 * 1.9f64.powi(k)).collect();
        let v = refinement_compare(&d, &d, &radii).unwrap();
        assert_eq!(v.direction, RefinementDirection::Mutual);

        // scaling both matrices and the radii by the same constant preserves
        // the verdict
        let w = ModularFamily::power_scaled(space, 1.0).unwrap();
        let a = metrize_uniformity(&w, 16).unwrap().chained;
        let before = refinement_compare(&a, &d, &radii).unwrap();
        let c = 3.7;
        let scaled_radii: Vec<f64> = radii.iter().map(|r| r * c).collect();
        let after = refinement_compare(&a.scaled(c), &d.scaled(c), &scaled_radii).unwrap();
        assert_eq!(before.direction, after.direction);
    }
}

#[test]
fn step_modular_metrization_fails_to_refine_d0() {
    // points near the basepoint at distances whose entourage levels collapse
    // below the radii floor, while d0 = d keeps them separated
    let coords = [0.0, 0.04, 0.05, 0.06, 1.0];
    let space = PointSpace::line(&coords);
    let w = ModularFamily::step(space).unwrap();
    let metrized = metrize_uniformity(&w, 24).unwrap().chained;
    let d0m = d0_matrix(&w, &Bracket::default()).unwrap();
    let radii: Vec<f64> = (0..12).map(|k| 0.01 * 1.62f64.powi(k)).collect();
    let v = refinement_compare(&metrized, &d0m, &radii).unwrap();
    assert_ne!(v.direction, RefinementDirection::Mutual, "{:?}", v.direction);
    assert!(v.witnesses.iter().any(|w| w.a_into_b));
}

#[test]
fn fuzzy_ball_identity_exact_on_random_spaces() {
    let mut rng = common::rng(31);
    for _ in 0..6 {
        let space = common::random_metric_space(&mut rng, 6, 4.0);
        let d = space.base_distance().unwrap().clone();
        for _ in 0..4 {
            let r = rng.random_range(0.05..0.95);
            let t = rng.random_range(0.1..5.0);
            let x = rng.random_range(0..6);
            let fb = fuzzy_ball(&d, x, r, t).unwrap();
            let mb = d.ball(x, t * r / (1.0 - r));
            assert_eq!(fb, mb, "x={x} r={r} t={t}");
        }
    }
}

#[test]
fn fuzzy_refinement_mutual_on_random_spaces() {
    let mut rng = common::rng(33);
    for _ in 0..5 {
        let space = common::random_metric_space(&mut rng, 6, 4.0);
        let d = space.base_distance().unwrap().clone();
        let v = fuzzy_refinement(
            &d,
            &[0.25, 1.0, 4.0],
            &[0.01, 0.3, 0.7],
            &[0.005, 0.05, 0.5, 2.0, 8.0],
        )
        .unwrap();
        assert_eq!(v.direction, RefinementDirection::Mutual, "{:?}", v.witnesses);
    }
}

/// Independent brute-force oracle for the adequacy defect.
fn adequacy_oracle(d: &DistanceMatrix, anchors: &[usize]) -> f64 {
    let n = d.n();
    let mut worst: f64 = 0.0;
    for x1 in 0..n {
        for x2 in 0..n {
            if x1 == x2 {
                continue;
            }
            let sup = anchors
                .iter()
                .map(|&a| d.get(a, x2).value() - d.get(a, x1).value())
                .fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max(d.get(x1, x2).value() - sup);
        }
    }
    worst
}

#[test]
fn adequacy_defect_is_zero_for_the_full_space() {
    let mut rng = common::rng(43);
    for _ in 0..6 {
        let n = rng.random_range(3..8);
        let space = common::random_metric_space(&mut rng, n, 5.0);
        let d = space.base_distance().unwrap();
        let all: Vec<usize> = (0..n).collect();
        let v = adequacy_defect(d, &all).unwrap();
        assert!(v <= 1e-12, "defect {v}");
    }
}

#[test]
fn adequacy_defect_matches_brute_force_oracle() {
    let mut rng = common::rng(47);
    for _ in 0..6 {
        let n = rng.random_range(3..7);
        let space = common::random_metric_space(&mut rng, n, 5.0);
        let d = space.base_distance().unwrap();
        let k = rng.random_range(1..=n);
        let anchors: Vec<usize> = (0..k).collect();
        let got = adequacy_defect(d, &anchors).unwrap();
        let want = adequacy_oracle(d, &anchors);
        assert_eq!(got, want, "anchors {anchors:?}");
    }
    // the frozen instances: single-anchor two-point and equilateral cases
    let two = PointSpace::line(&[0.0, 0.6]);
    assert_eq!(
        adequacy_defect(two.base_distance().unwrap(), &[0]).unwrap(),
        adequacy_oracle(two.base_distance().unwrap(), &[0]),
    );
    let eq = DistanceMatrix::from_fn(3, "equilateral", |_, _| Ok(XReal::ONE)).unwrap();
    assert_eq!(adequacy_defect(&eq, &[0]).unwrap(), adequacy_oracle(&eq, &[0]));
    assert_eq!(adequacy_oracle(&eq, &[0]), 2.0);
}
