//! Builder invariants: every builder output satisfies the modular axioms on
//! random metric spaces, with exact diagonals and symmetry.

mod common;

use modmet_core::axioms::check_modular_axioms;
use modmet_core::modular::{LambdaGrid, ModularFamily};
use modmet_core::orlicz::{induced_modular, DiscreteMeasureSpace, Integrand};
use modmet_core::XReal;
use rand::Rng;

fn builders_for(space: modmet_core::PointSpace, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<ModularFamily> {
    let p = rng.random_range(0.5..3.0);
    let q = rng.random_range(0.5..2.0);
    vec![
        ModularFamily::power_scaled(space.clone(), p).unwrap(),
        ModularFamily::saturating_metric(space.clone(), move |l| l.powf(q)).unwrap(),
        ModularFamily::step(space).unwrap(),
    ]
}

#[test]
fn builders_pass_axioms_on_random_metric_spaces() {
    let mut rng = common::rng(5);
    let grid = LambdaGrid::geometric(0.1, 10.0, 9).unwrap();
    for _ in 0..6 {
        let n = rng.random_range(3..6);
        let space = common::random_metric_space(&mut rng, n, 4.0);
        for w in builders_for(space, &mut rng) {
            let r = check_modular_axioms(&w, &grid, 1e-9).unwrap();
            assert!(r.passed(), "{} fails: {} {:?}", w.name(), r.summary, r.witnesses);
        }
    }
}

#[test]
fn exponential_family_passes_axioms() {
    let mut rng = common::rng(6);
    let times: Vec<f64> = vec![0.0, 0.5, 1.0, 2.0];
    let trajectories: Vec<Vec<f64>> = (0..4)
        .map(|_| times.iter().map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let w = ModularFamily::exponential_family(times, trajectories).unwrap();
    let grid = LambdaGrid::geometric(0.1, 10.0, 9).unwrap();
    let r = check_modular_axioms(&w, &grid, 1e-9).unwrap();
    assert!(r.passed(), "{} {:?}", r.summary, r.witnesses);
}

#[test]
fn orlicz_induced_family_passes_axioms() {
    let mut rng = common::rng(7);
    let cells = 5;
    let omega = DiscreteMeasureSpace::from_masses(vec![0.2; cells]).unwrap();
    for phi in [Integrand::lp(1.0).unwrap(), Integrand::lp(2.0).unwrap(), Integrand::exp_squared()] {
        let vectors: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..cells).map(|_| rng.random_range(-1.5..1.5)).collect())
            .collect();
        let w = induced_modular(&phi, &omega, vectors).unwrap();
        let grid = LambdaGrid::geometric(0.5, 8.0, 7).unwrap();
        let r = check_modular_axioms(&w, &grid, 1e-9).unwrap();
        assert!(r.passed(), "{}: {} {:?}", phi.name(), r.summary, r.witnesses);
    }
}

#[test]
fn builder_outputs_have_exact_diagonal_and_symmetry() {
    let mut rng = common::rng(8);
    let space = common::random_metric_space(&mut rng, 5, 3.0);
    for w in builders_for(space, &mut rng) {
        for &l in &[0.037, 1.0, 42.0] {
            for i in 0..w.len() {
                assert_eq!(w.eval(l, i, i), XReal::ZERO, "{} diagonal", w.name());
                for j in 0..w.len() {
                    assert_eq!(w.eval(l, i, j), w.eval(l, j, i), "{} symmetry", w.name());
                }
            }
        }
    }
}

#[test]
fn scaled_families_are_nonincreasing_in_lambda() {
    let mut rng = common::rng(9);
    let space = common::random_metric_space(&mut rng, 4, 6.0);
    for p in [0.0, 0.7, 1.0, 2.5] {
        let w = ModularFamily::power_scaled(space.clone(), p).unwrap();
        for i in 0..w.len() {
            for j in 0..w.len() {
                let mut prev = XReal::INFINITY;
                for k in 0..40 {
                    let l = 1e-3 * 1.4f64.powi(k);
                    let v = w.eval(l, i, j);
                    assert!(v <= prev, "p={p} increases at lambda={l}");
                    prev = v;
                }
            }
        }
    }
}
