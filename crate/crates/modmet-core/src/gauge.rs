//! Monotone-infimum engine and the induced gauges.
//!
//! Every gauge here is an infimum `inf{λ > 0 : pred(λ)}` for a predicate that
//! is monotone nondecreasing in λ (false below the crossing, true above).
//! The shared engine bisects inside a bracket `[floor, cap]`, optionally
//! doubling the cap when the crossing lies beyond it.

use crate::error::{check_tol, CoreError, Result};
use crate::math;
use crate::matrix::DistanceMatrix;
use crate::modular::{LambdaGrid, ModularFamily};
use crate::xreal::XReal;

/// Search bracket and exit tolerance for gauge evaluations.
///
/// Defaults cover laptop-scale inputs with double-precision headroom.
#[derive(Clone, Copy, Debug)]
pub struct Bracket {
    pub floor: f64,
    pub cap: f64,
    pub tol: f64,
}

impl Default for Bracket {
    fn default() -> Self {
        Bracket { floor: 1e-12, cap: 1e12, tol: 1e-10 }
    }
}

impl Bracket {
    pub fn new(floor: f64, cap: f64, tol: f64) -> Result<Bracket> {
        if !(floor > 0.0 && cap > floor && cap.is_finite()) {
            return Err(CoreError::Domain(alloc::format!(
                "bracket requires 0 < floor < cap < inf, got [{floor}, {cap}]"
            )));
        }
        check_tol(tol)?;
        Ok(Bracket { floor, cap, tol })
    }

    pub fn with_tol(mut self, tol: f64) -> Bracket {
        self.tol = tol;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GaugeFlags {
    /// The predicate already held at the bracket floor.
    pub at_floor: bool,
    /// The predicate still failed at the (possibly expanded) cap.
    pub at_cap: bool,
    /// The reported value is exact, not a bisection bracket midpoint.
    pub exact: bool,
}

/// Outcome of a gauge evaluation: the value plus the bracket it was pinned in.
#[derive(Clone, Copy, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GaugeResult {
    pub value: XReal,
    pub bracket_low: f64,
    pub bracket_high: f64,
    pub iterations: u32,
    pub flags: GaugeFlags,
}

impl GaugeResult {
    fn exact_zero() -> GaugeResult {
        GaugeResult {
            value: XReal::ZERO,
            bracket_low: 0.0,
            bracket_high: 0.0,
            iterations: 0,
            flags: GaugeFlags { at_floor: true, at_cap: false, exact: true },
        }
    }

    fn at_floor(floor: f64) -> GaugeResult {
        GaugeResult {
            value: XReal::finite(floor),
            bracket_low: floor,
            bracket_high: floor,
            iterations: 0,
            flags: GaugeFlags { at_floor: true, at_cap: false, exact: false },
        }
    }

    fn at_cap(cap: f64) -> GaugeResult {
        GaugeResult {
            value: XReal::INFINITY,
            bracket_low: cap,
            bracket_high: f64::INFINITY,
            iterations: 0,
            flags: GaugeFlags { at_floor: false, at_cap: true, exact: false },
        }
    }
}

/// Cap doublings before an out-of-bracket infimum is reported as `+inf`.
pub const MAX_CAP_DOUBLINGS: u32 = 60;

/// `inf{λ ∈ [floor, cap] : pred(λ)}` for a monotone nondecreasing predicate,
/// to absolute tolerance `tol`.
///
/// Monotonicity is spot-validated at three interior points; a true-then-false
/// flip is reported with both witnessing scales. `pred(cap)` false yields
/// `+inf` with the `at_cap` flag; `pred(floor)` true yields `floor` with the
/// `at_floor` flag.
pub fn infimum_monotone<F: FnMut(f64) -> bool>(
    mut pred: F,
    floor: f64,
    cap: f64,
    tol: f64,
) -> Result<GaugeResult> {
    engine(&mut pred, floor, cap, tol, 0)
}

/// As [`infimum_monotone`], but doubles the cap up to `max_doublings` times
/// before giving up when the crossing lies beyond it.
pub fn infimum_monotone_expanding<F: FnMut(f64) -> bool>(
    mut pred: F,
    floor: f64,
    cap: f64,
    tol: f64,
    max_doublings: u32,
) -> Result<GaugeResult> {
    engine(&mut pred, floor, cap, tol, max_doublings)
}

fn engine<F: FnMut(f64) -> bool>(
    pred: &mut F,
    floor: f64,
    cap: f64,
    tol: f64,
    max_doublings: u32,
) -> Result<GaugeResult> {
    if !(floor > 0.0 && cap > floor && cap.is_finite()) {
        return Err(CoreError::Domain(alloc::format!(
            "bracket requires 0 < floor < cap < inf, got [{floor}, {cap}]"
        )));
    }
    check_tol(tol)?;

    // floor, three interior probes, cap
    let r = math::powf(cap / floor, 0.25);
    let probes = [floor, floor * r, floor * r * r, floor * r * r * r, cap];
    let mut states = [false; 5];
    for (k, &l) in probes.iter().enumerate() {
        states[k] = pred(l);
    }
    for a in 0..5 {
        for b in (a + 1)..5 {
            if states[a] && !states[b] {
                return Err(CoreError::NonMonotonePredicate {
                    lambda_true: probes[a],
                    lambda_false: probes[b],
                });
            }
        }
    }

    if states[0] {
        return Ok(GaugeResult::at_floor(floor));
    }

    let (mut lo, mut hi);
    if states[4] {
        // bracket between the last false probe and the first true probe
        let k = states.iter().position(|&s| s).unwrap();
        lo = probes[k - 1];
        hi = probes[k];
    } else {
        // crossing beyond cap: expand or give up
        let mut c = cap;
        let mut found = None;
        for _ in 0..max_doublings {
            let next = c * 2.0;
            if pred(next) {
                found = Some((c, next));
                break;
            }
            c = next;
        }
        match found {
            Some((l, h)) => {
                lo = l;
                hi = h;
            }
            None => return Ok(GaugeResult::at_cap(c)),
        }
    }

    let mut iterations = 0u32;
    while hi - lo > tol && iterations < 500 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket narrower than representable at this magnitude
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }

    Ok(GaugeResult {
        value: XReal::finite(0.5 * (lo + hi)),
        bracket_low: lo,
        bracket_high: hi,
        iterations,
        flags: GaugeFlags::default(),
    })
}

/// Samples λ ↦ w(λ,i,j) at nine log-spaced scales and rejects an increase
/// beyond relative rounding slack.
pub fn validate_nonincreasing(w: &ModularFamily, i: usize, j: usize, floor: f64, cap: f64) -> Result<()> {
    let samples = math::log_spaced(floor, cap, 9);
    let mut prev: Option<(f64, XReal)> = None;
    for &l in &samples {
        let v = w.eval(l, i, j);
        if let Some((pl, pv)) = prev {
            let increased = match (pv.is_finite(), v.is_finite()) {
                (true, true) => v.value() > pv.value() * (1.0 + 1e-9) + 1e-300,
                (false, true) => false,  // inf -> finite is a decrease
                (true, false) => true,   // finite -> inf is an increase
                (false, false) => false,
            };
            if increased {
                return Err(CoreError::NotNonincreasing { lambda_lo: pl, lambda_hi: l, i, j });
            }
        }
        prev = Some((l, v));
    }
    Ok(())
}

/// `d⁰(i,j) = inf{λ : w(λ,i,j) ≤ λ}`.
///
/// When `w(floor,i,j) = 0` the infimum lies in `[0, floor]` and is reported
/// as an exact 0 rather than a spurious floor-valued distance.
pub fn d0(w: &ModularFamily, i: usize, j: usize, br: &Bracket) -> Result<GaugeResult> {
    validate_nonincreasing(w, i, j, br.floor, br.cap)?;
    if w.eval(br.floor, i, j).is_zero() {
        return Ok(GaugeResult::exact_zero());
    }
    infimum_monotone_expanding(
        |l| w.eval(l, i, j) <= XReal::finite(l),
        br.floor,
        br.cap,
        br.tol,
        MAX_CAP_DOUBLINGS,
    )
}

/// `d*(i,j) = inf{λ : w(λ,i,j) ≤ 1}`.
pub fn dstar(w: &ModularFamily, i: usize, j: usize, br: &Bracket) -> Result<GaugeResult> {
    validate_nonincreasing(w, i, j, br.floor, br.cap)?;
    if w.eval(br.floor, i, j).is_zero() {
        return Ok(GaugeResult::exact_zero());
    }
    infimum_monotone_expanding(
        |l| w.eval(l, i, j) <= XReal::ONE,
        br.floor,
        br.cap,
        br.tol,
        MAX_CAP_DOUBLINGS,
    )
}

fn validate_phi(phi: &dyn Fn(f64) -> f64) -> Result<()> {
    let z = phi(0.0);
    if z != 0.0 {
        return Err(CoreError::Domain(alloc::format!("phi(0) must be 0, got {z}")));
    }
    let samples = math::log_spaced(1e-9, 1e9, 19);
    let mut prev: Option<(f64, f64)> = None;
    for &t in &samples {
        let v = phi(t);
        if v.is_nan() || v < 0.0 {
            return Err(CoreError::Domain(alloc::format!("phi({t}) = {v} outside [0, inf]")));
        }
        if let Some((pt, pv)) = prev {
            if v < pv * (1.0 - 1e-12) {
                return Err(CoreError::Domain(alloc::format!(
                    "phi decreases between {pt} and {t}"
                )));
            }
        }
        prev = Some((t, v));
    }
    Ok(())
}

/// `d⁰_φ(i,j) = inf{λ : w(λ,i,j) ≤ φ(λ)}` for nondecreasing φ with φ(0)=0.
pub fn d0_phi(
    w: &ModularFamily,
    phi: &(dyn Fn(f64) -> f64 + Sync),
    i: usize,
    j: usize,
    br: &Bracket,
) -> Result<GaugeResult> {
    validate_phi(phi)?;
    validate_nonincreasing(w, i, j, br.floor, br.cap)?;
    if w.eval(br.floor, i, j).is_zero() {
        return Ok(GaugeResult::exact_zero());
    }
    infimum_monotone_expanding(
        |l| match XReal::new(phi(l)) {
            Some(bound) => w.eval(l, i, j) <= bound,
            None => false,
        },
        br.floor,
        br.cap,
        br.tol,
        MAX_CAP_DOUBLINGS,
    )
}

/// `inf{t >= 0 : f(t) >= y}` for nondecreasing `f`, by expanding bisection.
/// Returns `+inf` if no bracketing value is found.
pub fn invert_monotone(f: &dyn Fn(f64) -> f64, y: f64, tol: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y.is_infinite() {
        return f64::INFINITY;
    }
    let mut hi = 1.0f64;
    let mut tries = 0u32;
    while f(hi) < y {
        hi *= 2.0;
        tries += 1;
        if tries > 600 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0f64;
    let mut iter = 0u32;
    while hi - lo > tol * hi.max(1.0) && iter < 300 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= y {
            hi = mid;
        } else {
            lo = mid;
        }
        iter += 1;
    }
    0.5 * (lo + hi)
}

/// `d¹_φ(i,j) = inf_λ (λ + φ⁻¹(w(λ,i,j)))`, minimized over the grid with one
/// golden-section refinement pass around the grid argmin. The refinement is
/// local: the objective is unimodal for convex w and convex φ⁻¹ but not in
/// general.
pub fn d1_phi(
    w: &ModularFamily,
    phi: &(dyn Fn(f64) -> f64 + Sync),
    i: usize,
    j: usize,
    grid: &LambdaGrid,
    br: &Bracket,
) -> Result<GaugeResult> {
    validate_phi(phi)?;
    let inv_tol = (br.tol * 1e-2).max(1e-14);
    let objective = |l: f64| -> f64 {
        let wv = w.eval(l, i, j);
        if wv.is_infinite() {
            f64::INFINITY
        } else {
            l + invert_monotone(phi, wv.value(), inv_tol)
        }
    };

    let mut best_idx = 0usize;
    let mut best_val = f64::INFINITY;
    for (k, &l) in grid.values().iter().enumerate() {
        let v = objective(l);
        if v < best_val {
            best_val = v;
            best_idx = k;
        }
    }
    if best_val.is_infinite() {
        return Ok(GaugeResult {
            value: XReal::INFINITY,
            bracket_low: grid.floor(),
            bracket_high: grid.cap(),
            iterations: 0,
            flags: GaugeFlags { at_floor: false, at_cap: true, exact: false },
        });
    }

    let vs = grid.values();
    let mut lo = if best_idx > 0 { vs[best_idx - 1] } else { vs[0] * 0.5 };
    let mut hi = if best_idx + 1 < vs.len() { vs[best_idx + 1] } else { vs[vs.len() - 1] * 2.0 };

    // golden-section pass
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    let mut iterations = 0u32;
    while hi - lo > br.tol * hi.max(1.0) && iterations < 200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = objective(x2);
        }
        iterations += 1;
    }
    let refined = f1.min(f2).min(best_val);
    Ok(GaugeResult {
        value: XReal::finite(refined),
        bracket_low: lo,
        bracket_high: hi,
        iterations,
        flags: GaugeFlags::default(),
    })
}

/// Luxemburg gauge `inf{λ > 0 : ρ(u/λ) ≤ 1}` for a modular functional `ρ`
/// that is nonincreasing along λ ↦ ρ(u/λ) (validated on samples).
pub fn luxemburg(
    rho: &dyn Fn(&[f64]) -> XReal,
    u: &[f64],
    br: &Bracket,
) -> Result<GaugeResult> {
    let mut buf = alloc::vec![0.0f64; u.len()];
    let mut rho_at = move |l: f64| -> XReal {
        for (b, &v) in buf.iter_mut().zip(u.iter()) {
            *b = v / l;
        }
        rho(&buf)
    };

    let samples = math::log_spaced(br.floor, br.cap, 9);
    let mut prev: Option<(f64, XReal)> = None;
    for &l in &samples {
        let v = rho_at(l);
        if let Some((pl, pv)) = prev {
            let increased = match (pv.is_finite(), v.is_finite()) {
                (true, true) => v.value() > pv.value() * (1.0 + 1e-9) + 1e-300,
                (true, false) => true,
                _ => false,
            };
            if increased {
                return Err(CoreError::Domain(alloc::format!(
                    "rho(u/lambda) increases between lambda={pl} and lambda={l}"
                )));
            }
        }
        prev = Some((l, v));
    }

    if rho_at(br.floor).is_zero() {
        return Ok(GaugeResult::exact_zero());
    }
    infimum_monotone_expanding(
        |l| rho_at(l) <= XReal::ONE,
        br.floor,
        br.cap,
        br.tol,
        MAX_CAP_DOUBLINGS,
    )
}

/// Full gauge matrix via a per-pair evaluator; engine errors are annotated
/// with the offending pair.
pub fn gauge_matrix(
    n: usize,
    provenance: &str,
    mut pair: impl FnMut(usize, usize) -> Result<GaugeResult>,
) -> Result<DistanceMatrix> {
    DistanceMatrix::from_fn(n, provenance, |i, j| match pair(i, j) {
        Ok(g) => Ok(g.value),
        Err(e) => Err(CoreError::AtPair { i, j, source: alloc::boxed::Box::new(e) }),
    })
}

/// `d⁰` on every pair.
pub fn d0_matrix(w: &ModularFamily, br: &Bracket) -> Result<DistanceMatrix> {
    gauge_matrix(w.len(), "d0", |i, j| d0(w, i, j, br))
}

/// `d*` on every pair.
pub fn dstar_matrix(w: &ModularFamily, br: &Bracket) -> Result<DistanceMatrix> {
    gauge_matrix(w.len(), "dstar", |i, j| dstar(w, i, j, br))
}

pub fn d0_phi_matrix(
    w: &ModularFamily,
    phi: &(dyn Fn(f64) -> f64 + Sync),
    br: &Bracket,
) -> Result<DistanceMatrix> {
    gauge_matrix(w.len(), "d0_phi", |i, j| d0_phi(w, phi, i, j, br))
}

pub fn d1_phi_matrix(
    w: &ModularFamily,
    phi: &(dyn Fn(f64) -> f64 + Sync),
    grid: &LambdaGrid,
    br: &Bracket,
) -> Result<DistanceMatrix> {
    gauge_matrix(w.len(), "d1_phi", |i, j| d1_phi(w, phi, i, j, grid, br))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::Claims;
    use crate::space::PointSpace;

    fn two_points(d: f64) -> PointSpace {
        PointSpace::line(&[0.0, d])
    }

    #[test]
    fn engine_solves_quadratic_crossing() {
        // 4/l <= l crosses at l = 2 (solve l^2 >= 4)
        let g = infimum_monotone(|l| 4.0 / l <= l, 1e-6, 1e6, 1e-10).unwrap();
        assert!((g.value.value() - 2.0).abs() < 1e-9);
        assert!(g.bracket_high - g.bracket_low <= 1e-10);
    }

    #[test]
    fn engine_constant_predicates() {
        let t = infimum_monotone(|_| true, 1e-6, 1e6, 1e-10).unwrap();
        assert!(t.flags.at_floor);
        assert_eq!(t.value, XReal::finite(1e-6));
        let f = infimum_monotone(|_| false, 1e-6, 1e6, 1e-10).unwrap();
        assert!(f.flags.at_cap);
        assert_eq!(f.value, XReal::INFINITY);
    }

    #[test]
    fn engine_rejects_non_monotone_predicate() {
        // true on a middle window only
        let err = infimum_monotone(|l| (0.1..10.0).contains(&l), 1e-6, 1e6, 1e-10).unwrap_err();
        assert!(matches!(err, CoreError::NonMonotonePredicate { .. }));
    }

    #[test]
    fn engine_expands_past_the_cap() {
        let g = infimum_monotone_expanding(|l| l >= 5000.0, 1e-6, 1e3, 1e-7, 60).unwrap();
        assert!((g.value.value() - 5000.0).abs() < 1e-6);
    }

    #[test]
    fn d0_scaled_inverse_law() {
        // w = 16/lambda: inf{l : 16/l <= l} = 4, the closed form d^(1/(p+1)) at p=1
        let w = ModularFamily::power_scaled(two_points(16.0), 1.0).unwrap();
        let g = d0(&w, 0, 1, &Bracket::default()).unwrap();
        assert!((g.value.value() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn d0_diagonal_is_exactly_zero() {
        let w = ModularFamily::power_scaled(two_points(16.0), 1.0).unwrap();
        let g = d0(&w, 0, 0, &Bracket::default()).unwrap();
        assert_eq!(g.value, XReal::ZERO);
        assert!(g.flags.exact && g.flags.at_floor);
    }

    #[test]
    fn d0_saturating_golden_section_value() {
        // inf{l : 1/(l+1) <= l} solves l^2 + l - 1 = 0: (sqrt(5)-1)/2
        let w = ModularFamily::saturating_metric(two_points(1.0), |l| l).unwrap();
        let g = d0(&w, 0, 1, &Bracket::default()).unwrap();
        let golden = (crate::math::sqrt(5.0) - 1.0) / 2.0;
        assert!((g.value.value() - golden).abs() < 1e-9, "got {}", g.value);
    }

    #[test]
    fn dstar_scaled_inverse_law() {
        // 16/l <= 1 at l = 16
        let w = ModularFamily::power_scaled(two_points(16.0), 1.0).unwrap();
        let g = dstar(&w, 0, 1, &Bracket::default()).unwrap();
        assert!((g.value.value() - 16.0).abs() < 1e-8);
    }

    #[test]
    fn d0_phi_identity_equals_d0() {
        let w = ModularFamily::power_scaled(two_points(7.3), 1.0).unwrap();
        let a = d0(&w, 0, 1, &Bracket::default()).unwrap();
        let b = d0_phi(&w, &|t| t, 0, 1, &Bracket::default()).unwrap();
        assert!((a.value.value() - b.value.value()).abs() < 1e-9);
    }

    #[test]
    fn d1_phi_identity_minimizes_lambda_plus_w() {
        // min_l (l + 4/l) = 4 at l = 2
        let w = ModularFamily::power_scaled(two_points(4.0), 1.0).unwrap();
        let grid = LambdaGrid::per_decade(1e-6, 1e6, 48).unwrap();
        let g = d1_phi(&w, &|t| t, 0, 1, &grid, &Bracket::default()).unwrap();
        assert!((g.value.value() - 4.0).abs() < 1e-8, "got {}", g.value);
    }

    #[test]
    fn phi_sandwich_on_the_worked_example() {
        // d0_phi = 2, d1_phi = 4 = 2 * d0_phi
        let w = ModularFamily::power_scaled(two_points(4.0), 1.0).unwrap();
        let grid = LambdaGrid::per_decade(1e-6, 1e6, 48).unwrap();
        let lo = d0_phi(&w, &|t| t, 0, 1, &Bracket::default()).unwrap().value.value();
        let hi = d1_phi(&w, &|t| t, 0, 1, &grid, &Bracket::default()).unwrap().value.value();
        assert!((lo - 2.0).abs() < 1e-9);
        assert!(lo <= hi + 1e-9);
        assert!(hi <= 2.0 * lo + 1e-8);
    }

    #[test]
    fn luxemburg_l1_hand_value() {
        // rho(u) = sum |u_i| mu_i with mu = (1/2, 1/2), u = (3, 1): gauge = 2
        let rho = |v: &[f64]| XReal::finite(0.5 * (crate::math::abs(v[0]) + crate::math::abs(v[1])));
        let g = luxemburg(&rho, &[3.0, 1.0], &Bracket::default()).unwrap();
        assert!((g.value.value() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn luxemburg_zero_vector() {
        let rho = |v: &[f64]| XReal::finite(v.iter().map(|x| crate::math::abs(*x)).sum());
        let g = luxemburg(&rho, &[0.0, 0.0], &Bracket::default()).unwrap();
        assert_eq!(g.value, XReal::ZERO);
        assert!(g.flags.at_floor);
    }

    #[test]
    fn luxemburg_exponential_cell() {
        // rho(u) = e^(u^2) - 1 on one unit-mass cell; rho(u/l) <= 1 iff l >= u/sqrt(ln 2)
        let rho = |v: &[f64]| {
            XReal::from_eval(crate::math::exp(v[0] * v[0]) - 1.0)
        };
        let u = crate::math::sqrt(crate::math::ln(2.0));
        let g = luxemburg(&rho, &[u], &Bracket::default()).unwrap();
        assert!((g.value.value() - 1.0).abs() < 1e-9, "got {}", g.value);
    }

    #[test]
    fn invert_monotone_square() {
        let v = invert_monotone(&|t| t * t, 9.0, 1e-12);
        assert!((v - 3.0).abs() < 1e-9);
        assert_eq!(invert_monotone(&|t| t * t, 0.0, 1e-12), 0.0);
        assert_eq!(invert_monotone(&|t| t * t, f64::INFINITY, 1e-12), f64::INFINITY);
    }

    #[test]
    fn gauge_matrix_scaled_is_sqrt_of_base() {
        let space = PointSpace::line(&[0.0, 1.0, 3.0]);
        let w = ModularFamily::power_scaled(space, 1.0).unwrap();
        let m = d0_matrix(&w, &Bracket::default()).unwrap();
        assert!((m.get(0, 1).value() - 1.0).abs() < 1e-9);
        assert!((m.get(0, 2).value() - crate::math::sqrt(3.0)).abs() < 1e-9);
        assert!(m.is_pseudometric(1e-8));
    }

    #[test]
    fn gauge_matrix_single_point() {
        let w = ModularFamily::new(
            PointSpace::anonymous(1),
            "one",
            Claims::default(),
            |_, _, _| XReal::ZERO,
        );
        let m = d0_matrix(&w, &Bracket::default()).unwrap();
        assert_eq!(m.n(), 1);
        assert_eq!(m.get(0, 0), XReal::ZERO);
    }
}

#[cfg(test)]
mod edge_tests {
    use super::*;
    use crate::modular::Claims;
    use crate::space::PointSpace;

    #[test]
    fn d1_phi_all_infinite_objective() {
        let w = ModularFamily::new(
            PointSpace::anonymous(2),
            "wall",
            Claims::default(),
            |_, i, j| if i == j { XReal::ZERO } else { XReal::INFINITY },
        );
        let grid = LambdaGrid::geometric(0.1, 10.0, 9).unwrap();
        let g = d1_phi(&w, &|t| t, 0, 1, &grid, &Bracket::default()).unwrap();
        assert_eq!(g.value, XReal::INFINITY);
        assert!(g.flags.at_cap);
    }

    #[test]
    fn d1_phi_infinite_w_contributes_infinity_until_finite() {
        // step family: objective is infinite below the jump, lambda above it
        let w = ModularFamily::step(PointSpace::line(&[0.0, 1.0])).unwrap();
        let grid = LambdaGrid::per_decade(1e-3, 1e3, 24).unwrap();
        let g = d1_phi(&w, &|t| t, 0, 1, &grid, &Bracket::default()).unwrap();
        assert!((g.value.value() - 1.0).abs() < 1e-6, "got {}", g.value);
    }
}
