//! Scale-parameterized distance families `w(λ, i, j)` and their builders.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;
use crate::matrix::DistanceMatrix;
use crate::space::PointSpace;
use crate::xreal::XReal;

/// Structural claims carried by a family. These are declarations (set by the
/// builder or the caller), not verified facts; the diagnostics in
/// [`crate::axioms`] test them on samples.
#[derive(Clone, Copy, Debug, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Claims {
    /// `w(λ,x,y) = 0` for some λ only when x = y.
    pub strict: bool,
    /// Split-scale convexity; implies λ ↦ w(λ,x,y) is nonincreasing.
    pub convex: bool,
    /// Whether the Δ₂-condition is expected to hold (None = unknown).
    pub delta2_expected: Option<bool>,
}

/// Strictly increasing positive scale samples inside a bracket `[floor, cap]`.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LambdaGrid {
    values: Vec<f64>,
    floor: f64,
    cap: f64,
}

impl LambdaGrid {
    pub fn new(values: Vec<f64>, floor: f64, cap: f64) -> Result<LambdaGrid> {
        if values.is_empty() {
            return Err(CoreError::EmptyGrid);
        }
        if !(floor > 0.0) || !floor.is_finite() {
            return Err(CoreError::InvalidGrid("floor must be a positive real".into()));
        }
        if !(cap > floor) || !cap.is_finite() {
            return Err(CoreError::InvalidGrid("cap must be finite and exceed floor".into()));
        }
        for w in values.windows(2) {
            if !(w[0] < w[1]) {
                return Err(CoreError::InvalidGrid("values must be strictly increasing".into()));
            }
        }
        if values[0] < floor || *values.last().unwrap() > cap {
            return Err(CoreError::InvalidGrid("values must lie within [floor, cap]".into()));
        }
        Ok(LambdaGrid { values, floor, cap })
    }

    /// `count` log-spaced values spanning `[floor, cap]`.
    pub fn geometric(floor: f64, cap: f64, count: usize) -> Result<LambdaGrid> {
        if count < 2 {
            return Err(CoreError::InvalidGrid("geometric grid needs at least 2 values".into()));
        }
        if !(floor > 0.0 && cap > floor && cap.is_finite()) {
            return Err(CoreError::InvalidGrid("need 0 < floor < cap < inf".into()));
        }
        LambdaGrid::new(math::log_spaced(floor, cap, count), floor, cap)
    }

    /// Log-spaced grid with a fixed density per decade (ascending searches).
    pub fn per_decade(floor: f64, cap: f64, per_decade: usize) -> Result<LambdaGrid> {
        if !(floor > 0.0 && cap > floor && cap.is_finite()) {
            return Err(CoreError::InvalidGrid("need 0 < floor < cap < inf".into()));
        }
        let decades = math::ln(cap / floor) / math::ln(10.0);
        let count = ((decades * per_decade as f64) as usize).max(2) + 1;
        LambdaGrid::geometric(floor, cap, count)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

type EvalFn = dyn Fn(f64, usize, usize) -> XReal + Send + Sync;

/// A modular family: a pure, total evaluator `w(λ, i, j)` over a finite point
/// space, plus declared structural claims. Immutable after construction.
#[derive(Clone)]
pub struct ModularFamily {
    space: PointSpace,
    eval: Arc<EvalFn>,
    claims: Claims,
    name: String,
}

impl core::fmt::Debug for ModularFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ModularFamily")
            .field("name", &self.name)
            .field("points", &self.space.len())
            .field("claims", &self.claims)
            .finish()
    }
}

impl ModularFamily {
    pub fn new(
        space: PointSpace,
        name: impl Into<String>,
        claims: Claims,
        eval: impl Fn(f64, usize, usize) -> XReal + Send + Sync + 'static,
    ) -> ModularFamily {
        ModularFamily { space, eval: Arc::new(eval), claims, name: name.into() }
    }

    pub fn eval(&self, lambda: f64, i: usize, j: usize) -> XReal {
        assert!(lambda > 0.0, "modular scale must be positive, got {lambda}");
        assert!(i < self.space.len() && j < self.space.len(), "point index out of bounds");
        (self.eval)(lambda, i, j)
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    pub fn claims(&self) -> Claims {
        self.claims
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// `w(λ,x,y) = g(λ)·d(x,y)` for nonincreasing `g ≥ 0` (may take the value
    /// `+inf`). Convexity is claimed when λ·g(λ) is nonincreasing on samples.
    pub fn scaled_metric(
        space: PointSpace,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<ModularFamily> {
        if space.base_distance().is_none() {
            return Err(CoreError::MissingBaseDistance);
        }
        let samples = math::log_spaced(1e-6, 1e6, 49);
        let mut strict = true;
        let mut convex = true;
        let mut all_finite_positive = true;
        let mut prev: Option<(f64, f64)> = None;
        for &l in &samples {
            let v = g(l);
            if v.is_nan() || v < 0.0 {
                return Err(CoreError::BuilderInvalid(alloc::format!(
                    "g({l}) = {v}; g must map into [0, +inf]"
                )));
            }
            if v == 0.0 {
                strict = false;
            }
            if !v.is_finite() || v == 0.0 {
                all_finite_positive = false;
            }
            if let Some((pl, pv)) = prev {
                if v > pv * (1.0 + 1e-12) + f64::MIN_POSITIVE {
                    return Err(CoreError::BuilderInvalid(alloc::format!(
                        "g increases between lambda={pl} and lambda={l}"
                    )));
                }
            }
            prev = Some((l, v));
        }
        // convexity claim: λ g(λ) nonincreasing on samples
        let mut prev_lg: Option<f64> = None;
        for &l in &samples {
            let lg = l * g(l);
            if let Some(p) = prev_lg {
                if lg > p * (1.0 + 1e-12) + 1e-300 {
                    convex = false;
                    break;
                }
            }
            prev_lg = Some(lg);
        }
        let claims = Claims {
            strict,
            convex,
            delta2_expected: if all_finite_positive { Some(true) } else { None },
        };
        let base = space.base_distance().unwrap().clone();
        Ok(ModularFamily::new(space, "scaled", claims, move |l, i, j| {
            base.get(i, j).scale(g(l))
        }))
    }

    /// `w(λ,x,y) = d(x,y) / λ^p` with `p >= 0`.
    pub fn power_scaled(space: PointSpace, p: f64) -> Result<ModularFamily> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(CoreError::BuilderInvalid(alloc::format!(
                "power exponent must be a finite p >= 0, got {p}"
            )));
        }
        let mut fam = ModularFamily::scaled_metric(space, move |l| math::powf(l, -p))?;
        fam.name = alloc::format!("scaled(p={p})");
        Ok(fam)
    }

    /// `w(λ,x,y) = d(x,y) / (h(λ) + d(x,y))` for nondecreasing positive `h`.
    pub fn saturating_metric(
        space: PointSpace,
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<ModularFamily> {
        if space.base_distance().is_none() {
            return Err(CoreError::MissingBaseDistance);
        }
        let samples = math::log_spaced(1e-6, 1e6, 49);
        let mut prev: Option<(f64, f64)> = None;
        for &l in &samples {
            let v = h(l);
            if !(v > 0.0) || v.is_nan() {
                return Err(CoreError::BuilderInvalid(alloc::format!(
                    "h({l}) = {v}; h must be positive"
                )));
            }
            if let Some((pl, pv)) = prev {
                if v < pv * (1.0 - 1e-12) {
                    return Err(CoreError::BuilderInvalid(alloc::format!(
                        "h decreases between lambda={pl} and lambda={l}"
                    )));
                }
            }
            prev = Some((l, v));
        }
        let claims = Claims { strict: true, convex: false, delta2_expected: Some(true) };
        let base = space.base_distance().unwrap().clone();
        Ok(ModularFamily::new(space, "saturating", claims, move |l, i, j| {
            let d = base.get(i, j);
            if d.is_zero() {
                XReal::ZERO
            } else if d.is_infinite() {
                XReal::ONE
            } else {
                XReal::finite(d.value() / (h(l) + d.value()))
            }
        }))
    }

    /// Trajectories sampled on a finite time set `T ⊂ [0, ∞)`:
    /// `w(λ,x,y) = sup_{t ∈ T} e^{-λ t} |x(t) - y(t)|`.
    pub fn exponential_family(times: Vec<f64>, trajectories: Vec<Vec<f64>>) -> Result<ModularFamily> {
        if times.is_empty() || trajectories.is_empty() {
            return Err(CoreError::BuilderInvalid("need at least one time and one trajectory".into()));
        }
        if times.iter().any(|&t| !(t >= 0.0) || !t.is_finite()) {
            return Err(CoreError::BuilderInvalid("times must be finite nonnegative reals".into()));
        }
        for (k, traj) in trajectories.iter().enumerate() {
            if traj.len() != times.len() {
                return Err(CoreError::DimensionMismatch { expected: times.len(), got: traj.len() });
            }
            if traj.iter().any(|v| !v.is_finite()) {
                return Err(CoreError::BuilderInvalid(alloc::format!(
                    "trajectory {k} has a non-finite sample"
                )));
            }
        }
        let n = trajectories.len();
        // sup-distance over T serves as the base metric (the λ → 0 limit)
        let trj = trajectories.clone();
        let base = DistanceMatrix::from_fn(n, "sup", |i, j| {
            let mut m = 0.0f64;
            for t in 0..times.len() {
                let d = math::abs(trj[i][t] - trj[j][t]);
                if d > m {
                    m = d;
                }
            }
            Ok(XReal::finite(m))
        })?;
        let space = PointSpace::with_distance(
            (0..n).map(|i| alloc::format!("traj{i}")).collect(),
            base,
            crate::space::TOL_METRIC,
        )?;
        let claims = Claims { strict: true, convex: false, delta2_expected: None };
        Ok(ModularFamily::new(space, "exponential", claims, move |l, i, j| {
            let mut m = 0.0f64;
            for (idx, &t) in times.iter().enumerate() {
                let d = math::exp(-l * t) * math::abs(trajectories[i][idx] - trajectories[j][idx]);
                if d > m {
                    m = d;
                }
            }
            XReal::finite(m)
        }))
    }

    /// The canonical Δ₂-violating family:
    /// `w(λ,x,y) = 0` if `d(x,y) <= λ`, `+inf` otherwise.
    pub fn step(space: PointSpace) -> Result<ModularFamily> {
        if space.base_distance().is_none() {
            return Err(CoreError::MissingBaseDistance);
        }
        let base = space.base_distance().unwrap().clone();
        let claims = Claims { strict: false, convex: false, delta2_expected: Some(false) };
        Ok(ModularFamily::new(space, "step", claims, move |l, i, j| {
            if base.get(i, j) <= XReal::finite(l) {
                XReal::ZERO
            } else {
                XReal::INFINITY
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn three_point_space() -> PointSpace {
        // right triangle on a line extension: d(0,1)=16, d(1,2)=9, d(0,2)=25
        let entries = [0.0, 16.0, 25.0, 16.0, 0.0, 9.0, 25.0, 9.0, 0.0]
            .iter()
            .map(|&v| XReal::finite(v))
            .collect();
        let base = DistanceMatrix::from_entries(3, entries, "base").unwrap();
        PointSpace::with_distance(vec!["a".into(), "b".into(), "c".into()], base, 1e-9).unwrap()
    }

    #[test]
    fn scaled_metric_formula() {
        let w = ModularFamily::scaled_metric(three_point_space(), |l| 1.0 / l).unwrap();
        assert_eq!(w.eval(2.0, 0, 1), XReal::finite(8.0));
        assert!(w.claims().convex);
        assert_eq!(w.claims().delta2_expected, Some(true));
    }

    #[test]
    fn power_scaled_p0_is_constant_in_lambda() {
        let w = ModularFamily::power_scaled(three_point_space(), 0.0).unwrap();
        assert_eq!(w.eval(0.1, 0, 1), XReal::finite(16.0));
        assert_eq!(w.eval(100.0, 0, 1), XReal::finite(16.0));
        assert!(!w.claims().convex);
    }

    #[test]
    fn saturating_metric_formula() {
        let base = DistanceMatrix::from_entries(
            2,
            vec![XReal::ZERO, XReal::ONE, XReal::ONE, XReal::ZERO],
            "d1",
        )
        .unwrap();
        let space = PointSpace::with_distance(vec!["x".into(), "y".into()], base, 1e-9).unwrap();
        let w = ModularFamily::saturating_metric(space, |l| l).unwrap();
        assert_eq!(w.eval(1.0, 0, 1), XReal::finite(0.5));
        assert_eq!(w.eval(1.0, 0, 0), XReal::ZERO);
    }

    #[test]
    fn step_modular_jumps_at_the_distance() {
        let space = PointSpace::line(&[0.0, 1.0]);
        let w = ModularFamily::step(space).unwrap();
        assert_eq!(w.eval(0.5, 0, 1), XReal::INFINITY);
        assert_eq!(w.eval(2.0, 0, 1), XReal::ZERO);
        assert_eq!(w.eval(1.0, 0, 1), XReal::ZERO); // d <= lambda at equality
        assert_eq!(w.claims().delta2_expected, Some(false));
    }

    #[test]
    fn exponential_family_sup_formula() {
        let w = ModularFamily::exponential_family(
            vec![0.0, 1.0],
            vec![vec![0.0, 0.0], vec![1.0, 2.0]],
        )
        .unwrap();
        // sup(e^0 * 1, e^->lambda * 2) at lambda = ln 4: e^{-ln4}*2 = 0.5 < 1
        let v = w.eval(math::ln(4.0), 0, 1);
        assert!((v.value() - 1.0).abs() < 1e-12);
        // small lambda: the t=1 term dominates
        let v = w.eval(0.01, 0, 1);
        assert!((v.value() - math::exp(-0.01) * 2.0).abs() < 1e-12);
    }

    #[test]
    fn increasing_g_is_rejected() {
        let err = ModularFamily::scaled_metric(three_point_space(), |l| l).unwrap_err();
        assert!(matches!(err, CoreError::BuilderInvalid(_)));
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(LambdaGrid::new(vec![], 0.1, 1.0), Err(CoreError::EmptyGrid)));
        assert!(LambdaGrid::new(vec![0.5, 0.4], 0.1, 1.0).is_err());
        assert!(LambdaGrid::new(vec![0.5, 2.0], 0.1, 1.0).is_err());
        let g = LambdaGrid::geometric(0.1, 10.0, 25).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g.values()[0], 0.1);
        assert_eq!(*g.values().last().unwrap(), 10.0);
    }
}
