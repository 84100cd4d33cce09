//! Cauchy notions on finite traces, greedy ε-nets, Cauchy-subsequence
//! extraction, and finite-sample compactness verdicts.
//!
//! Sequences are finite truncations, so every verdict here is "up to the
//! horizon": limits are not finitely observable and reports say so.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{check_index, CoreError, Result};
use crate::gauge::{self, Bracket};
use crate::matrix::DistanceMatrix;
use crate::modular::ModularFamily;
use crate::report::{DiagnosticReport, Verdict, Witness};
use crate::xreal::XReal;

/// A truncated sequence of point indices, optionally with a claimed limit.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SequenceTrace {
    pub points: Vec<usize>,
    pub claimed_limit: Option<usize>,
}

impl SequenceTrace {
    pub fn new(points: Vec<usize>) -> Result<SequenceTrace> {
        if points.is_empty() {
            return Err(CoreError::Domain("sequence trace must be nonempty".into()));
        }
        Ok(SequenceTrace { points, claimed_limit: None })
    }

    pub fn with_limit(points: Vec<usize>, limit: usize) -> Result<SequenceTrace> {
        let mut t = SequenceTrace::new(points)?;
        t.claimed_limit = Some(limit);
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Smallest tail start N (with a tail of at least two points) such that all
/// tail pairs satisfy `inside`; `None` if no such tail exists.
fn settle_index(len: usize, mut inside: impl FnMut(usize, usize) -> bool) -> Option<usize> {
    // a violating pair (k, l) forces N > min(k, l)
    let mut needed = 0usize;
    for k in 0..len {
        for l in (k + 1)..len {
            if !inside(k, l) && k + 1 > needed {
                needed = k + 1;
            }
        }
    }
    (needed + 2 <= len).then_some(needed)
}

/// For each n ≤ n_max, finds the smallest tail start with all tail pairs in
/// `Vₙ`, or fails at the first n without one, naming a witnessing pair.
pub fn is_v_cauchy(trace: &SequenceTrace, w: &ModularFamily, n_max: u32) -> Result<DiagnosticReport> {
    if n_max == 0 {
        return Err(CoreError::Domain("n_max must be >= 1".into()));
    }
    if trace.len() < 2 {
        return Err(CoreError::Domain("trace must contain at least two entries".into()));
    }
    for &p in &trace.points {
        check_index(p, w.len())?;
    }

    let mut report =
        DiagnosticReport::pass("v_cauchy", alloc::format!("V-Cauchy up to n_max={n_max} (horizon-limited)"));
    for n in 1..=n_max {
        let scale = 1.0 / n as f64;
        let bound = XReal::finite(scale);
        let inside =
            |k: usize, l: usize| w.eval(scale, trace.points[k], trace.points[l]) < bound;
        match settle_index(trace.len(), inside) {
            Some(settle) => {
                report = report.with_evidence(
                    alloc::format!("settle_index_n{n}"),
                    XReal::finite(settle as f64),
                );
            }
            None => {
                // the final admissible tail exhibits a violating pair
                let start = trace.len() - 2;
                let mut pair = (start, start + 1);
                'scan: for k in start..trace.len() {
                    for l in (k + 1)..trace.len() {
                        if !(w.eval(scale, trace.points[k], trace.points[l]) < bound) {
                            pair = (k, l);
                            break 'scan;
                        }
                    }
                }
                let (k, l) = pair;
                let witness = Witness::new("v_cauchy")
                    .points(&[trace.points[k], trace.points[l]])
                    .scales(&[scale])
                    .sides(w.eval(scale, trace.points[k], trace.points[l]), bound)
                    .note(alloc::format!("no tail settles inside V_{n}; pair at positions ({k},{l})"));
                return Ok(DiagnosticReport::fail(
                    "v_cauchy",
                    alloc::format!("fails at n={n}"),
                    witness,
                ));
            }
        }
    }
    Ok(report)
}

/// The three finite-resolution Cauchy classifications of a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CauchyClassification {
    pub v_cauchy: bool,
    pub d0_cauchy: bool,
    pub dstar_cauchy: bool,
}

impl CauchyClassification {
    pub fn agree(&self) -> bool {
        self.v_cauchy == self.d0_cauchy && self.d0_cauchy == self.dstar_cauchy
    }
}

/// Classifies the trace as V-Cauchy, d⁰-Cauchy and d*-Cauchy at resolution
/// `n_max`. Requires a family claiming convexity (the equivalence is a
/// convex-case statement).
pub fn cauchy_classification(
    trace: &SequenceTrace,
    w: &ModularFamily,
    n_max: u32,
    br: &Bracket,
) -> Result<CauchyClassification> {
    if !w.claims().convex {
        return Err(CoreError::Domain(
            "cauchy equivalence requires a family claiming convexity".into(),
        ));
    }
    if trace.len() < 2 {
        return Err(CoreError::Domain("trace must contain at least two entries".into()));
    }
    for &p in &trace.points {
        check_index(p, w.len())?;
    }

    let v_cauchy = is_v_cauchy(trace, w, n_max)?.passed();

    // gauge distances between the distinct points the trace visits
    let mut uniq: Vec<usize> = trace.points.clone();
    uniq.sort_unstable();
    uniq.dedup();
    let pos = |p: usize| uniq.binary_search(&p).unwrap();
    let m = uniq.len();
    let mut d0m = alloc::vec![XReal::ZERO; m * m];
    let mut dsm = alloc::vec![XReal::ZERO; m * m];
    for a in 0..m {
        for b in (a + 1)..m {
            let g0 = gauge::d0(w, uniq[a], uniq[b], br)?.value;
            let gs = gauge::dstar(w, uniq[a], uniq[b], br)?.value;
            d0m[a * m + b] = g0;
            d0m[b * m + a] = g0;
            dsm[a * m + b] = gs;
            dsm[b * m + a] = gs;
        }
    }

    let metric_cauchy = |dm: &[XReal]| -> bool {
        for n in 1..=n_max {
            let bound = XReal::finite(1.0 / n as f64);
            let inside = |k: usize, l: usize| {
                dm[pos(trace.points[k]) * m + pos(trace.points[l])] < bound
            };
            if settle_index(trace.len(), inside).is_none() {
                return false;
            }
        }
        true
    };

    Ok(CauchyClassification {
        v_cauchy,
        d0_cauchy: metric_cauchy(&d0m),
        dstar_cauchy: metric_cauchy(&dsm),
    })
}

/// Report-shaped wrapper around [`cauchy_classification`]: pass iff the three
/// classifications agree, fail-with-witness naming the disagreeing notions.
pub fn cauchy_equivalence(
    trace: &SequenceTrace,
    w: &ModularFamily,
    n_max: u32,
    br: &Bracket,
) -> Result<DiagnosticReport> {
    let c = cauchy_classification(trace, w, n_max, br)?;
    let as_x = |b: bool| XReal::finite(if b { 1.0 } else { 0.0 });
    if c.agree() {
        Ok(
            DiagnosticReport::pass("cauchy_equivalence", "V-, d0- and dstar-classifications agree")
                .with_evidence("v_cauchy", as_x(c.v_cauchy))
                .with_evidence("d0_cauchy", as_x(c.d0_cauchy))
                .with_evidence("dstar_cauchy", as_x(c.dstar_cauchy)),
        )
    } else {
        let witness = Witness::new("cauchy_disagreement").note(alloc::format!(
            "v={} d0={} dstar={}",
            c.v_cauchy,
            c.d0_cauchy,
            c.dstar_cauchy
        ));
        Ok(DiagnosticReport::fail(
            "cauchy_equivalence",
            "classifications disagree (tolerance or resolution issue)",
            witness,
        )
        .with_evidence("v_cauchy", as_x(c.v_cauchy))
        .with_evidence("d0_cauchy", as_x(c.d0_cauchy))
        .with_evidence("dstar_cauchy", as_x(c.dstar_cauchy)))
    }
}

/// Greedy farthest-point ε-cover.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NetCover {
    pub epsilon: f64,
    /// Center point indices in insertion (farthest-first) order.
    pub centers: Vec<usize>,
    /// For each point, the center point index it is assigned to.
    pub assignment: Vec<usize>,
}

/// Farthest-point ε-net: repeatedly adds the point farthest from the current
/// centers (ties broken toward the lowest index) until every point lies
/// strictly within ε of a center. A greedy 2-approximation of the optimal
/// cover size.
pub fn epsilon_net(metric: &DistanceMatrix, epsilon: f64) -> Result<NetCover> {
    if !(epsilon > 0.0) {
        return Err(CoreError::Domain(alloc::format!("epsilon must be positive, got {epsilon}")));
    }
    let n = metric.n();
    if n == 0 {
        return Ok(NetCover { epsilon, centers: Vec::new(), assignment: Vec::new() });
    }
    let eps = XReal::finite(epsilon);
    let mut centers = Vec::new();
    let mut min_dist = alloc::vec![XReal::INFINITY; n];
    let mut assignment = alloc::vec![0usize; n];
    loop {
        // farthest point from the current centers, lowest index on ties
        let mut far = 0usize;
        for z in 1..n {
            if min_dist[z] > min_dist[far] {
                far = z;
            }
        }
        if !centers.is_empty() && min_dist[far] < eps {
            break;
        }
        centers.push(far);
        for z in 0..n {
            let d = metric.get(far, z);
            if d < min_dist[z] {
                min_dist[z] = d;
                assignment[z] = far;
            }
        }
    }
    Ok(NetCover { epsilon, centers, assignment })
}

/// Nested cluster refinement across decreasing ε-levels: at each level the
/// most populous ε-cluster of the surviving positions is kept, and the
/// diagonal picks one strictly increasing position per level.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Subsequence {
    /// Positions into the original trace, strictly increasing.
    pub indices: Vec<usize>,
    /// False when the trace was exhausted before all levels completed.
    pub complete: bool,
    pub levels_done: usize,
}

pub fn cauchy_subsequence(
    trace: &SequenceTrace,
    metric: &DistanceMatrix,
    levels: &[f64],
) -> Result<Subsequence> {
    if levels.is_empty() {
        return Err(CoreError::Domain("levels must be nonempty".into()));
    }
    for w in levels.windows(2) {
        if !(w[1] < w[0]) {
            return Err(CoreError::Domain("levels must be strictly decreasing".into()));
        }
    }
    if levels.iter().any(|&e| !(e > 0.0)) {
        return Err(CoreError::Domain("levels must be positive".into()));
    }
    for &p in &trace.points {
        metric.check_point(p)?;
    }

    // greedy net restricted to the surviving trace positions
    let net_on = |survivors: &[usize], eps: f64| -> Vec<usize> {
        let eps = XReal::finite(eps);
        let k = survivors.len();
        let mut centers: Vec<usize> = Vec::new(); // positions into survivors
        let mut min_dist = alloc::vec![XReal::INFINITY; k];
        let mut assignment = alloc::vec![0usize; k];
        loop {
            let mut far = 0usize;
            for z in 1..k {
                if min_dist[z] > min_dist[far] {
                    far = z;
                }
            }
            if !centers.is_empty() && min_dist[far] < eps {
                break;
            }
            centers.push(far);
            for z in 0..k {
                let d = metric.get(trace.points[survivors[far]], trace.points[survivors[z]]);
                if d < min_dist[z] {
                    min_dist[z] = d;
                    assignment[z] = far;
                }
            }
        }
        // most populous cluster; ties toward the earliest-added center
        let mut best_center = centers[0];
        let mut best_count = 0usize;
        for &c in &centers {
            let count = assignment.iter().filter(|&&a| a == c).count();
            if count > best_count {
                best_count = count;
                best_center = c;
            }
        }
        survivors
            .iter()
            .zip(assignment.iter())
            .filter(|(_, &a)| a == best_center)
            .map(|(&s, _)| s)
            .collect()
    };

    let mut survivors: Vec<usize> = (0..trace.len()).collect();
    let mut indices = Vec::with_capacity(levels.len());
    let mut last: Option<usize> = None;
    let mut levels_done = 0usize;
    for &eps in levels {
        survivors = net_on(&survivors, eps);
        let next = survivors.iter().copied().find(|&s| last.map_or(true, |l| s > l));
        match next {
            Some(s) => {
                indices.push(s);
                last = Some(s);
                levels_done += 1;
            }
            None => {
                return Ok(Subsequence { indices, complete: false, levels_done });
            }
        }
    }
    Ok(Subsequence { indices, complete: true, levels_done })
}

/// Per-trace completeness evidence.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TraceLimit {
    pub trace_index: usize,
    pub cauchy: bool,
    /// Best candidate limit point when the trace is Cauchy.
    pub limit: Option<usize>,
    /// Smallest eventual sup-distance over candidate points.
    pub eventual_sup: XReal,
}

/// Precompactness and completeness evidence from finite samples.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CompactnessEvidence {
    /// (ε, greedy net size) per requested ε.
    pub net_sizes: Vec<(f64, usize)>,
    /// (n, greedy Vₙ-ball cover size) when a modular family is supplied,
    /// with n = ceil(1/ε) per requested ε.
    pub entourage_cover: Option<Vec<(u32, usize)>>,
    pub traces: Vec<TraceLimit>,
    pub verdict: Verdict,
    pub summary: String,
}

/// Aggregates ε-net sizes (total boundedness evidence) and limit searches for
/// the supplied Cauchy traces (completeness evidence). Explicitly labeled
/// finite-sample evidence, not proof.
pub fn compactness_verdict(
    metric: &DistanceMatrix,
    w: Option<&ModularFamily>,
    epsilons: &[f64],
    traces: &[SequenceTrace],
    tol_metric: f64,
) -> Result<CompactnessEvidence> {
    if epsilons.is_empty() {
        return Err(CoreError::Domain("epsilons must be nonempty".into()));
    }
    if epsilons.iter().any(|&e| !(e > 0.0)) {
        return Err(CoreError::Domain("epsilons must be positive".into()));
    }

    let mut net_sizes = Vec::with_capacity(epsilons.len());
    for &e in epsilons {
        net_sizes.push((e, epsilon_net(metric, e)?.centers.len()));
    }

    let entourage_cover = match w {
        Some(fam) => {
            if fam.len() != metric.n() {
                return Err(CoreError::DimensionMismatch { expected: metric.n(), got: fam.len() });
            }
            let mut covers = Vec::with_capacity(epsilons.len());
            for &e in epsilons {
                let n = libm::ceil(1.0 / e) as u32;
                let ent = crate::topology::entourage(fam, n.max(1))?;
                let mut covered = alloc::vec![false; fam.len()];
                let mut count = 0usize;
                for x in 0..fam.len() {
                    if covered[x] {
                        continue;
                    }
                    count += 1;
                    for z in 0..fam.len() {
                        if ent.contains(x, z) {
                            covered[z] = true;
                        }
                    }
                }
                covers.push((n.max(1), count));
            }
            Some(covers)
        }
        None => None,
    };

    let eps_min = epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    let mut outcomes = Vec::with_capacity(traces.len());
    let mut all_limits_found = true;
    for (ti, trace) in traces.iter().enumerate() {
        for &p in &trace.points {
            metric.check_point(p)?;
        }
        let len = trace.len();
        // Cauchy at the sampled resolution: some tail of >= 2 points has
        // diameter below the finest ε
        let cauchy = len >= 2
            && settle_index(len, |k, l| {
                metric.get(trace.points[k], trace.points[l]) < XReal::finite(eps_min)
            })
            .is_some();
        // eventual sup-distance over the last quarter of the trace
        let tail_start = if len < 4 { len - 1 } else { (3 * len).div_ceil(4).min(len - 1) };
        let mut best: Option<(usize, XReal)> = None;
        for z in 0..metric.n() {
            let mut sup = XReal::ZERO;
            for &p in &trace.points[tail_start..] {
                sup = sup.max(metric.get(z, p));
            }
            if best.map_or(true, |(_, s)| sup < s) {
                best = Some((z, sup));
            }
        }
        let (cand, sup) = best.expect("nonempty space");
        let found = cauchy && sup <= XReal::finite(10.0 * tol_metric);
        if cauchy && !found {
            all_limits_found = false;
        }
        outcomes.push(TraceLimit {
            trace_index: ti,
            cauchy,
            limit: if found { Some(cand) } else { None },
            eventual_sup: sup,
        });
    }

    let verdict = if all_limits_found { Verdict::Pass } else { Verdict::Fail };
    let summary = if all_limits_found {
        String::from("finite-sample evidence: nets finite, all Cauchy traces admit limits")
    } else {
        String::from("finite-sample evidence: some Cauchy trace admits no limit within tolerance")
    };
    Ok(CompactnessEvidence { net_sizes, entourage_cover, traces: outcomes, verdict, summary })
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
    fn constant_sequence_is_v_cauchy() {
        let w = scaled(&[0.0, 1.0]);
        let t = SequenceTrace::new(vec![0; 6]).unwrap();
        assert!(is_v_cauchy(&t, &w, 8).unwrap().passed());
    }

    #[test]
    fn harmonic_trace_is_v_cauchy_given_length() {
        // d(x_k, x_l) = |1/k - 1/l|: w(1/n, x_k, x_l) = n d < 1/n for k,l >= 2n^2
        let coords: Vec<f64> = (1..=40).map(|k| 1.0 / k as f64).collect();
        let w = scaled(&coords);
        let t = SequenceTrace::new((0..40).collect()).unwrap();
        let r = is_v_cauchy(&t, &w, 3).unwrap();
        assert!(r.passed(), "{}", r.summary);
    }

    #[test]
    fn alternating_trace_fails_with_pair_witness() {
        let w = scaled(&[0.0, 1.5]);
        let t = SequenceTrace::new(vec![0, 1, 0, 1, 0, 1]).unwrap();
        let r = is_v_cauchy(&t, &w, 4).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses[0].kind, "v_cauchy");
    }

    #[test]
    fn classification_agreement_on_clear_cut_traces() {
        let mut coords: Vec<f64> = (0..24).map(|k| crate::math::powf(0.5, k as f64)).collect();
        coords.push(0.0);
        let w = scaled(&coords);
        let conv = SequenceTrace::new((0..24).collect()).unwrap();
        let c = cauchy_classification(&conv, &w, 3, &Bracket::default()).unwrap();
        assert!(c.agree() && c.v_cauchy, "{c:?}");

        let sep = SequenceTrace::new(vec![0, 20, 0, 20, 0, 20, 0, 20]).unwrap();
        let c = cauchy_classification(&sep, &w, 3, &Bracket::default()).unwrap();
        assert!(c.agree() && !c.v_cauchy, "{c:?}");
    }

    #[test]
    fn equivalence_requires_convex_claim() {
        let w = ModularFamily::step(PointSpace::line(&[0.0, 1.0])).unwrap();
        let t = SequenceTrace::new(vec![0, 1]).unwrap();
        assert!(cauchy_equivalence(&t, &w, 2, &Bracket::default()).is_err());
    }

    #[test]
    fn net_single_center_when_epsilon_exceeds_diameter() {
        let d = PointSpace::line(&[0.0, 1.0, 2.0]).base_distance().unwrap().clone();
        let net = epsilon_net(&d, 5.0).unwrap();
        assert_eq!(net.centers, vec![0]);
        assert_eq!(net.assignment, vec![0, 0, 0]);
    }

    #[test]
    fn separated_points_each_become_centers() {
        let d = DistanceMatrix::from_fn(5, "unit", |_, _| Ok(XReal::ONE)).unwrap();
        let net = epsilon_net(&d, 0.5).unwrap();
        assert_eq!(net.centers.len(), 5);
        // exactly at epsilon = 1 the strict < also forces all centers
        let net = epsilon_net(&d, 1.0).unwrap();
        assert_eq!(net.centers.len(), 5);
    }

    #[test]
    fn net_cover_is_valid_and_monotone() {
        let d = PointSpace::line(&[0.0, 0.3, 0.9, 1.4, 2.2]).base_distance().unwrap().clone();
        let mut prev = usize::MAX;
        for eps in [0.2, 0.5, 1.0, 3.0] {
            let net = epsilon_net(&d, eps).unwrap();
            for z in 0..d.n() {
                assert!(d.get(z, net.assignment[z]) < XReal::finite(eps));
            }
            assert!(net.centers.len() <= prev);
            prev = net.centers.len();
        }
    }

    #[test]
    fn subsequence_settles_into_one_cluster() {
        // two clusters around 0 and 10, trace alternates, cluster 0 is larger
        let d = PointSpace::line(&[0.0, 0.01, 10.0, 10.01]).base_distance().unwrap().clone();
        let t = SequenceTrace::new(vec![0, 2, 1, 3, 0, 2, 1, 0]).unwrap();
        let s = cauchy_subsequence(&t, &d, &[1.0, 0.5]).unwrap();
        assert!(s.complete);
        // all selected positions lie in the low cluster
        for &pos in &s.indices {
            assert!(t.points[pos] == 0 || t.points[pos] == 1, "pos {pos}");
        }
        let mut sorted = s.indices.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, s.indices, "positions strictly increasing");
    }

    #[test]
    fn cyclic_separated_points_give_constant_subsequence() {
        let d = DistanceMatrix::from_fn(3, "unit", |_, _| Ok(XReal::ONE)).unwrap();
        let t = SequenceTrace::new(vec![0, 1, 2, 0, 1, 2, 0, 1, 2]).unwrap();
        let s = cauchy_subsequence(&t, &d, &[0.9, 0.5, 0.25]).unwrap();
        assert!(s.complete);
        let first = t.points[s.indices[0]];
        assert!(s.indices.iter().all(|&p| t.points[p] == first));
    }

    #[test]
    fn subsequence_flags_exhaustion() {
        let d = PointSpace::line(&[0.0, 1.0]).base_distance().unwrap().clone();
        let t = SequenceTrace::new(vec![0]).unwrap();
        let s = cauchy_subsequence(&t, &d, &[1.0, 0.5, 0.25]).unwrap();
        assert!(!s.complete);
        assert_eq!(s.levels_done, 1);
    }

    #[test]
    fn finite_space_with_settling_traces_is_compact_evidence() {
        let d = PointSpace::line(&[0.0, 0.6, 1.5]).base_distance().unwrap().clone();
        let traces = vec![
            SequenceTrace::new(vec![0, 1, 2, 2, 2, 2, 2, 2]).unwrap(),
            SequenceTrace::new(vec![1, 1, 1, 1]).unwrap(),
        ];
        let ev = compactness_verdict(&d, None, &[1.0, 0.5, 0.1], &traces, 1e-9).unwrap();
        assert_eq!(ev.verdict, Verdict::Pass);
        assert!(ev.traces.iter().all(|t| !t.cauchy || t.limit.is_some()));
    }

    #[test]
    fn missing_limit_point_is_a_completeness_failure() {
        // trace clusters at coordinate 5 but the space only has 0 and 10
        let d = PointSpace::line(&[0.0, 10.0, 5.0, 5.0]).base_distance().unwrap().clone();
        // remove the cluster points from candidacy by building a smaller space:
        let small = PointSpace::line(&[0.0, 10.0, 5.001, 5.0005]).base_distance().unwrap().clone();
        let t = SequenceTrace::new(vec![2, 3, 2, 3, 2, 3, 2, 3]).unwrap();
        let ev = compactness_verdict(&small, None, &[0.01], &[t], 1e-9).unwrap();
        // the trace is Cauchy at 0.01 resolution (cluster diameter 5e-4) but no
        // candidate's eventual sup-distance reaches 1e-8
        assert_eq!(ev.verdict, Verdict::Fail);
        assert!(ev.traces[0].cauchy);
        assert!(ev.traces[0].limit.is_none());
        let _ = d;
    }
}
