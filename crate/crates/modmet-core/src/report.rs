//! Structured diagnostic verdicts with machine-readable witnesses.

use alloc::string::String;
use alloc::vec::Vec;

use crate::xreal::XReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One concrete counterexample: which points/scales violated what.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Witness {
    /// Short tag such as "triangle", "symmetry", "delta2".
    pub kind: &'static str,
    /// Point indices involved, in the order the violated inequality names them.
    pub points: Vec<usize>,
    /// Scale parameters involved (λ, μ, 1/n, ...).
    pub scales: Vec<f64>,
    pub lhs: Option<XReal>,
    pub rhs: Option<XReal>,
    pub note: String,
}

impl Witness {
    pub fn new(kind: &'static str) -> Self {
        Witness {
            kind,
            points: Vec::new(),
            scales: Vec::new(),
            lhs: None,
            rhs: None,
            note: String::new(),
        }
    }

    pub fn points(mut self, points: &[usize]) -> Self {
        self.points = points.to_vec();
        self
    }

    pub fn scales(mut self, scales: &[f64]) -> Self {
        self.scales = scales.to_vec();
        self
    }

    pub fn sides(mut self, lhs: XReal, rhs: XReal) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Named scalar attached to a report.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Evidence {
    pub label: String,
    pub value: XReal,
}

/// Pass / fail-with-witness / inconclusive, plus numeric evidence.
///
/// A `Pass` from a sampled check certifies satisfaction only at the sampled
/// resolution; a `Fail` carries at least one exact witness.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DiagnosticReport {
    pub check: &'static str,
    pub verdict: Verdict,
    pub summary: String,
    pub witnesses: Vec<Witness>,
    pub evidence: Vec<Evidence>,
}

impl DiagnosticReport {
    pub fn pass(check: &'static str, summary: impl Into<String>) -> Self {
        DiagnosticReport {
            check,
            verdict: Verdict::Pass,
            summary: summary.into(),
            witnesses: Vec::new(),
            evidence: Vec::new(),
        }
    }

    pub fn fail(check: &'static str, summary: impl Into<String>, witness: Witness) -> Self {
        DiagnosticReport {
            check,
            verdict: Verdict::Fail,
            summary: summary.into(),
            witnesses: alloc::vec![witness],
            evidence: Vec::new(),
        }
    }

    pub fn inconclusive(check: &'static str, summary: impl Into<String>) -> Self {
        DiagnosticReport {
            check,
            verdict: Verdict::Inconclusive,
            summary: summary.into(),
            witnesses: Vec::new(),
            evidence: Vec::new(),
        }
    }

    pub fn with_evidence(mut self, label: impl Into<String>, value: XReal) -> Self {
        self.evidence.push(Evidence { label: label.into(), value });
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
