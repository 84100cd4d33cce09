//! Finite ground sets, optionally carrying a base distance matrix.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{check_index, CoreError, Result};
use crate::matrix::DistanceMatrix;
use crate::xreal::XReal;

/// Default tolerance for base-metric validation: double-precision headroom
/// over accumulated rounding.
pub const TOL_METRIC: f64 = 1e-9;

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PointSpace {
    labels: Vec<String>,
    base: Option<DistanceMatrix>,
}

impl PointSpace {
    /// A bare point space with no base distance.
    pub fn new(labels: Vec<String>) -> PointSpace {
        PointSpace { labels, base: None }
    }

    /// Labels `p0..p{n-1}`.
    pub fn anonymous(n: usize) -> PointSpace {
        PointSpace::new((0..n).map(|i| alloc::format!("p{i}")).collect())
    }

    /// Attaches a base distance matrix, validating symmetry, zero diagonal
    /// (already enforced by [`DistanceMatrix`]) and the triangle inequality
    /// within `tol`.
    pub fn with_distance(labels: Vec<String>, base: DistanceMatrix, tol: f64) -> Result<PointSpace> {
        if base.n() != labels.len() {
            return Err(CoreError::DimensionMismatch { expected: labels.len(), got: base.n() });
        }
        if let Some(v) = base.triangle_violations(tol).first() {
            return Err(CoreError::NotAMetric { i: v.i, j: v.j, k: v.k, excess: v.excess });
        }
        Ok(PointSpace { labels, base: Some(base) })
    }

    /// Points on a line; distances are absolute coordinate differences,
    /// which satisfy the triangle inequality exactly.
    pub fn line(coords: &[f64]) -> PointSpace {
        let n = coords.len();
        let base = DistanceMatrix::from_fn(n, "line", |i, j| {
            Ok(XReal::finite(crate::math::abs(coords[i] - coords[j])))
        })
        .expect("line distances are finite");
        PointSpace {
            labels: (0..n).map(|i| alloc::format!("p{i}")).collect(),
            base: Some(base),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn base_distance(&self) -> Option<&DistanceMatrix> {
        self.base.as_ref()
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<XReal> {
        check_index(i, self.len())?;
        check_index(j, self.len())?;
        self.base
            .as_ref()
            .map(|m| m.get(i, j))
            .ok_or(CoreError::MissingBaseDistance)
    }
}
