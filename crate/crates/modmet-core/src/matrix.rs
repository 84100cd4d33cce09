//! Symmetric extended-distance matrices with pseudometric checks and chaining.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{check_index, CoreError, Result};
use crate::xreal::XReal;

/// A triangle-inequality excess: `d(i,j) > d(i,k) + d(k,j)` by `excess`
/// (endpoints `i`, `j`; intermediate `k`).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub excess: f64,
}

/// Square symmetric matrix of `XReal` with zero diagonal and a provenance tag
/// naming the gauge (or construction) that produced it. Zeros off the diagonal
/// are permitted (pseudometric); the triangle inequality is checked separately.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<XReal>,
    provenance: String,
}

impl DistanceMatrix {
    pub fn from_entries(n: usize, entries: Vec<XReal>, provenance: impl Into<String>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(CoreError::InvalidMatrix(alloc::format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        let m = DistanceMatrix { n, entries, provenance: provenance.into() };
        for i in 0..n {
            if !m.get(i, i).is_zero() {
                return Err(CoreError::InvalidMatrix(alloc::format!(
                    "nonzero diagonal at ({i},{i})"
                )));
            }
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(CoreError::InvalidMatrix(alloc::format!(
                        "asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Builds from a symmetric generator evaluated on `i <= j` only.
    pub fn from_fn(
        n: usize,
        provenance: impl Into<String>,
        mut f: impl FnMut(usize, usize) -> Result<XReal>,
    ) -> Result<Self> {
        let mut entries = alloc::vec![XReal::ZERO; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j)?;
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(DistanceMatrix { n, entries, provenance: provenance.into() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn get(&self, i: usize, j: usize) -> XReal {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[XReal] {
        &self.entries
    }

    /// All triangle-inequality violations with excess beyond `tol`,
    /// in lexicographic (i,j,k) order.
    pub fn triangle_violations(&self, tol: f64) -> Vec<TriangleViolation> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let dij = self.get(i, j);
                for k in 0..self.n {
                    let path = self.get(i, k) + self.get(k, j);
                    if path.is_finite() {
                        let excess = dij.value() - path.value();
                        if excess > tol {
                            out.push(TriangleViolation { i, j, k, excess });
                        }
                    }
                    // dij infinite with infinite path is consistent
                }
            }
        }
        out
    }

    pub fn is_pseudometric(&self, tol: f64) -> bool {
        self.triangle_violations(tol).is_empty()
    }

    /// Shortest-path (min-plus) closure; restores the triangle inequality.
    pub fn chained(&self, provenance: impl Into<String>) -> DistanceMatrix {
        let n = self.n;
        let mut d = self.entries.clone();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i * n + k] + d[k * n + j];
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                    }
                }
            }
        }
        DistanceMatrix { n, entries: d, provenance: provenance.into() }
    }

    /// Entrywise scaling by a positive finite constant.
    pub fn scaled(&self, c: f64) -> DistanceMatrix {
        assert!(c > 0.0 && c.is_finite());
        let entries = self.entries.iter().map(|x| x.scale(c)).collect();
        DistanceMatrix { n: self.n, entries, provenance: self.provenance.clone() }
    }

    /// Open ball `{z : d(center, z) < radius}`, ascending indices.
    pub fn ball(&self, center: usize, radius: f64) -> Vec<usize> {
        let r = XReal::new(radius).expect("ball radius must be nonnegative");
        (0..self.n).filter(|&z| self.get(center, z) < r).collect()
    }

    /// Largest finite entry, if any.
    pub fn max_finite(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter(|x| x.is_finite())
            .map(|x| x.value())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    /// Smallest strictly positive entry, if any.
    pub fn min_positive(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter(|x| x.is_finite() && !x.is_zero())
            .map(|x| x.value())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
    }

    pub(crate) fn check_square(&self, other: &DistanceMatrix) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(CoreError::DimensionMismatch { expected: self.n, got: other.n })
        }
    }

    pub(crate) fn check_point(&self, i: usize) -> Result<()> {
        check_index(i, self.n)
    }
}
