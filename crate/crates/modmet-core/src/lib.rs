//! Numerical core for modular (pseudo)metric spaces.
//!
//! A modular (pseudo)metric is a scale-parameterized distance
//! `w(λ, x, y) ∈ [0, ∞]` that vanishes on the diagonal, is symmetric, and
//! satisfies the split-scale triangle inequality
//! `w(λ+μ, x, y) ≤ w(λ, x, z) + w(μ, z, y)`. This crate makes that theory
//! computable on finite point spaces:
//!
//! - [`xreal`]: extended nonnegative reals `[0, ∞]` with `0·∞ = 0`;
//! - [`modular`]: families `w(λ, i, j)` with builders (scaled, saturating,
//!   exponential, step) and declared structural claims;
//! - [`axioms`]: sampled verification of the modular axioms, φ-convexity,
//!   modular-set membership, regularizations and scale inverses;
//! - [`gauge`]: the monotone-infimum engine and the induced gauges `d⁰`,
//!   `d*`, the φ-gauges and the Luxemburg gauge, with full gauge matrices;
//! - [`topology`]: balls, entourages `Vₙ`, the `2⁻ⁿ` metrization,
//!   finite-resolution topology comparison, the Δ₂ diagnostic and the
//!   adequacy defect;
//! - [`fuzzy`]: the standard fuzzy metric `t/(t+d)` and its ball refinement;
//! - [`compactness`]: Cauchy notions and their equivalences, greedy ε-nets,
//!   Cauchy subsequence extraction and finite-sample compactness verdicts;
//! - [`orlicz`]: discrete measure spaces, Orlicz/Musielak integrands, induced
//!   modulars, and the Kolmogorov–Riesz-type compactness pipeline.
//!
//! Everything universally quantified over a continuum (all λ > 0, all
//! sequences) is checked at a finite sampled resolution: failures come with
//! exact witnesses, passes certify only the sampled resolution. Reports say
//! which of the two they mean.
//!
//! The crate is `no_std` + `alloc`; float transcendentals go through `libm`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod axioms;
pub mod compactness;
pub mod error;
pub mod fuzzy;
pub mod gauge;
pub(crate) mod math;
pub mod matrix;
pub mod modular;
pub mod orlicz;
pub mod report;
pub mod space;
pub mod topology;
pub mod xreal;

pub use error::{CoreError, Result};
pub use matrix::{DistanceMatrix, TriangleViolation};
pub use modular::{Claims, LambdaGrid, ModularFamily};
pub use report::{DiagnosticReport, Evidence, Verdict, Witness};
pub use space::{PointSpace, TOL_METRIC};
pub use xreal::XReal;
