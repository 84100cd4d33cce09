//! Error type shared across the crate.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A tolerance or other parameter that must be strictly positive was not.
    NonPositiveTolerance(f64),
    EmptyGrid,
    /// λ-grid values must be strictly increasing positive reals within [floor, cap].
    InvalidGrid(String),
    IndexOutOfBounds { index: usize, len: usize },
    DimensionMismatch { expected: usize, got: usize },
    /// A matrix failed a structural invariant (shape, symmetry, diagonal).
    InvalidMatrix(String),
    /// The base distance matrix violates the triangle inequality beyond tolerance.
    NotAMetric { i: usize, j: usize, k: usize, excess: f64 },
    MissingBaseDistance,
    /// A builder parameter function failed its sampled validation.
    BuilderInvalid(String),
    /// λ ↦ w(λ,i,j) increased between the two sampled scales.
    NotNonincreasing { lambda_lo: f64, lambda_hi: f64, i: usize, j: usize },
    /// The bisection predicate flipped from true back to false.
    NonMonotonePredicate { lambda_true: f64, lambda_false: f64 },
    /// φ(a+b) < φ(a) + φ(b) at the sampled pair.
    NonSuperadditive { a: f64, b: f64 },
    /// Parameter outside its mathematical domain.
    Domain(String),
    /// The integrand is not tagged convex but the operation requires convexity.
    NonConvexIntegrand,
    /// A λ-grid search ran out of grid without satisfying the stage predicate.
    GridExhausted { stage: &'static str, detail: String },
    /// Error produced while evaluating a gauge at a specific pair.
    AtPair { i: usize, j: usize, source: Box<CoreError> },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::NonPositiveTolerance(t) => write!(f, "tolerance must be positive, got {t}"),
            CoreError::EmptyGrid => write!(f, "lambda grid is empty"),
            CoreError::InvalidGrid(msg) => write!(f, "invalid lambda grid: {msg}"),
            CoreError::IndexOutOfBounds { index, len } => {
                write!(f, "point index {index} out of bounds for space of {len} points")
            }
            CoreError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            CoreError::InvalidMatrix(msg) => write!(f, "invalid distance matrix: {msg}"),
            CoreError::NotAMetric { i, j, k, excess } => write!(
                f,
                "triangle inequality fails at ({i},{j},{k}) by {excess}"
            ),
            CoreError::MissingBaseDistance => write!(f, "point space carries no base distance"),
            CoreError::BuilderInvalid(msg) => write!(f, "builder parameter invalid: {msg}"),
            CoreError::NotNonincreasing { lambda_lo, lambda_hi, i, j } => write!(
                f,
                "w(lambda,{i},{j}) increases between lambda={lambda_lo} and lambda={lambda_hi}"
            ),
            CoreError::NonMonotonePredicate { lambda_true, lambda_false } => write!(
                f,
                "predicate is true at lambda={lambda_true} but false at lambda={lambda_false}"
            ),
            CoreError::NonSuperadditive { a, b } => {
                write!(f, "phi({a}+{b}) < phi({a}) + phi({b}): phi is not superadditive")
            }
            CoreError::Domain(msg) => write!(f, "domain error: {msg}"),
            CoreError::NonConvexIntegrand => {
                write!(f, "operation requires an integrand tagged convex in t")
            }
            CoreError::GridExhausted { stage, detail } => {
                write!(f, "lambda grid exhausted in stage '{stage}': {detail}")
            }
            CoreError::AtPair { i, j, source } => write!(f, "at pair ({i},{j}): {source}"),
        }
    }
}

impl core::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;

pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(CoreError::IndexOutOfBounds { index, len })
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(CoreError::NonPositiveTolerance(tol))
    }
}
