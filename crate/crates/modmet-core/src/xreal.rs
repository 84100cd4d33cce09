//! Extended nonnegative reals `[0, +inf]`, the common codomain of modulars.

use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::Add;

/// A value in `[0, +inf]`. Never NaN, never negative.
///
/// Addition saturates at `+inf`; scalar multiplication uses the convention
/// `0 * inf = 0` so that convex combinations with zero weight stay evaluable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XReal(f64);

impl XReal {
    pub const ZERO: XReal = XReal(0.0);
    pub const ONE: XReal = XReal(1.0);
    pub const INFINITY: XReal = XReal(f64::INFINITY);

    /// Accepts any nonnegative value including `+inf`; rejects NaN and negatives.
    pub fn new(value: f64) -> Option<XReal> {
        if value >= 0.0 {
            Some(XReal(value))
        } else {
            None
        }
    }

    /// Wraps a value known to be finite and nonnegative.
    pub fn finite(value: f64) -> XReal {
        assert!(
            value.is_finite() && value >= 0.0,
            "XReal::finite requires a finite nonnegative value"
        );
        XReal(value)
    }

    /// Wraps the output of a modular evaluation, panicking on NaN or negatives
    /// (those indicate a broken evaluator, not a numerical edge case).
    pub fn from_eval(value: f64) -> XReal {
        match XReal::new(value) {
            Some(x) => x,
            None => panic!("modular evaluation produced an invalid value (NaN or negative)"),
        }
    }

    /// The raw value; `+inf` is `f64::INFINITY`.
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    /// Multiplication by a nonnegative scalar (the scalar may be `+inf`),
    /// with `0 * inf = 0` in either position.
    pub fn scale(self, c: f64) -> XReal {
        assert!(!c.is_nan() && c >= 0.0, "XReal::scale requires c in [0, +inf]");
        if c == 0.0 || self.0 == 0.0 {
            XReal::ZERO
        } else {
            XReal(self.0 * c)
        }
    }

    pub fn min(self, other: XReal) -> XReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: XReal) -> XReal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Add for XReal {
    type Output = XReal;
    fn add(self, rhs: XReal) -> XReal {
        // nonneg + nonneg never produces NaN; inf absorbs
        XReal(self.0 + rhs.0)
    }
}

impl Sum for XReal {
    fn sum<I: Iterator<Item = XReal>>(iter: I) -> XReal {
        iter.fold(XReal::ZERO, |a, b| a + b)
    }
}

impl Eq for XReal {}

impl Ord for XReal {
    fn cmp(&self, other: &Self) -> Ordering {
        // total because NaN is excluded by construction
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for XReal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(XReal::INFINITY.scale(0.0), XReal::ZERO);
        assert_eq!(XReal::ZERO.scale(f64::INFINITY), XReal::ZERO);
    }

    #[test]
    fn infinity_absorbs_addition_and_positive_scaling() {
        assert_eq!(XReal::INFINITY + XReal::finite(3.0), XReal::INFINITY);
        assert_eq!(XReal::INFINITY.scale(0.5), XReal::INFINITY);
        assert_eq!(XReal::finite(2.0).scale(f64::INFINITY), XReal::INFINITY);
    }

    #[test]
    fn order_is_total_with_infinity_on_top() {
        let mut v = [XReal::INFINITY, XReal::ZERO, XReal::finite(1.5)];
        v.sort();
        assert_eq!(v, [XReal::ZERO, XReal::finite(1.5), XReal::INFINITY]);
        assert!(XReal::finite(1e300) < XReal::INFINITY);
    }

    #[test]
    fn new_rejects_nan_and_negatives() {
        assert!(XReal::new(f64::NAN).is_none());
        assert!(XReal::new(-1e-12).is_none());
        assert!(XReal::new(f64::INFINITY).is_some());
    }

    #[test]
    fn display_uses_inf_token() {
        extern crate std;
        use std::string::ToString;
        assert_eq!(XReal::INFINITY.to_string(), "inf");
        assert_eq!(XReal::finite(0.25).to_string(), "0.25");
    }
}
