//! Scalar max-plus arithmetic.
//!
//! The carrier is the reals extended with the additive identity `eps`
//! (minus infinity). Addition is `max`, multiplication is ordinary `+`,
//! and the multiplicative identity `e` is the number zero. Both
//! operations are exact for integer-valued operands, so equality checks
//! in the test suites can be literal.

use std::cmp::Ordering;
use std::fmt;

/// A max-plus scalar: either a finite time value or the identity `eps`.
///
/// Finite values are stored as `f64`; `eps` is the IEEE negative
/// infinity, which no finite value compares equal to. NaN and positive
/// infinity are kept out of the carrier by the constructors.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct MaxPlusScalar(f64);

/// Additive identity: the neutral element of `oplus` and the absorbing
/// element of `otimes`.
pub const EPS: MaxPlusScalar = MaxPlusScalar(f64::NEG_INFINITY);

/// Multiplicative identity: the number zero.
pub const E: MaxPlusScalar = MaxPlusScalar(0.0);

impl MaxPlusScalar {
    /// Wraps a finite number. Panics on NaN or infinities, which are not
    /// part of the carrier (use [`EPS`] for the additive identity).
    pub fn finite(value: f64) -> Self {
        assert!(
            value.is_finite(),
            "max-plus finite value must be a finite number, got {value}"
        );
        MaxPlusScalar(value)
    }

    pub fn is_eps(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The finite value, or `None` for `eps`.
    pub fn as_finite(self) -> Option<f64> {
        if self.is_eps() {
            None
        } else {
            Some(self.0)
        }
    }

    /// x ⊕ y = max(x, y), with `eps` as the minimum element.
    pub fn oplus(self, other: Self) -> Self {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }

    /// x ⊗ y = x + y for finite operands; `eps` absorbs.
    pub fn otimes(self, other: Self) -> Self {
        if self.is_eps() || other.is_eps() {
            EPS
        } else {
            MaxPlusScalar(self.0 + other.0)
        }
    }
}

/// Fold of `oplus` over a sequence; the empty fold is `eps`.
pub fn big_oplus<I>(values: I) -> MaxPlusScalar
where
    I: IntoIterator<Item = MaxPlusScalar>,
{
    values.into_iter().fold(EPS, MaxPlusScalar::oplus)
}

/// Fold of `otimes` over a sequence; the empty fold is `e`.
///
/// The empty case matters: the closed-form solutions contain products
/// over ranges that are empty at the boundary customers, and those must
/// evaluate to the multiplicative identity.
pub fn big_otimes<I>(values: I) -> MaxPlusScalar
where
    I: IntoIterator<Item = MaxPlusScalar>,
{
    values.into_iter().fold(E, MaxPlusScalar::otimes)
}

impl Eq for MaxPlusScalar {}

impl Ord for MaxPlusScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        // NaN is excluded at construction, so the partial order is total.
        self.0
            .partial_cmp(&other.0)
            .expect("max-plus carrier contains no NaN")
    }
}

impl fmt::Display for MaxPlusScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_eps() {
            write!(f, "eps")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Debug for MaxPlusScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: f64) -> MaxPlusScalar {
        MaxPlusScalar::finite(v)
    }

    #[test]
    fn oplus_is_max() {
        assert_eq!(fin(3.0).oplus(fin(5.0)), fin(5.0));
        assert_eq!(fin(7.0).oplus(EPS), fin(7.0));
        assert_eq!(fin(4.0).oplus(fin(4.0)), fin(4.0));
        assert_eq!(EPS.oplus(EPS), EPS);
    }

    #[test]
    fn otimes_is_plus() {
        assert_eq!(fin(3.0).otimes(fin(5.0)), fin(8.0));
        assert_eq!(fin(9.0).otimes(E), fin(9.0));
        assert_eq!(fin(2.0).otimes(EPS), EPS);
        assert_eq!(EPS.otimes(EPS), EPS);
    }

    #[test]
    fn big_oplus_folds() {
        assert_eq!(big_oplus([fin(1.0), fin(4.0), fin(2.0)]), fin(4.0));
        assert_eq!(big_oplus([]), EPS);
        assert_eq!(big_oplus([EPS, EPS, fin(3.0)]), fin(3.0));
    }

    #[test]
    fn big_otimes_folds() {
        assert_eq!(big_otimes([fin(1.0), fin(4.0), fin(2.0)]), fin(7.0));
        assert_eq!(big_otimes([]), E);
        assert_eq!(big_otimes([EPS, fin(3.0)]), EPS);
    }

    #[test]
    fn eps_is_distinct_from_finite_values() {
        assert!(EPS.is_eps());
        assert!(!fin(0.0).is_eps());
        assert_ne!(fin(-1e300), EPS);
        assert_eq!(EPS.as_finite(), None);
        assert_eq!(fin(2.5).as_finite(), Some(2.5));
    }

    #[test]
    fn renders_eps_and_e() {
        assert_eq!(EPS.to_string(), "eps");
        assert_eq!(E.to_string(), "0");
        assert_eq!(fin(4.5).to_string(), "4.5");
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn finite_rejects_nan() {
        let _ = MaxPlusScalar::finite(f64::NAN);
    }
}
