//! Scalar abstraction shared by the closed-form rate analysis.
//!
//! Everything in [`crate::rate`] only needs field arithmetic and ordering, so
//! it is written once against [`Scalar`] and instantiated for `f32`, `f64`
//! and exact rationals ([`Rational`]).

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Exact rational scalar. `i128` keeps the short expressions used here far
/// away from overflow.
pub type Rational = Ratio<i128>;

/// Ordered field element usable by the rate-region code.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + ToPrimitive + FromPrimitive + Debug + Send + Sync + 'static
{
    /// Slack used for containment tests and vertex deduplication.
    fn tolerance() -> Self;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("small integer") / Self::from_i64(den).expect("small integer")
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

impl Scalar for Rational {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
}

/// `true` when `x` lies in the closed unit interval.
pub(crate) fn in_unit_interval<T: Scalar>(x: T) -> bool {
    x >= T::zero() && x <= T::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_from_ratio_is_reduced() {
        let r = Rational::from_ratio(64, 70);
        assert_eq!(r, Ratio::new(32, 35));
    }

    #[test]
    fn min_max_helpers() {
        assert_eq!(1.5f64.max_of(2.0), 2.0);
        assert_eq!(1.5f64.min_of(2.0), 1.5);
        assert_eq!(Rational::from_ratio(1, 3).max_of(Rational::from_ratio(1, 4)), Rational::from_ratio(1, 3));
    }

    #[test]
    fn unit_interval() {
        assert!(in_unit_interval(0.0f64));
        assert!(in_unit_interval(1.0f32));
        assert!(!in_unit_interval(-1e-12f64));
        assert!(!in_unit_interval(Rational::from_ratio(36, 35)));
    }
}
