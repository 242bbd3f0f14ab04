//! Integer scalar abstraction shared by the counting polynomials.
//!
//! Counting polynomials are evaluated exactly, so the scalar is always an
//! integer type. Machine integers (`u64`, `i128`, ...) are fine for small
//! radii; [`num_bigint::BigUint`] and [`num_bigint::BigInt`] cover the rest.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

/// An exact integer type usable as a polynomial coefficient.
pub trait Coefficient:
    Integer + Clone + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Coefficient for T where
    T: Integer + Clone + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// A signed exact integer, needed once polynomials leave the binomial basis.
pub trait SignedCoefficient: Coefficient + Signed {}

impl<T> SignedCoefficient for T where T: Coefficient + Signed {}

pub(crate) fn from_u64<T: Coefficient>(value: u64) -> T {
    T::from_u64(value).expect("scalar type too narrow for value")
}

pub(crate) fn from_i64<T: SignedCoefficient>(value: i64) -> T {
    T::from_i64(value).expect("scalar type too narrow for value")
}

/// Ordinary binomial coefficient `C(top, bottom)` for `top >= 0`.
///
/// Uses the multiplicative recurrence, every intermediate quotient is exact.
pub fn binomial<T: Coefficient>(top: u64, bottom: u64) -> T {
    if bottom > top {
        return T::zero();
    }
    let bottom = bottom.min(top - bottom);
    let mut acc = T::one();
    for t in 0..bottom {
        acc = acc * from_u64::<T>(top - t) / from_u64::<T>(t + 1);
    }
    acc
}

/// Guarded binomial `[top choose bottom]`: the ordinary binomial for
/// `top >= 0` and zero for `top < 0`.
pub fn guarded_binomial<T: Coefficient>(top: i64, bottom: u64) -> T {
    if top < 0 {
        T::zero()
    } else {
        binomial(top as u64, bottom)
    }
}

/// Generalized binomial `top (top-1) ... (top-bottom+1) / bottom!`, defined
/// for every integer `top`. Equals `(-1)^bottom C(bottom-top-1, bottom)` when
/// `top < 0`.
pub fn generalized_binomial<T: SignedCoefficient>(top: i64, bottom: u64) -> T {
    if top >= 0 {
        return binomial(top as u64, bottom);
    }
    let magnitude: T = binomial((bottom as i64 - top - 1) as u64, bottom);
    if bottom.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::{BigInt, BigUint};

    #[test]
    fn small_binomials() {
        assert_eq!(binomial::<u64>(5, 2), 10);
        assert_eq!(binomial::<u64>(4, 0), 1);
        assert_eq!(binomial::<u64>(2, 3), 0);
        assert_eq!(
            binomial::<BigUint>(60, 30).to_string(),
            "118264581564861424"
        );
    }

    #[test]
    fn guard_only_triggers_on_negative_top() {
        assert_eq!(guarded_binomial::<u64>(-1, 0), 0);
        assert_eq!(guarded_binomial::<u64>(-3, 2), 0);
        assert_eq!(guarded_binomial::<u64>(0, 0), 1);
        assert_eq!(guarded_binomial::<u64>(1, 2), 0);
        assert_eq!(guarded_binomial::<u64>(4, 2), 6);
    }

    #[test]
    fn generalized_matches_falling_factorial() {
        // (-2)(-3)(-4)/6 = -4
        assert_eq!(generalized_binomial::<i64>(-2, 3), -4);
        assert_eq!(generalized_binomial::<BigInt>(-1, 2), BigInt::from(1));
        assert_eq!(generalized_binomial::<i64>(-1, 0), 1);
        assert_eq!(generalized_binomial::<i64>(7, 3), 35);
    }
}
