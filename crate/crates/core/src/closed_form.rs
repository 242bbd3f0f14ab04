//! Closed-form values of `β_{ℓ1}(2k, m, q)` on the families where they are
//! known. Anything else is [`ClosedForm::NotCovered`]; this module never
//! falls back to enumeration, so it stays an independent check on the
//! convolution tables.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Pow, Signed};

use crate::scalar::guarded_binomial;

/// A family of parameters `(k, m, q)` with a known formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `m = k + q`: `C(k-1, q-1) 3^(k-q)` for `1 <= q <= k`.
    TopSlice,
    /// `m = k + q - 1`: `4(k-3) C(k-4, q-1) 3^(k-q-3)` for `1 <= q <= k-3`, else 0.
    SecondSlice,
    /// `m = k + q - 2`: `4(k-5)((k-6) C(k-7, q-1) + 15 C(k-6, q-1)) 3^(k-q-6)`
    /// for `1 <= q <= k-5`, else 0.
    ThirdSlice,
    /// `m = k + q - 3`: `4(k-7) C(k-8, q-1) (8(k-q)^2 + 60(k-q) - 137) 3^(k-q-10)`
    /// for `1 <= q <= k-7`, else 0.
    FourthSlice,
    /// `m = 2k - 12`, `q = k - 8`, `k >= 9`: `36(k-8)`.
    Exceptional,
    /// `m = 2r`: zero beyond `k = r²`; `(r!)²` at `k = r²` for `q = 1`, else 0.
    MaxEven,
    /// `m = 2r + 1`: zero beyond `k = r² + r`; `(2r+1)(r!)²` at `k = r² + r`
    /// for `q = 1`, else 0.
    MaxOdd,
    /// `m - q > k` or `m < 2q`: always 0.
    SupportBound,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::TopSlice,
        Family::SecondSlice,
        Family::ThirdSlice,
        Family::FourthSlice,
        Family::Exceptional,
        Family::MaxEven,
        Family::MaxOdd,
        Family::SupportBound,
    ];

    /// The four slice families `m = k + q - j`, `j = 0..=3`.
    pub const SLICES: [Family; 4] = [
        Family::TopSlice,
        Family::SecondSlice,
        Family::ThirdSlice,
        Family::FourthSlice,
    ];

    /// For slice families, the `m` that goes with `(k, q)`.
    pub fn slice_size(self, k: usize, q: usize) -> Option<usize> {
        let depth = match self {
            Family::TopSlice => 0,
            Family::SecondSlice => 1,
            Family::ThirdSlice => 2,
            Family::FourthSlice => 3,
            _ => return None,
        };
        (k + q).checked_sub(depth)
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::TopSlice => "m=k+q",
            Family::SecondSlice => "m=k+q-1",
            Family::ThirdSlice => "m=k+q-2",
            Family::FourthSlice => "m=k+q-3",
            Family::Exceptional => "m=2k-12,q=k-8",
            Family::MaxEven => "max-distance m=2r",
            Family::MaxOdd => "max-distance m=2r+1",
            Family::SupportBound => "support bound",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedForm {
    Covered { family: Family, value: BigUint },
    NotCovered,
}

impl ClosedForm {
    pub fn value(&self) -> Option<&BigUint> {
        match self {
            ClosedForm::Covered { value, .. } => Some(value),
            ClosedForm::NotCovered => None,
        }
    }
}

fn c(top: i64, bottom: i64) -> BigInt {
    if bottom < 0 {
        return BigInt::from(0);
    }
    guarded_binomial(top, bottom as u64)
}

/// `value · 3^exp` in exact arithmetic; a negative exponent must still
/// leave an integer.
fn times_power_of_three(value: BigInt, exp: i64) -> BigUint {
    let three = BigInt::from(3);
    let scaled = if exp >= 0 {
        Ratio::from_integer(value * three.pow(exp as u32))
    } else {
        Ratio::new(value, three.pow((-exp) as u32))
    };
    assert!(
        scaled.is_integer(),
        "closed form produced the non-integer {scaled}"
    );
    let int = scaled.to_integer();
    assert!(
        !int.is_negative(),
        "closed form produced the negative value {int}"
    );
    int.to_biguint().expect("nonnegative")
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64)
        .map(BigUint::from)
        .fold(BigUint::one(), |a, b| a * b)
}

/// The value of one family at `(k, m, q)`, if `(k, m, q)` belongs to it.
pub fn family_value(family: Family, k: usize, m: usize, q: usize) -> Option<BigUint> {
    let (ki, qi) = (k as i64, q as i64);
    let zero = BigUint::from(0u32);
    if k == 0 || q == 0 {
        return None;
    }
    match family {
        Family::TopSlice | Family::SecondSlice | Family::ThirdSlice | Family::FourthSlice => {
            if family.slice_size(k, q) != Some(m) {
                return None;
            }
            let value = match family {
                Family::TopSlice => {
                    if q > k {
                        return Some(zero);
                    }
                    times_power_of_three(c(ki - 1, qi - 1), ki - qi)
                }
                Family::SecondSlice => {
                    if qi > ki - 3 {
                        return Some(zero);
                    }
                    times_power_of_three(
                        BigInt::from(4 * (ki - 3)) * c(ki - 4, qi - 1),
                        ki - qi - 3,
                    )
                }
                Family::ThirdSlice => {
                    if qi > ki - 5 {
                        return Some(zero);
                    }
                    let inner = BigInt::from(ki - 6) * c(ki - 7, qi - 1)
                        + BigInt::from(15) * c(ki - 6, qi - 1);
                    times_power_of_three(BigInt::from(4 * (ki - 5)) * inner, ki - qi - 6)
                }
                Family::FourthSlice => {
                    if qi > ki - 7 {
                        return Some(zero);
                    }
                    let d = ki - qi;
                    let quadratic = BigInt::from(8 * d * d + 60 * d - 137);
                    times_power_of_three(
                        BigInt::from(4 * (ki - 7)) * c(ki - 8, qi - 1) * quadratic,
                        d - 10,
                    )
                }
                _ => unreachable!(),
            };
            Some(value)
        }
        Family::Exceptional => {
            (k >= 9 && q == k - 8 && m == 2 * k - 12).then(|| BigUint::from(36 * (k as u64 - 8)))
        }
        Family::MaxEven => {
            if m < 2 || !m.is_multiple_of(2) {
                return None;
            }
            let r = m / 2;
            match k.cmp(&(r * r)) {
                std::cmp::Ordering::Greater => Some(zero),
                std::cmp::Ordering::Equal if q == 1 => Some(factorial(r).pow(2u32)),
                std::cmp::Ordering::Equal => Some(zero),
                std::cmp::Ordering::Less => None,
            }
        }
        Family::MaxOdd => {
            if m < 3 || m % 2 != 1 {
                return None;
            }
            let r = m / 2;
            match k.cmp(&(r * r + r)) {
                std::cmp::Ordering::Greater => Some(zero),
                std::cmp::Ordering::Equal if q == 1 => {
                    Some(BigUint::from(m) * factorial(r).pow(2u32))
                }
                std::cmp::Ordering::Equal => Some(zero),
                std::cmp::Ordering::Less => None,
            }
        }
        Family::SupportBound => (m < 2 * q || m > k + q).then_some(zero),
    }
}

/// Every family containing `(k, m, q)` with its value.
pub fn closed_form_families(k: usize, m: usize, q: usize) -> Vec<(Family, BigUint)> {
    Family::ALL
        .iter()
        .filter_map(|&f| family_value(f, k, m, q).map(|v| (f, v)))
        .collect()
}

/// `β_{ℓ1}(2k, m, q)` from the first family containing `(k, m, q)`.
pub fn closed_form_beta(k: usize, m: usize, q: usize) -> ClosedForm {
    match closed_form_families(k, m, q).into_iter().next() {
        Some((family, value)) => ClosedForm::Covered { family, value },
        None => ClosedForm::NotCovered,
    }
}

/// The `m = k + q - 2` formula with the linear term doubled:
/// `4(k-5)(2(k-6) C(k-7, q-1) + 15 C(k-6, q-1)) 3^(k-q-6)`. This variant
/// reproduces the enumerated counts where [`Family::ThirdSlice`] does not
/// (first at `k = 7`, `q = 1`: 136 enumerated against 128).
pub fn amended_third_slice(k: usize, q: usize) -> Option<BigUint> {
    let (ki, qi) = (k as i64, q as i64);
    if q == 0 || qi > ki - 5 {
        return None;
    }
    let inner =
        BigInt::from(2 * (ki - 6)) * c(ki - 7, qi - 1) + BigInt::from(15) * c(ki - 6, qi - 1);
    Some(times_power_of_three(
        BigInt::from(4 * (ki - 5)) * inner,
        ki - qi - 6,
    ))
}
