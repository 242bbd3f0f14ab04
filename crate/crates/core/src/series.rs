//! Rational generating functions with exact Taylor expansion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("denominator has zero constant term")]
    SingularAtZero,
    #[error("coefficient {index} is not an integer")]
    NonIntegral { index: usize },
}

/// `numerator(X) / denominator(X)` with integer coefficients, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    numerator: Vec<BigInt>,
    denominator: Vec<BigInt>,
    cache: Vec<BigInt>,
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(base: &[BigInt], exp: usize) -> Vec<BigInt> {
    (0..exp).fold(vec![BigInt::one()], |acc, _| poly_mul(&acc, base))
}

impl PowerSeries {
    pub fn new(numerator: Vec<BigInt>, denominator: Vec<BigInt>) -> Result<Self, SeriesError> {
        if denominator.first().is_none_or(|c| c.is_zero()) {
            return Err(SeriesError::SingularAtZero);
        }
        Ok(Self {
            numerator,
            denominator,
            cache: Vec::new(),
        })
    }

    /// `X^{k+1} (2X - 3)^{k-1} / (X - 1)^{k+1}`, whose coefficients are the
    /// values of the top-slice polynomial `R_k(n)`.
    pub fn top_slice_generating_function(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        let two_x_minus_three = [BigInt::from(-3), BigInt::from(2)];
        let x_minus_one = [BigInt::from(-1), BigInt::from(1)];
        let mut numerator = vec![BigInt::zero(); k + 1];
        numerator.extend(poly_pow(&two_x_minus_three, k - 1));
        let denominator = poly_pow(&x_minus_one, k + 1);
        Self::new(numerator, denominator).expect("(X - 1)^(k+1) is invertible at 0")
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.denominator
    }

    /// The first `count` Taylor coefficients at `X = 0`, by exact long
    /// division. Extends the internal cache as needed.
    pub fn coefficients(&mut self, count: usize) -> Result<&[BigInt], SeriesError> {
        let lead = self.denominator[0].clone();
        while self.cache.len() < count {
            let j = self.cache.len();
            let mut acc = self.numerator.get(j).cloned().unwrap_or_default();
            for (i, d) in self.denominator.iter().enumerate().skip(1).take(j) {
                acc -= d * &self.cache[j - i];
            }
            let (quot, rem) = acc.div_rem(&lead);
            if !rem.is_zero() {
                return Err(SeriesError::NonIntegral { index: j });
            }
            self.cache.push(quot);
        }
        Ok(&self.cache[..count])
    }
}
