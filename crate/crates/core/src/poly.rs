//! Counting polynomials in the guarded binomial basis and their monomial
//! expansion.
//!
//! A [`BinomialPoly`] is `Σ c · [n + q - m choose q]`. The basis is the
//! primary representation: coefficients stay nonnegative integers and
//! guarded evaluation is exact for every `n`. [`RationalPoly`] is the
//! derived monomial view, valid once every binomial top is nonnegative.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::metrics::{Metric, Radius};
use crate::scalar::{
    from_i64, from_u64, generalized_binomial, guarded_binomial, Coefficient, SignedCoefficient,
};

/// `coef · [n + q - m choose q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term<T> {
    pub coef: T,
    pub m: usize,
    pub q: usize,
}

impl<T> Term<T> {
    /// The binomial top is `n + offset`.
    pub fn offset(&self) -> i64 {
        self.q as i64 - self.m as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialPoly<T> {
    terms: Vec<Term<T>>,
    pub metric: Option<Metric>,
    pub radius: Option<Radius>,
}

impl<T: Coefficient> Default for BinomialPoly<T> {
    fn default() -> Self {
        Self {
            terms: Vec::new(),
            metric: None,
            radius: None,
        }
    }
}

impl<T: Coefficient> BinomialPoly<T> {
    /// Merges repeated `(m, q)` pairs, drops zero terms and sorts by `(q, m)`.
    pub fn from_terms(terms: impl IntoIterator<Item = Term<T>>) -> Self {
        let mut terms: Vec<Term<T>> = terms.into_iter().collect();
        terms.sort_by_key(|t| (t.q, t.m));
        let mut merged: Vec<Term<T>> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if (last.q, last.m) == (t.q, t.m) => {
                    last.coef = last.coef.clone() + t.coef;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coef.is_zero());
        Self {
            terms: merged,
            metric: None,
            radius: None,
        }
    }

    /// The constant polynomial `c` (as `c · [n choose 0]`).
    pub fn constant(c: T) -> Self {
        Self::from_terms([Term {
            coef: c,
            m: 0,
            q: 0,
        }])
    }

    pub fn with_label(mut self, metric: Metric, radius: Radius) -> Self {
        self.metric = Some(metric);
        self.radius = Some(radius);
        self
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `q` with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.q).max()
    }

    pub fn coefficient(&self, m: usize, q: usize) -> T {
        self.terms
            .iter()
            .find(|t| t.m == m && t.q == q)
            .map(|t| t.coef.clone())
            .unwrap_or_else(T::zero)
    }

    /// Exact count: binomials with a negative top contribute zero.
    pub fn eval_guarded(&self, n: u64) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| {
            let top = n as i64 + t.offset();
            acc + t.coef.clone() * guarded_binomial::<T>(top, t.q as u64)
        })
    }

    /// Plain polynomial evaluation (generalized binomials, no guard). Agrees
    /// with [`BinomialPoly::eval_guarded`] once `n + q - m >= 0` for all terms.
    pub fn eval_polynomial<S>(&self, n: i64) -> S
    where
        S: SignedCoefficient + From<T>,
    {
        self.terms.iter().fold(S::zero(), |acc, t| {
            acc + S::from(t.coef.clone()) * generalized_binomial::<S>(n + t.offset(), t.q as u64)
        })
    }

    /// Smallest `n` from which guarded and plain evaluation agree.
    pub fn polynomial_from(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| (-t.offset()).max(0) as u64)
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned());
        out.metric = self.metric.or(other.metric);
        out.radius = self.radius.max(other.radius);
        out
    }

    /// Keeps the terms matching `keep`.
    pub fn filter(&self, keep: impl Fn(&Term<T>) -> bool) -> Self {
        Self {
            terms: self.terms.iter().filter(|t| keep(t)).cloned().collect(),
            metric: self.metric,
            radius: self.radius,
        }
    }

    /// Exact monomial expansion.
    pub fn to_rational<S>(&self) -> RationalPoly<S>
    where
        S: SignedCoefficient + From<T>,
    {
        let mut acc = RationalPoly::<S>::zero();
        for t in &self.terms {
            acc = acc.add(&RationalPoly::binomial(t.offset(), t.q).scale(&S::from(t.coef.clone())));
        }
        acc
    }

    pub fn to_document(&self) -> BinomialDocument {
        BinomialDocument {
            metric: self.metric,
            radius: self.radius,
            basis: Basis::Binomial,
            terms: self
                .terms
                .iter()
                .map(|t| TermDocument {
                    coef: t.coef.to_string(),
                    m: t.m,
                    q: t.q,
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &BinomialDocument) -> Result<Self, T::Err>
    where
        T: FromStr,
    {
        let terms = doc
            .terms
            .iter()
            .map(|t| {
                Ok(Term {
                    coef: t.coef.parse()?,
                    m: t.m,
                    q: t.q,
                })
            })
            .collect::<Result<Vec<_>, T::Err>>()?;
        let mut poly = Self::from_terms(terms);
        poly.metric = doc.metric;
        poly.radius = doc.radius;
        Ok(poly)
    }
}

impl<T: Coefficient> fmt::Display for BinomialPoly<T> {
    /// `c·[n-a choose q] + ...`, highest `q` first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let offset = t.offset();
            let top = match offset.cmp(&0) {
                std::cmp::Ordering::Less => format!("n-{}", -offset),
                std::cmp::Ordering::Equal => "n".to_string(),
                std::cmp::Ordering::Greater => format!("n+{offset}"),
            };
            write!(f, "{}·[{} choose {}]", t.coef, top, t.q)?;
        }
        Ok(())
    }
}

/// Polynomial in `n` with exact rational coefficients, ascending by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly<S: Clone + Integer> {
    coefficients: Vec<Ratio<S>>,
}

impl<S: SignedCoefficient> RationalPoly<S> {
    pub fn zero() -> Self {
        Self {
            coefficients: Vec::new(),
        }
    }

    pub fn from_coefficients(coefficients: Vec<Ratio<S>>) -> Self {
        let mut p = Self { coefficients };
        p.trim();
        p
    }

    /// `C(n + offset, q)` expanded: `Π_{t<q} (n + offset - t) / q!`.
    pub fn binomial(offset: i64, q: usize) -> Self {
        let mut ints: Vec<S> = vec![S::one()];
        let mut factorial = S::one();
        for t in 0..q {
            let shift: S = from_i64(offset - t as i64);
            let mut next = vec![S::zero(); ints.len() + 1];
            for (d, c) in ints.iter().enumerate() {
                next[d + 1] = next[d + 1].clone() + c.clone();
                next[d] = next[d].clone() + c.clone() * shift.clone();
            }
            ints = next;
            factorial = factorial * from_u64::<S>(t as u64 + 1);
        }
        Self::from_coefficients(
            ints.into_iter()
                .map(|c| Ratio::new(c, factorial.clone()))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(|c| c.is_zero()) {
            self.coefficients.pop();
        }
    }

    pub fn coefficients(&self) -> &[Ratio<S>] {
        &self.coefficients
    }

    /// Coefficient of `n^d`.
    pub fn coefficient(&self, d: usize) -> Ratio<S> {
        self.coefficients
            .get(d)
            .cloned()
            .unwrap_or_else(Ratio::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading(&self) -> Ratio<S> {
        self.coefficients
            .last()
            .cloned()
            .unwrap_or_else(Ratio::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coefficients.len().max(other.coefficients.len());
        Self::from_coefficients(
            (0..len)
                .map(|d| self.coefficient(d) + other.coefficient(d))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coefficients(
            self.coefficients
                .iter()
                .map(|x| x * Ratio::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn eval(&self, n: i64) -> Ratio<S> {
        let x = Ratio::from_integer(from_i64::<S>(n));
        self.coefficients
            .iter()
            .rev()
            .fold(Ratio::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> S {
        self.coefficients
            .iter()
            .fold(S::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Integer numerators over [`RationalPoly::denominator`].
    pub fn numerators(&self) -> Vec<S> {
        let d = Ratio::from_integer(self.denominator());
        self.coefficients
            .iter()
            .map(|c| (c * d.clone()).to_integer())
            .collect()
    }

    /// Highest degree `d` such that `self` and `other` agree on every degree
    /// `>= d`; `0` when they are equal.
    pub fn agreement_floor(&self, other: &Self) -> usize {
        let diff = self.sub(other);
        diff.degree().map_or(0, |d| d + 1)
    }

    pub fn to_document(&self) -> MonomialDocument
    where
        S: fmt::Display,
    {
        MonomialDocument {
            metric: None,
            radius: None,
            basis: Basis::Monomial,
            denominator: self.denominator().to_string(),
            coefficients: self.numerators().iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl<S: SignedCoefficient> fmt::Display for RationalPoly<S> {
    /// `(n^2 + n - 6)/2` style: integer numerator over the common denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nums = self.numerators();
        let den = self.denominator();
        let mut body = String::new();
        for (d, c) in nums.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = c.abs();
            if body.is_empty() {
                if negative {
                    body.push('-');
                }
            } else {
                body.push_str(if negative { " - " } else { " + " });
            }
            let unit = magnitude.is_one() && d > 0;
            if !unit {
                body.push_str(&magnitude.to_string());
            }
            match d {
                0 => {}
                1 => body.push('n'),
                _ => body.push_str(&format!("n^{d}")),
            }
        }
        if body.is_empty() {
            body.push('0');
        }
        if den.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Binomial,
    Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub coef: String,
    pub m: usize,
    pub q: usize,
}

/// Wire form of a [`BinomialPoly`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialDocument {
    pub metric: Option<Metric>,
    pub radius: Option<Radius>,
    pub basis: Basis,
    pub terms: Vec<TermDocument>,
}

/// Wire form of a [`RationalPoly`]: integer numerators ascending in degree
/// over one common denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialDocument {
    pub metric: Option<Metric>,
    pub radius: Option<Radius>,
    pub basis: Basis,
    pub denominator: String,
    pub coefficients: Vec<String>,
}
