//! Sphere and ball polynomials, their truncations `Q_k` and `R_k`, the
//! top-slice generating function and the Hamming sphere formula.
//!
//! For `ℓ1`, the sphere of radius `2k` in `S_n` has `P_k(n)` elements, where
//! `P_k = Σ β(2k, m, q) [n + q - m choose q]` is built from the convolution
//! tables in [`crate::enumeration`].

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::closed_form::{family_value, Family};
use crate::enumeration::{EnumError, Enumerator};
use crate::metrics::{Metric, Radius};
use crate::poly::{BinomialPoly, Term};
use crate::scalar::binomial;
use crate::series::PowerSeries;

pub type CountPoly = BinomialPoly<BigUint>;

fn bound(metric: Metric, radius: Radius) -> Result<usize, EnumError> {
    if !metric.is_additive() {
        return Err(EnumError::NotAdditive(metric));
    }
    metric
        .growth_bound(radius)
        .map(|b| b as usize)
        .ok_or(EnumError::NoGrowthBound(metric))
}

/// `A_{D,n}(R)` as a polynomial in the guarded binomial basis.
pub fn sphere_polynomial(
    enumerator: &Enumerator,
    metric: Metric,
    radius: Radius,
) -> Result<CountPoly, EnumError> {
    sphere_polynomial_from_degree(enumerator, metric, radius, 0)
}

/// The terms of the sphere polynomial with `q >= min_q`. Needs connected
/// parts only up to size `N(R) + 2 - min_q`, so high-degree slices of large
/// radii stay cheap.
pub fn sphere_polynomial_from_degree(
    enumerator: &Enumerator,
    metric: Metric,
    radius: Radius,
    min_q: usize,
) -> Result<CountPoly, EnumError> {
    let n_bound = bound(metric, radius)?;
    let cap = (n_bound + 1).min((n_bound + 2).saturating_sub(min_q));
    let table = enumerator.beta_table_with_cap(metric, radius, 2 * n_bound, cap)?;
    let mut terms = Vec::new();
    for q in min_q..=n_bound {
        for m in 2 * q..=q + n_bound {
            let coef = table.beta(radius, m, q)?;
            terms.push(Term { coef, m, q });
        }
    }
    Ok(CountPoly::from_terms(terms).with_label(metric, radius))
}

/// `V_{D,n}(R)` as a polynomial: the identity plus `α`-weighted terms.
pub fn ball_polynomial(
    enumerator: &Enumerator,
    metric: Metric,
    radius: Radius,
) -> Result<CountPoly, EnumError> {
    let n_bound = bound(metric, radius)?;
    let table = enumerator.beta_table(metric, radius, 2 * n_bound)?;
    let mut terms = Vec::new();
    for q in 0..=n_bound {
        for m in 2 * q..=q + n_bound {
            terms.push(Term {
                coef: table.alpha(radius, m, q)?,
                m,
                q,
            });
        }
    }
    Ok(CountPoly::from_terms(terms).with_label(metric, radius))
}

/// `Q_k`: the `ℓ1` sphere polynomial at radius `2k` restricted to
/// `k + q - 3 <= m <= k + q`, plus `36(k-8) [n-k+4 choose k-8]` for `k >= 9`.
pub fn q_polynomial(enumerator: &Enumerator, k: usize) -> Result<CountPoly, EnumError> {
    q_polynomial_from_degree(enumerator, k, 1)
}

/// Terms of [`q_polynomial`] with `q >= min_q`.
pub fn q_polynomial_from_degree(
    enumerator: &Enumerator,
    k: usize,
    min_q: usize,
) -> Result<CountPoly, EnumError> {
    assert!(k >= 1, "k must be positive");
    let radius = Radius(2 * k as u64);
    let min_q = min_q.max(1);
    let cap = (k + 1).min(k + 2 - min_q.min(k + 1));
    let table = enumerator.beta_table_with_cap(Metric::L1, radius, 2 * k, cap)?;
    let mut terms = Vec::new();
    for q in min_q..=k {
        for m in (k + q).saturating_sub(3).max(2 * q)..=k + q {
            terms.push(Term {
                coef: table.beta(radius, m, q)?,
                m,
                q,
            });
        }
    }
    if k >= 9 && k - 8 >= min_q {
        terms.push(exceptional_term(k));
    }
    Ok(CountPoly::from_terms(terms).with_label(Metric::L1, radius))
}

fn exceptional_term(k: usize) -> Term<BigUint> {
    Term {
        coef: family_value(Family::Exceptional, k, 2 * k - 12, k - 8).expect("k >= 9"),
        m: 2 * k - 12,
        q: k - 8,
    }
}

/// `Q_k` assembled from the closed forms alone, with no enumeration.
pub fn q_polynomial_closed_form(k: usize) -> CountPoly {
    assert!(k >= 1, "k must be positive");
    let mut terms = Vec::new();
    for q in 1..=k {
        for family in Family::SLICES {
            let Some(m) = family.slice_size(k, q).filter(|&m| m >= 2 * q) else {
                continue;
            };
            if let Some(coef) = family_value(family, k, m, q) {
                terms.push(Term { coef, m, q });
            }
        }
    }
    if k >= 9 {
        terms.push(exceptional_term(k));
    }
    CountPoly::from_terms(terms).with_label(Metric::L1, Radius(2 * k as u64))
}

/// `R_k(n) = Σ_q C(k-1, q-1) 3^(k-q) [n - k choose q]`, the `m = k + q` slice.
pub fn r_polynomial(k: usize) -> CountPoly {
    assert!(k >= 1, "k must be positive");
    let terms = (1..=k).map(|q| {
        let coef = binomial::<BigUint>(k as u64 - 1, q as u64 - 1)
            * BigUint::from(3u32).pow((k - q) as u32);
        Term { coef, m: k + q, q }
    });
    CountPoly::from_terms(terms).with_label(Metric::L1, Radius(2 * k as u64))
}

/// Taylor coefficients `0..=count` of `X^{k+1} (2X-3)^{k-1} / (X-1)^{k+1}`.
pub fn series_coefficients(k: usize, count: usize) -> Vec<BigInt> {
    let mut series = PowerSeries::top_slice_generating_function(k);
    series
        .coefficients(count + 1)
        .expect("denominator is monic up to sign")
        .to_vec()
}

/// Derangement numbers `D_0..=D_j` from `D_j = (j-1)(D_{j-1} + D_{j-2})`.
pub fn derangements(j: usize) -> Vec<BigUint> {
    let mut d = vec![BigUint::one(), BigUint::zero()];
    for i in 2..=j {
        let next = BigUint::from(i - 1) * (&d[i - 1] + &d[i - 2]);
        d.push(next);
    }
    d.truncate(j + 1);
    d
}

pub fn derangement(j: usize) -> BigUint {
    derangements(j).pop().expect("nonempty")
}

/// `#{u ∈ S_n : H(u) = j} = D_j C(n, j)`.
pub fn hamming_sphere(n: usize, j: usize) -> BigUint {
    derangement(j) * binomial::<BigUint>(n as u64, j as u64)
}

/// The `ℓ1` sphere polynomial at radius `2k` has leading term
/// `[n - k choose k]` and no other term of degree `k`.
pub fn leading_term_check(enumerator: &Enumerator, k: usize) -> Result<bool, EnumError> {
    let poly = sphere_polynomial(enumerator, Metric::L1, Radius(2 * k as u64))?;
    Ok(leading_term_is_single_transpositions(&poly, k))
}

pub(crate) fn leading_term_is_single_transpositions(poly: &CountPoly, k: usize) -> bool {
    let top: Vec<_> = poly.terms().iter().filter(|t| t.q >= k).collect();
    top.len() == 1 && top[0].q == k && top[0].m == 2 * k && top[0].coef.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::Ratio;

    use crate::poly::RationalPoly;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn poly(terms: &[(u64, usize, usize)]) -> CountPoly {
        CountPoly::from_terms(terms.iter().map(|&(c, m, q)| Term { coef: big(c), m, q }))
    }

    fn same_terms(a: &CountPoly, b: &CountPoly) -> bool {
        a.terms() == b.terms()
    }

    #[test]
    fn small_sphere_polynomials() {
        let e = Enumerator::default();
        let p1 = sphere_polynomial(&e, Metric::L1, Radius(2)).unwrap();
        assert!(same_terms(&p1, &poly(&[(1, 2, 1)])));
        let p2 = sphere_polynomial(&e, Metric::L1, Radius(4)).unwrap();
        assert!(same_terms(&p2, &poly(&[(1, 4, 2), (3, 3, 1)])));
        let p4 = sphere_polynomial(&e, Metric::L1, Radius(8)).unwrap();
        assert_eq!(p4.coefficient(5, 1), big(27));
        assert_eq!(p4.coefficient(4, 1), big(4));
        let p0 = sphere_polynomial(&e, Metric::L1, Radius(0)).unwrap();
        assert!(same_terms(&p0, &CountPoly::constant(big(1))));
        assert!(sphere_polynomial(&e, Metric::L1, Radius(5))
            .unwrap()
            .is_zero());
        assert!(sphere_polynomial(&e, Metric::Hamming, Radius(2)).is_err());
    }

    #[test]
    fn ball_polynomials() {
        let e = Enumerator::default();
        let b0 = ball_polynomial(&e, Metric::L1, Radius(0)).unwrap();
        assert!(same_terms(&b0, &CountPoly::constant(big(1))));
        let b1 = ball_polynomial(&e, Metric::L1, Radius(2)).unwrap();
        let rat: RationalPoly<BigInt> = b1.to_rational();
        assert_eq!(rat.to_string(), "n");
        let b2 = ball_polynomial(&e, Metric::L1, Radius(4)).unwrap();
        assert_eq!(b2.eval_guarded(4), big(11));
        for n in 1..=7 {
            assert_eq!(
                b2.eval_guarded(n),
                e.pipeline_ball(Metric::L1, n as usize, Radius(4)).unwrap()
            );
        }
    }

    #[test]
    fn guarded_evaluation_examples() {
        let e = Enumerator::default();
        let p6 = sphere_polynomial(&e, Metric::L1, Radius(12)).unwrap();
        assert_eq!(p6.eval_guarded(5), big(20));
        let p3 = sphere_polynomial(&e, Metric::L1, Radius(6)).unwrap();
        assert_eq!(p3.eval_guarded(2), big(0));
        let p2 = sphere_polynomial(&e, Metric::L1, Radius(4)).unwrap();
        assert_eq!(
            p2.eval_guarded(4),
            e.oracle_sphere(Metric::L1, 4, Radius(4)).unwrap()
        );
        assert_eq!(p2.eval_guarded(4), big(7));
    }

    #[test]
    fn rational_expansions() {
        let e = Enumerator::default();
        let text = |k: u64| {
            sphere_polynomial(&e, Metric::L1, Radius(2 * k))
                .unwrap()
                .to_rational::<BigInt>()
                .to_string()
        };
        assert_eq!(text(1), "n - 1");
        assert_eq!(text(2), "(n^2 + n - 6)/2");
        assert_eq!(text(3), "(n^3 + 6n^2 - 25n - 6)/6");
    }

    #[test]
    fn basis_equivalence_and_leading_coefficient() {
        let e = Enumerator::default();
        for k in 1..=8usize {
            let pk = sphere_polynomial(&e, Metric::L1, Radius(2 * k as u64)).unwrap();
            let rat: RationalPoly<BigInt> = pk.to_rational();
            let k_factorial: u64 = (1..=k as u64).product();
            assert_eq!(
                rat.leading(),
                Ratio::new(BigInt::from(1), BigInt::from(k_factorial))
            );
            assert_eq!(rat.degree(), Some(k));
            for n in 1..=30u64 {
                let guarded = pk.eval_guarded(n);
                if n <= 12 {
                    assert_eq!(
                        guarded,
                        e.pipeline_sphere(Metric::L1, n as usize, Radius(2 * k as u64))
                            .unwrap()
                    );
                }
                if n >= k as u64 {
                    let g = BigInt::from(guarded);
                    assert_eq!(pk.eval_polynomial::<BigInt>(n as i64), g);
                    assert_eq!(rat.eval(n as i64), Ratio::from_integer(g));
                }
            }
        }
    }

    #[test]
    fn q_polynomial_examples() {
        let e = Enumerator::default();
        let q3 = q_polynomial(&e, 3).unwrap();
        assert!(same_terms(
            &q3,
            &sphere_polynomial(&e, Metric::L1, Radius(6)).unwrap()
        ));
        let q1 = q_polynomial(&e, 1).unwrap();
        assert!(same_terms(&q1, &poly(&[(1, 2, 1)])));
        let closed = q_polynomial_closed_form(9);
        assert_eq!(closed.coefficient(6, 1), big(36));
    }

    #[test]
    fn r_polynomial_examples() {
        let e = Enumerator::default();
        assert!(same_terms(&r_polynomial(2), &poly(&[(1, 4, 2), (3, 3, 1)])));
        assert!(same_terms(&r_polynomial(1), &poly(&[(1, 2, 1)])));
        let p4 = sphere_polynomial(&e, Metric::L1, Radius(8)).unwrap();
        let diff =
            BigInt::from(p4.eval_guarded(10)) - BigInt::from(r_polynomial(4).eval_guarded(10));
        assert_eq!(diff, BigInt::from(28));
    }

    #[test]
    fn series_examples() {
        assert_eq!(series_coefficients(2, 4)[4], BigInt::from(7));
        assert_eq!(
            &series_coefficients(2, 2),
            &[BigInt::from(0), BigInt::from(0), BigInt::from(0)]
        );
        for (n, c) in series_coefficients(1, 20).iter().enumerate().skip(2) {
            assert_eq!(*c, BigInt::from(n as i64 - 1));
        }
        for k in 1..=6 {
            let r = r_polynomial(k);
            for (n, c) in series_coefficients(k, 30).iter().enumerate() {
                assert_eq!(*c, BigInt::from(r.eval_guarded(n as u64)), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn derangement_recurrence() {
        let d: Vec<u64> = derangements(8)
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(d, vec![1, 0, 1, 2, 9, 44, 265, 1854, 14833]);
        assert_eq!(derangement(0), big(1));
    }

    #[test]
    fn hamming_examples() {
        let e = Enumerator::default();
        assert_eq!(hamming_sphere(5, 2), big(10));
        assert_eq!(hamming_sphere(5, 3), big(20));
        assert_eq!(hamming_sphere(5, 0), big(1));
        assert_eq!(hamming_sphere(3, 5), big(0));
        assert_eq!(
            e.oracle_sphere(Metric::Hamming, 5, Radius(2)).unwrap(),
            big(10)
        );
    }

    #[test]
    fn leading_terms() {
        let e = Enumerator::default();
        for k in [1, 3, 6] {
            assert!(leading_term_check(&e, k).unwrap());
        }
        assert!(!leading_term_is_single_transpositions(
            &poly(&[(2, 4, 2)]),
            2
        ));
    }

    #[test]
    fn kendall_sphere_polynomials() {
        let e = Enumerator::default();
        for k in 0..=6u64 {
            let pk = sphere_polynomial(&e, Metric::Kendall, Radius(k)).unwrap();
            assert_eq!(pk.degree(), Some(k as usize));
            if k > 0 {
                assert!(leading_term_is_single_transpositions(&pk, k as usize));
            }
            for n in 1..=7 {
                assert_eq!(
                    pk.eval_guarded(n),
                    e.oracle_sphere(Metric::Kendall, n as usize, Radius(k))
                        .unwrap()
                );
            }
        }
    }
}
