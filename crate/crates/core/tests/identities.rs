use num_bigint::{BigInt, BigUint};
use permsphere::closed_form::{
    amended_third_slice, closed_form_beta, family_value, ClosedForm, Family,
};
use permsphere::growth::{
    q_polynomial_closed_form, q_polynomial_from_degree, sphere_polynomial_from_degree,
};
use permsphere::{ball_polynomial, sphere_polynomial, Enumerator, ExpandedPoly, Metric, Radius};

#[test]
fn q10_agrees_with_p10_from_degree_two() {
    let e = Enumerator::default();
    let p = sphere_polynomial_from_degree(&e, Metric::L1, Radius(20), 2).unwrap();
    let q = q_polynomial_from_degree(&e, 10, 2).unwrap();
    assert_eq!(p.terms(), q.terms());
    assert_eq!(q.coefficient(8, 2), BigUint::from(72u32));
}

#[test]
fn amended_third_slice_matches_convolution() {
    let e = Enumerator::default();
    for k in 6..=9usize {
        for q in 1..=k - 5 {
            let got = e
                .beta(Metric::L1, Radius(2 * k as u64), k + q - 2, q)
                .unwrap();
            assert_eq!(amended_third_slice(k, q), Some(got), "k={k} q={q}");
        }
    }
}

#[test]
fn closed_form_q_polynomial_differs_only_on_the_third_slice() {
    let e = Enumerator::default();
    for k in 1..=9usize {
        let p = sphere_polynomial(&e, Metric::L1, Radius(2 * k as u64)).unwrap();
        let closed = q_polynomial_closed_form(k);
        for t in p.terms() {
            let c = closed.coefficient(t.m, t.q);
            if c != t.coef {
                assert_eq!(t.m, k + t.q - 2, "k={k} (m, q) = ({}, {})", t.m, t.q);
                assert!(k >= 7);
            }
        }
    }
}

#[test]
fn documented_closed_form_values() {
    let v = |k, m, q| closed_form_beta(k, m, q).value().cloned();
    assert_eq!(v(4, 5, 1), Some(BigUint::from(27u32)));
    assert_eq!(v(6, 5, 1), Some(BigUint::from(20u32)));
    assert_eq!(v(8, 6, 1), Some(BigUint::from(100u32)));
    assert_eq!(v(4, 4, 1), Some(BigUint::from(4u32)));
    assert_eq!(
        family_value(Family::MaxEven, 4, 4, 1),
        Some(BigUint::from(4u32))
    );
    assert_eq!(v(12, 7, 1), Some(BigUint::from(252u32)));
    assert_eq!(closed_form_beta(12, 9, 1), ClosedForm::NotCovered);
}

#[test]
fn known_beta_values() {
    let e = Enumerator::default();
    assert_eq!(
        e.beta(Metric::L1, Radius(18), 6, 1).unwrap(),
        BigUint::from(36u32)
    );
    assert_eq!(
        e.beta(Metric::L1, Radius(20), 8, 2).unwrap(),
        BigUint::from(72u32)
    );
    assert_eq!(
        e.beta(Metric::L1, Radius(12), 8, 2).unwrap(),
        BigUint::from(405u32)
    );
    assert_eq!(
        e.beta(Metric::L1, Radius(12), 7, 2).unwrap(),
        BigUint::from(72u32)
    );
}

#[test]
fn kendall_ball_matches_oracle() {
    let e = Enumerator::default();
    for k in 0..=5u64 {
        let v = ball_polynomial(&e, Metric::Kendall, Radius(k)).unwrap();
        for n in 1..=6 {
            assert_eq!(
                v.eval_guarded(n),
                e.oracle_ball(Metric::Kendall, n as usize, Radius(k))
                    .unwrap()
            );
        }
    }
}

#[test]
fn p6_small_values() {
    let e = Enumerator::default();
    let p6 = sphere_polynomial(&e, Metric::L1, Radius(12)).unwrap();
    for n in 1..=7 {
        assert_eq!(
            p6.eval_guarded(n),
            e.oracle_sphere(Metric::L1, n as usize, Radius(12)).unwrap()
        );
    }
    assert_eq!(p6.eval_guarded(4), BigUint::from(0u32));
    assert_eq!(p6.eval_guarded(5), BigUint::from(20u32));
    let rat: ExpandedPoly = p6.to_rational();
    assert_eq!(
        rat.eval(7),
        num_rational::Ratio::from_integer(BigInt::from(591))
    );
}

#[test]
fn lp_pipeline_in_native_scale() {
    let e = Enumerator::default();
    for r in (0..=12).step_by(2) {
        for n in 1..=6 {
            assert_eq!(
                e.pipeline_sphere(Metric::Lp(1), n, Radius(r)).unwrap(),
                e.oracle_sphere(Metric::L1, n, Radius(r)).unwrap()
            );
        }
    }
    assert!(e.pipeline_sphere(Metric::Lp(2), 4, Radius(2)).is_err());
}
