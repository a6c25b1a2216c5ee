mod common;

use blowup_core::blowup::generate_bs;
use blowup_core::series::Sign;
use blowup_core::{Rational, TSeries, XPoly};
use common::{eq_through, nonzero_rational, q, rational, series, unit_series};
use proptest::prelude::*;

const N: i64 = 7;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_is_a_commutative_ring(a in series(0, N), b in series(0, N), c in series(0, N)) {
        prop_assert!(eq_through(&a.mul(&b), &b.mul(&a), N));
        prop_assert!(eq_through(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)), N));
        prop_assert!(eq_through(&a.mul(&(&b + &c)), &(&a.mul(&b) + &a.mul(&c)), N));
    }

    #[test]
    fn mul_order_rule(a in series(1, N), b in series(2, N)) {
        let p = a.mul(&b);
        let expected = (a.order() + b.valuation()).min(b.order() + a.valuation());
        prop_assert_eq!(p.order(), expected);
    }

    #[test]
    fn derivative_undoes_integral(a in series(0, N)) {
        let back = a.integrate().unwrap().derivative();
        prop_assert!(eq_through(&back, &a, N));
    }

    #[test]
    fn integral_undoes_derivative_up_to_constant(a in series(0, N)) {
        let back = a.derivative().integrate().unwrap();
        let constant = TSeries::monomial(a.coeff(0), 0, N);
        prop_assert!(eq_through(&back, &(&a - &constant), N));
    }

    #[test]
    fn exp_turns_sums_into_products(a in series(1, N), b in series(1, N)) {
        let lhs = (&a + &b).exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap());
        prop_assert!(eq_through(&lhs, &rhs, N));
    }

    #[test]
    fn exp_derivative_law(a in series(1, N)) {
        let e = a.exp().unwrap();
        prop_assert!(eq_through(&e.derivative(), &a.derivative().mul(&e), N - 1));
    }

    #[test]
    fn sqrt_squares_back(a in unit_series(N)) {
        let r = a.sqrt().unwrap();
        prop_assert!(eq_through(&r.square(), &a, N));
    }

    #[test]
    fn recip_is_inverse(a in unit_series(N), c in nonzero_rational()) {
        let a = a.scale(&c);
        let prod = a.recip().unwrap().mul(&a);
        prop_assert!(eq_through(&prod, &TSeries::one(N), N));
    }

    #[test]
    fn laurent_division_round_trips(a in series(0, N), b in unit_series(N)) {
        let b = b.shift(1);
        let quotient = a.div(&b).unwrap();
        prop_assert_eq!(quotient.valuation() >= -1, true);
        prop_assert!(eq_through(&quotient.mul(&b), &a, quotient.mul(&b).order()));
    }

    #[test]
    fn scale_arg_is_a_ring_map(a in series(0, N), b in series(0, N), c in rational()) {
        let lhs = a.mul(&b).scale_arg(&c);
        let rhs = a.scale_arg(&c).mul(&b.scale_arg(&c));
        prop_assert!(eq_through(&lhs, &rhs, N));
    }

    #[test]
    fn eval_x_commutes_with_mul(a in series(0, N), b in series(0, N), v in rational()) {
        let lhs = a.mul(&b).eval_x(&v);
        let rhs = a.eval_x(&v).mul(&b.eval_x(&v));
        prop_assert!(eq_through(&lhs, &rhs, N));
    }

    #[test]
    fn substitution_respects_products(a in series(0, 5), b in series(0, 5)) {
        for sign in [Sign::Plus, Sign::Minus] {
            let lhs = a.mul(&b).subst_pm(sign).unwrap();
            let rhs = &a.subst_pm(sign).unwrap() * &b.subst_pm(sign).unwrap();
            prop_assert!(lhs.equal_to_order(&rhs, 5).unwrap().is_equal());
        }
    }

    #[test]
    fn substitution_diagonal(a in series(0, 6)) {
        // u = v = t turns f(u + v) into f(2t).
        let bi = a.subst_pm(Sign::Plus).unwrap();
        let diag = bi.diagonal();
        let expected = a.scale_arg(&Rational::from_integer(2));
        prop_assert!(eq_through(&diag, &expected, 6));
    }

    #[test]
    fn json_round_trip(a in series(0, N)) {
        for norm in [blowup_core::Normalization::Plain, blowup_core::Normalization::Factorial] {
            let text = blowup_core::json::tseries_to_string(&a, norm).unwrap();
            let back = blowup_core::json::tseries_from_str(&text).unwrap();
            prop_assert_eq!(&back, &a);
        }
    }
}

fn c(s: &str) -> XPoly {
    XPoly::constant(q(s))
}

#[test]
fn quotient_example() {
    let (b, s) = generate_bs(8).unwrap();
    let quotient = (&b + &s.derivative()).div(&s).unwrap();
    assert_eq!(quotient.valuation(), -1);
    assert_eq!(quotient.coeff(-1), c("2"));
    assert_eq!(quotient.coeff(0), XPoly::zero());
    assert_eq!(quotient.coeff(1), XPoly::from_coeffs(vec![q("0"), q("-1/6")]));
}

#[test]
fn half_angle_root_example() {
    let (b, _) = generate_bs(8).unwrap();
    let b2t = b.scale_arg(&q("2"));
    assert_eq!(b2t.coeff(4), c("-4/3"));
    let root = b2t.sqrt().unwrap();
    assert_eq!(root.coeff(0), c("1"));
    assert_eq!(root.coeff(4), c("-2/3"));
    assert!(eq_through(&root.square(), &b2t, 8));
}

#[test]
fn scaled_integral_example() {
    // ½∫₀^{2t} S/B = t² - x t⁴ / 3 + O(t⁶).
    let (b, s) = generate_bs(8).unwrap();
    let integral = s.div(&b).unwrap().integrate().unwrap();
    let half = integral.scale_arg(&q("2")).scale(&q("1/2"));
    assert_eq!(half.coeff(2), c("1"));
    assert_eq!(half.coeff(4), XPoly::from_coeffs(vec![q("0"), q("-1/3")]));
}

#[test]
fn log_singularity_is_rejected() {
    let inv = TSeries::t(4).recip().unwrap();
    assert!(inv.integrate().is_err());
}

#[test]
fn non_unit_leading_is_rejected() {
    let a = TSeries::monomial(XPoly::x(), 0, 4);
    assert!(a.recip().is_err());
    assert!(a.sqrt().is_err());
    assert!(TSeries::one(4).exp().is_err());
}

#[test]
fn coefficients_beyond_order_are_errors() {
    let a = TSeries::one(3);
    assert!(a.coeff_checked(4, false).is_err());
    assert!(a.coeff_checked(3, true).is_ok());
}
