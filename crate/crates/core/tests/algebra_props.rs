mod common;

use blowup_core::{Rational, XPoly};
use common::{nonzero_rational, q, rational, xpoly};
use proptest::prelude::*;

proptest! {
    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Rational::zero());
        prop_assert_eq!(&a + &(-&a), Rational::zero());
    }

    #[test]
    fn rational_inverse(a in nonzero_rational()) {
        prop_assert_eq!(&a * &a.recip().unwrap(), Rational::one());
    }

    #[test]
    fn rational_text_round_trip(a in rational()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), a);
    }

    #[test]
    fn xpoly_ring_axioms(p in xpoly(), r in xpoly(), s in xpoly()) {
        prop_assert_eq!(&p + &r, &r + &p);
        prop_assert_eq!(&p * &r, &r * &p);
        prop_assert_eq!(&(&p * &r) * &s, &p * &(&r * &s));
        prop_assert_eq!(&p * &(&r + &s), &(&p * &r) + &(&p * &s));
        prop_assert_eq!(&p * &XPoly::one(), p.clone());
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn xpoly_eval_is_homomorphism(p in xpoly(), r in xpoly(), v in rational()) {
        prop_assert_eq!((&p + &r).eval_at(&v), &p.eval_at(&v) + &r.eval_at(&v));
        prop_assert_eq!((&p * &r).eval_at(&v), &p.eval_at(&v) * &r.eval_at(&v));
    }

    #[test]
    fn xpoly_canonical_and_serde(p in xpoly()) {
        if let Some(d) = p.degree() {
            prop_assert!(!p.coeff(d).is_zero());
        }
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<XPoly>(&json).unwrap(), p);
    }
}

#[test]
fn canonical_text() {
    assert_eq!(q("6/-4").to_string(), "-3/2");
    assert_eq!(q("-0").to_string(), "0");
    assert_eq!(q("10/5").to_string(), "2");
    assert!("1/0".parse::<Rational>().is_err());
    assert!("abc".parse::<Rational>().is_err());
}

#[test]
fn division_by_zero_is_an_error() {
    assert!(Rational::one().checked_div(&Rational::zero()).is_err());
    assert!(Rational::zero().recip().is_err());
}

#[test]
fn trailing_zeros_are_trimmed() {
    let p = XPoly::from_coeffs(vec![q("1"), q("0"), q("0")]);
    assert_eq!(p.degree(), Some(0));
    assert_eq!(XPoly::from_ints(&[0, 0]), XPoly::zero());
    assert_eq!(XPoly::zero().degree(), None);
}
