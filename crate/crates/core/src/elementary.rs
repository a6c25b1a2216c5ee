//! Rational Taylor series of the elementary functions the degenerate
//! (simple type) formulas are written in. All are exact through `order`.

use crate::algebra::{Rational, XPoly};
use crate::series::TSeries;

fn from_fn(order: i64, f: impl Fn(u32) -> Rational) -> TSeries {
    let coeffs = (0..=order.max(-1)).map(|n| XPoly::constant(f(n as u32))).collect();
    TSeries::from_coeffs(0, coeffs, order)
}

/// `exp(c t^2)`, via the series exponential.
pub fn gaussian(c: &Rational, order: i64) -> TSeries {
    TSeries::monomial(XPoly::constant(c.clone()), 2, order)
        .exp()
        .expect("valuation 2")
}

/// `exp(t)`.
pub fn exp_t(order: i64) -> TSeries {
    TSeries::t(order).exp().expect("valuation 1")
}

/// `cosh t`, as the even part of `exp(t)`.
pub fn cosh(order: i64) -> TSeries {
    let e = exp_t(order);
    let half = Rational::new(1, 2).expect("nonzero");
    (&e + &e.scale_arg(&Rational::from_integer(-1))).scale(&half)
}

/// `sinh t`, as the odd part of `exp(t)`.
pub fn sinh(order: i64) -> TSeries {
    let e = exp_t(order);
    let half = Rational::new(1, 2).expect("nonzero");
    (&e - &e.scale_arg(&Rational::from_integer(-1))).scale(&half)
}

/// `cos t`.
pub fn cos(order: i64) -> TSeries {
    from_fn(order, |n| match n % 4 {
        0 => Rational::factorial(n).recip().expect("nonzero"),
        2 => -Rational::factorial(n).recip().expect("nonzero"),
        _ => Rational::zero(),
    })
}

/// `sin t`.
pub fn sin(order: i64) -> TSeries {
    from_fn(order, |n| match n % 4 {
        1 => Rational::factorial(n).recip().expect("nonzero"),
        3 => -Rational::factorial(n).recip().expect("nonzero"),
        _ => Rational::zero(),
    })
}
