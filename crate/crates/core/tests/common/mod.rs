#![allow(dead_code)]

use blowup_core::{Rational, TSeries, XPoly};
use proptest::prelude::*;

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

pub fn xpoly() -> impl Strategy<Value = XPoly> {
    prop::collection::vec(rational(), 0..4).prop_map(XPoly::from_coeffs)
}

/// Power series (valuation >= `min_val`) exact through `order`.
pub fn series(min_val: i64, order: i64) -> impl Strategy<Value = TSeries> {
    let len = (order - min_val + 1).max(0) as usize;
    prop::collection::vec(xpoly(), len).prop_map(move |c| TSeries::from_coeffs(min_val, c, order))
}

/// Series whose `t^0` coefficient is the constant 1.
pub fn unit_series(order: i64) -> impl Strategy<Value = TSeries> {
    series(1, order).prop_map(move |s| &TSeries::one(order) + &s)
}

pub fn eq_through(a: &TSeries, b: &TSeries, n: i64) -> bool {
    a.equal_to_order(b, n).unwrap().is_equal()
}
