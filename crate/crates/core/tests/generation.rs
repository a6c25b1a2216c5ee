//! Generation against independent references: a direct solve of the
//! bivariate identity with unknown coefficients, the embedded table, and
//! structural invariants.

mod common;

use blowup_core::blowup::{bb_sides, generate_bs, golden_check, golden_diff};
use blowup_core::verify::{verify_set, VerifyConfig};
use blowup_core::{BlowupSeriesSet, GoldenTable, Rational, TSeries, XPoly};
use common::q;

#[derive(Clone, Copy, Debug)]
enum Unknown {
    B(usize),
    S(usize),
}

fn series_of(coeffs: &[XPoly], order: i64) -> TSeries {
    let mut c = coeffs.to_vec();
    c.resize(order as usize + 1, XPoly::zero());
    TSeries::from_coeffs(0, c, order)
}

/// Coefficients of total degree `d` in `lhs - rhs` of the bivariate identity.
fn residual_slots(b: &[XPoly], s: &[XPoly], d: usize) -> Vec<XPoly> {
    let (lhs, rhs) = bb_sides(&series_of(b, d as i64), &series_of(s, d as i64)).unwrap();
    (0..=d).map(|i| &lhs.coeff(i, d - i) - &rhs.coeff(i, d - i)).collect()
}

/// Solves `m · z = rhs` over `Q[x]`; `None` unless the solution exists and is unique.
fn solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<XPoly>, unknowns: usize) -> Option<Vec<XPoly>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let pivot = (row..m.len()).find(|&r| !m[r][col].is_zero())?;
        m.swap(row, pivot);
        rhs.swap(row, pivot);
        let inv = m[row][col].recip().unwrap();
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                let pivot_row = m[row].clone();
                for (entry, p) in m[r].iter_mut().zip(&pivot_row) {
                    *entry = &*entry - &(&f * p);
                }
                let sub = rhs[row].scale(&f);
                rhs[r] = &rhs[r] - &sub;
            }
        }
        pivots.push(row);
        row += 1;
    }
    if rhs[row..].iter().any(|p| !p.is_zero()) {
        return None;
    }
    Some((0..unknowns).map(|c| rhs[pivots[c]].scale(&m[pivots[c]][c].recip().unwrap())).collect())
}

/// Determines `B` through `order` and `S` through `order - 3` from the
/// bivariate identity alone, with seeds `b0 = 1`, `b2 = 0`, `s0 = 0`,
/// `s1 = 1`, `s3 = -x/6`.
fn bivariate_oracle(order: usize) -> (Vec<XPoly>, Vec<XPoly>) {
    let mut b = vec![XPoly::one()];
    let mut s = vec![XPoly::zero(), XPoly::one()];
    for d in 1..=order {
        b.push(XPoly::zero());
        // B -> e^{ct^2} B, S -> e^{ct^2} S preserves the identity, so b2 is a seed.
        let mut unknowns = if d == 2 { vec![] } else { vec![Unknown::B(d)] };
        if d >= 5 {
            let k = d - 3;
            if k == 3 {
                s.push(XPoly::from_coeffs(vec![q("0"), q("-1/6")]));
            } else {
                s.push(XPoly::zero());
                unknowns.push(Unknown::S(k));
            }
        }
        while s.len() < d.saturating_sub(2) {
            s.push(XPoly::zero());
        }
        let base = residual_slots(&b, &s, d);
        let mut columns = Vec::new();
        for u in &unknowns {
            let (mut b1, mut s1) = (b.clone(), s.clone());
            match *u {
                Unknown::B(k) => b1[k] = XPoly::one(),
                Unknown::S(k) => s1[k] = XPoly::one(),
            }
            let probe = residual_slots(&b1, &s1, d);
            let col: Vec<Rational> = probe
                .iter()
                .zip(&base)
                .map(|(p, r0)| (p - r0).as_constant().expect("linear in the unknowns"))
                .collect();
            columns.push(col);
        }
        let m: Vec<Vec<Rational>> =
            (0..base.len()).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
        let rhs: Vec<XPoly> = base.iter().map(|p| -p).collect();
        let z = solve(m, rhs, unknowns.len())
            .unwrap_or_else(|| panic!("bivariate identity does not determine degree {d} uniquely"));
        for (u, v) in unknowns.iter().zip(z) {
            match *u {
                Unknown::B(k) => b[k] = v,
                Unknown::S(k) => s[k] = v,
            }
        }
    }
    s.truncate(order - 2);
    (b, s)
}

#[test]
fn recurrence_matches_bivariate_solve() {
    let order = 16;
    let (b_ref, s_ref) = bivariate_oracle(order);
    let (b, s) = generate_bs(order as i64).unwrap();
    for (n, c) in b_ref.iter().enumerate() {
        assert_eq!(&b.coeff(n as i64), c, "B at t^{n}");
    }
    for (n, c) in s_ref.iter().enumerate() {
        assert_eq!(&s.coeff(n as i64), c, "S at t^{n}");
    }
}

#[test]
fn low_order_values() {
    let (b, s) = generate_bs(8).unwrap();
    assert_eq!(b.coeff(4), XPoly::constant(q("-1/12")));
    assert_eq!(s.coeff(1), XPoly::one());
    assert_eq!(s.coeff(3), XPoly::from_coeffs(vec![q("0"), q("-1/6")]));
    assert_eq!(b.coeff(0), XPoly::one());
}

#[test]
fn reproduces_reference_table() {
    let set = BlowupSeriesSet::generate(16).unwrap();
    assert!(golden_diff(&set).unwrap().is_empty());
    let report = golden_check(&set).unwrap();
    assert!(report.pass);
    assert!(report.first_mismatch.is_none());
}

#[test]
fn reference_table_is_not_enough_below_its_order() {
    let set = BlowupSeriesSet::generate(12).unwrap();
    assert!(golden_diff(&set).is_err());
}

#[test]
fn parity_and_degree_bounds() {
    let set = BlowupSeriesSet::generate(24).unwrap();
    assert!(set.b.is_even());
    assert!(set.s.is_odd());
    for (series, even) in [(&set.b2, true), (&set.s2, true), (&set.wronskian, true), (&set.bs, false)] {
        assert_eq!(series.is_even(), even);
        assert_eq!(series.is_odd(), !even);
    }
    for (n, c) in set.b.terms().chain(set.s.terms()) {
        if let Some(deg) = c.degree() {
            assert!(deg as i64 <= (n - 1) / 2, "x-degree {deg} at t^{n}");
        }
    }
}

#[test]
fn coefficients_stable_under_higher_order() {
    let low = BlowupSeriesSet::generate(12).unwrap();
    let high = BlowupSeriesSet::generate(20).unwrap();
    assert_eq!(high.truncate(12), low);
    assert_eq!(low.hash(), BlowupSeriesSet::generate(12).unwrap().hash());
}

#[test]
fn every_table_row_round_trips_through_json() {
    let table = GoldenTable::embedded();
    assert_eq!(table.rows().count(), 6);
    let reparsed = GoldenTable::parse(GoldenTable::raw_json()).unwrap();
    for (name, row) in table.rows() {
        assert_eq!(reparsed.get(name), Some(row));
    }
}

#[test]
fn single_coefficient_faults_are_caught() {
    let (b, s) = generate_bs(18).unwrap();
    let config = VerifyConfig { order: 12, bivariate_order: 10, mirror_order: 10, ..Default::default() };
    for (which, n) in [("B", 6), ("B", 10), ("S", 5), ("S", 9), ("B", 7)] {
        let size = Rational::factorial(n).recip().unwrap();
        let bump = TSeries::monomial(XPoly::constant(size), n as i64, 18);
        let (b1, s1) = if which == "B" { (&b + &bump, s.clone()) } else { (b.clone(), &s + &bump) };
        let set = BlowupSeriesSet::from_generators(&b1, &s1).unwrap();
        let reports = verify_set(&set, &config).unwrap();
        assert!(reports.iter().any(|r| !r.pass), "fault in {which} at t^{n} went unnoticed");
    }
}
