//! The universal blow-up series `B` (even) and `S` (odd) and every series
//! built from them.
//!
//! `B` and `S` are determined by the functional equation
//!
//! ```text
//! B(u+v) B(u-v) = B(u)^2 B(v)^2 - S(u)^2 S(v)^2
//! ```
//!
//! together with `B = 1 + O(t^4)` and `S = t - x t^3/6 + O(t^5)`. Taking the
//! `v^2` and `v^4` coefficients gives the two ODEs used for generation:
//!
//! ```text
//! (E2)  B''B - B'^2 + S^2 = 0
//! (E4)  B''''B - 4B'''B' + 3B''^2 + 2B^2 - 4x S^2 = 0
//! ```
//!
//! (E4) at `t^n` is linear in `b_{n+4}` with coefficient `(n+4)!/n!`, and (E2)
//! at `t^{n+2}` is linear in `s_{n+1}` with coefficient 2, so alternating
//! the two fixes every coefficient.

use std::sync::OnceLock;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::algebra::{Rational, XPoly};
use crate::error::{Error, Result};
use crate::json::{Normalization, TSeriesJson};
use crate::report::{Mismatch, Status, VerificationReport};
use crate::series::{BiSeries, Sign, TSeries};

/// Lowest order accepted by [`generate_bs`].
pub const MIN_GENERATION_ORDER: i64 = 4;

/// Extra orders generated so every derived series is exact through the
/// requested order.
const DERIVED_MARGIN: i64 = 2;

/// `b_{k+r} (k+r)!/k!`: coefficient of `t^k` in the `r`-th derivative.
fn deriv(c: &[XPoly], r: usize, k: usize) -> XPoly {
    match c.get(k + r) {
        Some(p) if !p.is_zero() => {
            let mut f = 1i64;
            for i in k + 1..=k + r {
                f *= i as i64;
            }
            p.scale(&Rational::from_integer(f))
        }
        _ => XPoly::zero(),
    }
}

/// Sum over `i + j = m` of `f(i) * g(j)`.
fn conv_at(m: usize, f: impl Fn(usize) -> XPoly, g: impl Fn(usize) -> XPoly) -> XPoly {
    let mut acc = XPoly::zero();
    for i in 0..=m {
        let a = f(i);
        if a.is_zero() {
            continue;
        }
        acc.add_product_assign(&a, &g(m - i));
    }
    acc
}

fn get(c: &[XPoly], k: usize) -> XPoly {
    c.get(k).cloned().unwrap_or_default()
}

/// Coefficient of `t^m` in the (E2) residual.
fn e2_at(b: &[XPoly], s: &[XPoly], m: usize) -> XPoly {
    let mut r = conv_at(m, |k| deriv(b, 2, k), |k| get(b, k));
    r = &r - &conv_at(m, |k| deriv(b, 1, k), |k| deriv(b, 1, k));
    &r + &conv_at(m, |k| get(s, k), |k| get(s, k))
}

/// Coefficient of `t^m` in the (E4) residual.
fn e4_at(b: &[XPoly], s: &[XPoly], m: usize) -> XPoly {
    let mut r = conv_at(m, |k| deriv(b, 4, k), |k| get(b, k));
    r.add_scaled_assign(
        &conv_at(m, |k| deriv(b, 3, k), |k| deriv(b, 1, k)),
        &Rational::from_integer(-4),
    );
    r.add_scaled_assign(
        &conv_at(m, |k| deriv(b, 2, k), |k| deriv(b, 2, k)),
        &Rational::from_integer(3),
    );
    r.add_scaled_assign(&conv_at(m, |k| get(b, k), |k| get(b, k)), &Rational::from_integer(2));
    let s2 = conv_at(m, |k| get(s, k), |k| get(s, k));
    r.add_product_assign(&XPoly::monomial(Rational::from_integer(-4), 1), &s2);
    r
}

/// Solves (E2)/(E4) order by order without any post-checks.
///
/// Returns dense coefficient vectors for `B` and `S` through `t^order`.
fn solve_recurrences(order: usize) -> Result<(Vec<XPoly>, Vec<XPoly>)> {
    // S through t^order needs B through t^(order + 3)
    let work = order + 4;
    let mut b = vec![XPoly::zero(); work + 1];
    let mut s = vec![XPoly::zero(); work + 1];
    b[0] = XPoly::one();
    s[1] = XPoly::one();
    s[3] = XPoly::monomial(Rational::new(-1, 6)?, 1);

    let mut n = 0;
    while n + 4 <= work {
        // (E4) at t^n with b_{n+4} still zero
        let rest = e4_at(&b, &s, n);
        let lead: i64 = ((n + 1)..=(n + 4)).map(|i| i as i64).product();
        b[n + 4] = rest.scale(&Rational::new(-1, lead)?);
        if n >= 2 && n < work {
            if n + 1 == 3 {
                // seeded: (E2) at t^4 must already vanish
                let check = e2_at(&b, &s, 4);
                if !check.is_zero() {
                    return Err(Error::Generation {
                        degree: 4,
                        reason: format!("seed s_3 inconsistent, (E2) residual {check}"),
                    });
                }
            } else {
                let rest = e2_at(&b, &s, n + 2);
                s[n + 1] = rest.scale(&Rational::new(-1, 2)?);
            }
        }
        n += 2;
    }
    b.truncate(order + 1);
    s.truncate(order + 1);
    Ok((b, s))
}

/// Generates `B` and `S` exact through `t^order`.
///
/// Besides solving the recurrences this re-verifies every residual slot of
/// (E2)/(E4), the diagonal `B(2t) = B^4 - S^4`, the full bivariate identity
/// through total degree `order`, parity, the `x`-degree bound, and agreement
/// with the embedded table. Any failure is a
/// [`Error::Generation`].
pub fn generate_bs(order: i64) -> Result<(TSeries, TSeries)> {
    if order < MIN_GENERATION_ORDER {
        return Err(Error::Precondition(format!(
            "generation needs order >= {MIN_GENERATION_ORDER}, got {order}"
        )));
    }
    let (bv, sv) = solve_recurrences(order as usize + 4)?;

    // every residual slot, including odd ones never used for solving
    for m in 0..=order as usize {
        for (name, residual) in [("E2", e2_at(&bv, &sv, m)), ("E4", e4_at(&bv, &sv, m))] {
            if !residual.is_zero() {
                return Err(Error::Generation {
                    degree: m as i64,
                    reason: format!("({name}) residual {residual} does not vanish"),
                });
            }
        }
    }

    let b = TSeries::from_coeffs(0, bv, order);
    let s = TSeries::from_coeffs(0, sv, order);
    post_check(&b, &s)?;
    Ok((b, s))
}

fn post_check(b: &TSeries, s: &TSeries) -> Result<()> {
    let order = b.order();
    let fail = |degree: i64, reason: String| Err(Error::Generation { degree, reason });

    if !b.is_even() || !s.is_odd() {
        return fail(order, "parity violated".into());
    }
    for (name, series) in [("B", b), ("S", s)] {
        for (n, c) in series.terms() {
            if n >= 1 {
                if let Some(d) = c.degree() {
                    if d as i64 > (n - 1) / 2 {
                        return fail(n, format!("{name} coefficient has x-degree {d}"));
                    }
                }
            }
        }
    }

    let diag_lhs = b.scale_arg(&Rational::from_integer(2));
    let diag_rhs = &b.square().square() - &s.square().square();
    if let crate::series::Comparison::Differ { t, .. } = diag_lhs.equal_to_order(&diag_rhs, order)? {
        return fail(t, "diagonal B(2t) = B^4 - S^4 violated".into());
    }

    let (lhs, rhs) = bb_sides(b, s)?;
    if let crate::series::BiComparison::Differ { u, v, .. } = lhs.equal_to_order(&rhs, order)? {
        return fail((u + v) as i64, format!("bivariate identity violated at u^{u} v^{v}"));
    }

    for (name, series) in [("B", b), ("S", s)] {
        let golden = GoldenTable::embedded().get(name).expect("table has B and S");
        let upto = golden.order().min(order);
        if let crate::series::Comparison::Differ { t, .. } = series.equal_to_order(golden, upto)? {
            return fail(t, format!("{name} disagrees with the reference table"));
        }
    }
    Ok(())
}

/// Both sides of `B(u+v)B(u-v) = B(u)^2 B(v)^2 - S(u)^2 S(v)^2`.
pub fn bb_sides(b: &TSeries, s: &TSeries) -> Result<(BiSeries, BiSeries)> {
    let lhs = &b.subst_pm(Sign::Plus)? * &b.subst_pm(Sign::Minus)?;
    let (b2, s2) = (b.square(), s.square());
    let rhs = &(&b2.in_u()? * &b2.in_v()?) - &(&s2.in_u()? * &s2.in_v()?);
    Ok((lhs, rhs))
}

/// Both sides of `S(u)S(v)S(u+v) = B'(u)B(v)B(u+v) + B(u)B'(v)B(u+v) - B(u)B(v)B'(u+v)`.
pub fn bbb_sides(b: &TSeries, s: &TSeries) -> Result<(BiSeries, BiSeries)> {
    let db = b.derivative();
    let (bu, bv, bw) = (b.in_u()?, b.in_v()?, b.subst_pm(Sign::Plus)?);
    let (dbu, dbv, dbw) = (db.in_u()?, db.in_v()?, db.subst_pm(Sign::Plus)?);
    let lhs = &(&s.in_u()? * &s.in_v()?) * &s.subst_pm(Sign::Plus)?;
    let t1 = &(&dbu * &bv) * &bw;
    let t2 = &(&bu * &dbv) * &bw;
    let t3 = &(&bu * &bv) * &dbw;
    let rhs = &(&t1 + &t2) - &t3;
    Ok((lhs, rhs))
}

/// `B S' - B' S`.
pub fn wronskian(b: &TSeries, s: &TSeries) -> TSeries {
    &b.mul(&s.derivative()) - &b.derivative().mul(s)
}

/// `B^2`, `S^2`, `BS` and `BS' - B'S`.
pub fn build_derived(b: &TSeries, s: &TSeries) -> (TSeries, TSeries, TSeries, TSeries) {
    (b.square(), s.square(), b.mul(s), wronskian(b, s))
}

/// `exp(∫_0^t ((B' ± S)/B)(2s) ds)` for both signs, then the half-sum and
/// half-difference. Returns `(plus, minus, frak_b0, frak_btau)`.
pub fn build_frak_b(b: &TSeries, s: &TSeries) -> Result<(TSeries, TSeries, TSeries, TSeries)> {
    let two = Rational::from_integer(2);
    let half = Rational::new(1, 2)?;
    let db = b.derivative();
    let branch = |numerator: TSeries| -> Result<TSeries> {
        numerator.div(b)?.scale_arg(&two).integrate()?.exp()
    };
    let plus = branch(&db + s)?;
    let minus = branch(&db - s)?;
    let b0 = (&plus + &minus).scale(&half);
    let btau = (&plus - &minus).scale(&half);
    Ok((plus, minus, b0, btau))
}

/// The square-root form `sqrt(B(2t)) exp(±½∫_0^{2t} S/B)` of the same pair.
pub fn frak_b_root_form(b: &TSeries, s: &TSeries) -> Result<(TSeries, TSeries)> {
    let two = Rational::from_integer(2);
    let root = b.scale_arg(&two).sqrt()?;
    let half_integral = s.div(b)?.integrate()?.scale_arg(&two).scale(&Rational::new(1, 2)?);
    let plus = root.mul(&half_integral.exp()?);
    let minus = root.mul(&(-&half_integral).exp()?);
    Ok((plus, minus))
}

/// `½∫_0^{2t} q(s) ds` for a regular integrand `q`.
fn half_integral_doubled(q: &TSeries) -> Result<TSeries> {
    Ok(q.integrate()?.scale_arg(&Rational::from_integer(2)).scale(&Rational::new(1, 2)?))
}

/// `exp(½∫_0^{2t} (S'-B)/S)` and `t exp(½∫_0^{2t} ((B+S')/S - 2/s) ds)`.
pub fn build_frak_s(b: &TSeries, s: &TSeries) -> Result<(TSeries, TSeries)> {
    let ds = s.derivative();

    let regular = (&ds - b).div(s)?;
    if regular.valuation() < 0 {
        let p = regular.valuation();
        return Err(Error::UnexpectedPole { power: p, coeff: regular.coeff(p).to_string() });
    }
    let s0 = half_integral_doubled(&regular)?.exp()?;

    let singular = (b + &ds).div(s)?;
    let expected_pole = XPoly::constant(Rational::from_integer(2));
    if singular.valuation() != -1 || singular.coeff(-1) != expected_pole {
        let p = singular.valuation().min(-1);
        return Err(Error::UnexpectedPole { power: p, coeff: singular.coeff(p).to_string() });
    }
    let pole = TSeries::monomial(expected_pole, -1, singular.order());
    let regularized = &singular - &pole;
    if regularized.valuation() < 0 {
        let p = regularized.valuation();
        return Err(Error::UnexpectedPole { power: p, coeff: regularized.coeff(p).to_string() });
    }
    let s1 = half_integral_doubled(&regularized)?.exp()?.shift(1);
    Ok((s0, s1))
}

/// `B`, `S` and every derived series, all truncated to one common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSeriesSet {
    pub order: i64,
    pub b: TSeries,
    pub s: TSeries,
    pub b2: TSeries,
    pub s2: TSeries,
    pub bs: TSeries,
    pub wronskian: TSeries,
    pub bplus: TSeries,
    pub bminus: TSeries,
    pub frak_b0: TSeries,
    pub frak_btau: TSeries,
    pub frak_s0: TSeries,
    pub frak_s1: TSeries,
}

/// Selectors accepted by [`BlowupSeriesSet::select`].
pub const SERIES_SELECTORS: &[&str] = &[
    "B", "S", "B2", "S2", "BS", "WS0", "WS1", "BPLUS", "BMINUS", "W", "FB0", "FBTAU",
];

impl BlowupSeriesSet {
    /// Generates `B`, `S` with headroom and builds the set exact through
    /// `order`.
    pub fn generate(order: i64) -> Result<Self> {
        let (b, s) = generate_bs(order.max(MIN_GENERATION_ORDER) + DERIVED_MARGIN)?;
        Ok(Self::from_generators(&b, &s)?.truncate(order))
    }

    /// Builds every derived series from the given `B`, `S`. The resulting
    /// order is the least order at which all members are exact.
    pub fn from_generators(b: &TSeries, s: &TSeries) -> Result<Self> {
        let (b2, s2, bs, wronskian) = build_derived(b, s);
        let (bplus, bminus, frak_b0, frak_btau) = build_frak_b(b, s)?;
        let (frak_s0, frak_s1) = build_frak_s(b, s)?;
        let set = BlowupSeriesSet {
            order: 0,
            b: b.clone(),
            s: s.clone(),
            b2,
            s2,
            bs,
            wronskian,
            bplus,
            bminus,
            frak_b0,
            frak_btau,
            frak_s0,
            frak_s1,
        };
        let order = set.members().iter().map(|(_, m)| m.order()).min().expect("nonempty");
        Ok(set.truncate(order))
    }

    fn members(&self) -> [(&'static str, &TSeries); 12] {
        [
            ("B", &self.b),
            ("S", &self.s),
            ("B2", &self.b2),
            ("S2", &self.s2),
            ("BS", &self.bs),
            ("W", &self.wronskian),
            ("BPLUS", &self.bplus),
            ("BMINUS", &self.bminus),
            ("FB0", &self.frak_b0),
            ("FBTAU", &self.frak_btau),
            ("WS0", &self.frak_s0),
            ("WS1", &self.frak_s1),
        ]
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.members_min_order());
        let t = |s: &TSeries| s.truncate(order);
        BlowupSeriesSet {
            order,
            b: t(&self.b),
            s: t(&self.s),
            b2: t(&self.b2),
            s2: t(&self.s2),
            bs: t(&self.bs),
            wronskian: t(&self.wronskian),
            bplus: t(&self.bplus),
            bminus: t(&self.bminus),
            frak_b0: t(&self.frak_b0),
            frak_btau: t(&self.frak_btau),
            frak_s0: t(&self.frak_s0),
            frak_s1: t(&self.frak_s1),
        }
    }

    fn members_min_order(&self) -> i64 {
        self.members().iter().map(|(_, m)| m.order()).min().expect("nonempty")
    }

    /// Looks up a member by selector (`WS0`/`WS1` are the integral forms
    /// for the odd case, `W` is `BS' - B'S`, `FB0`/`FBTAU` the even-case
    /// half-sum and half-difference).
    pub fn select(&self, name: &str) -> Result<&TSeries> {
        self.members()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::UnknownSeries(name.to_string()))
    }

    /// SHA-256 over the plain JSON of `B` and `S`, which determine the rest.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (name, series) in [("B", &self.b), ("S", &self.s)] {
            let json = TSeriesJson::encode(series, Normalization::Plain).expect("power series");
            hasher.update(name.as_bytes());
            hasher.update(serde_json::to_vec(&json).expect("serializable"));
        }
        hex::encode(hasher.finalize())
    }
}

const GOLDEN_TABLE_JSON: &str = include_str!("../data/golden_table.json");

/// Row names of the reference table, in table order.
pub const GOLDEN_ROWS: &[&str] = &["B", "S", "B2", "S2", "WS0", "WS1"];

/// Factorial-normalized reference coefficients, embedded at compile time.
#[derive(Debug)]
pub struct GoldenTable {
    rows: Vec<(String, TSeries)>,
}

impl GoldenTable {
    pub fn embedded() -> &'static GoldenTable {
        static TABLE: OnceLock<GoldenTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            GoldenTable::parse(GOLDEN_TABLE_JSON).expect("embedded reference table is well-formed")
        })
    }

    pub fn parse(text: &str) -> Result<GoldenTable> {
        #[derive(Deserialize)]
        struct Raw(std::collections::HashMap<String, TSeriesJson>);
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut rows = Vec::new();
        for name in GOLDEN_ROWS {
            let json = raw
                .0
                .get(*name)
                .ok_or_else(|| Error::Parse(format!("reference table lacks row {name}")))?;
            rows.push((name.to_string(), json.decode()?));
        }
        Ok(GoldenTable { rows })
    }

    pub fn raw_json() -> &'static str {
        GOLDEN_TABLE_JSON
    }

    pub fn hash() -> String {
        hex::encode(Sha256::digest(GOLDEN_TABLE_JSON.as_bytes()))
    }

    pub fn get(&self, name: &str) -> Option<&TSeries> {
        self.rows.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &TSeries)> {
        self.rows.iter().map(|(n, s)| (n.as_str(), s))
    }

    /// Highest exponent covered by any row.
    pub fn max_order(&self) -> i64 {
        self.rows.iter().map(|(_, s)| s.order()).max().unwrap_or(0)
    }
}

/// One disagreement between generated data and the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenDiff {
    /// Table row.
    pub row: String,
    /// Set member compared against the row.
    pub member: String,
    pub n: i64,
    /// Factorial-normalized coefficients.
    pub expected: XPoly,
    pub actual: XPoly,
}

/// Set members each table row is compared with.
fn golden_members(row: &str) -> &'static [&'static str] {
    match row {
        "B" => &["B"],
        "S" => &["S"],
        "B2" => &["B2", "FB0"],
        "S2" => &["S2", "FBTAU"],
        "WS0" => &["W", "WS0"],
        "WS1" => &["BS", "WS1"],
        _ => &[],
    }
}

/// Every table entry that the set fails to reproduce exactly.
pub fn golden_diff(set: &BlowupSeriesSet) -> Result<Vec<GoldenDiff>> {
    let table = GoldenTable::embedded();
    if set.order < table.max_order() {
        return Err(Error::Precondition(format!(
            "table comparison needs order >= {}, got {}",
            table.max_order(),
            set.order
        )));
    }
    let mut diffs = Vec::new();
    for (row, expected) in table.rows() {
        for member in golden_members(row) {
            let actual = set.select(member)?;
            for n in 0..=expected.order() {
                let e = expected.coeff_checked(n, true)?;
                let a = actual.coeff_checked(n, true)?;
                if e != a {
                    diffs.push(GoldenDiff {
                        row: row.to_string(),
                        member: member.to_string(),
                        n,
                        expected: e,
                        actual: a,
                    });
                }
            }
        }
    }
    Ok(diffs)
}

/// Table comparison as a single report; the mismatch names the member.
pub fn golden_check(set: &BlowupSeriesSet) -> Result<VerificationReport> {
    let diffs = golden_diff(set)?;
    let mismatch = diffs.first().map(|d| {
        let x = crate::series::first_poly_difference(&d.actual, &d.expected)
            .map(|(x, _, _)| x)
            .unwrap_or(0);
        let fact = Rational::factorial(d.n as u32).recip().expect("nonzero");
        Mismatch {
            t: d.n,
            x,
            lhs: (&d.actual.coeff(x) * &fact).to_string(),
            rhs: (&d.expected.coeff(x) * &fact).to_string(),
            u: None,
            v: None,
            series: Some(d.member.clone()),
        }
    });
    let mut report =
        VerificationReport::new("golden_table", GoldenTable::embedded().max_order(), Status::Golden, mismatch);
    report.series_hash = set.hash();
    report.golden_hash = Some(GoldenTable::hash());
    Ok(report)
}
