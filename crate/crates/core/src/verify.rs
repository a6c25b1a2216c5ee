//! The identity catalog: every series identity the blow-up formulas rest
//! on, each checked exactly through a finite order.
//!
//! A pass certifies agreement through the reported order only. Identities
//! whose series-level truth is expected but not proven carry
//! [`Status::ConjecturalSeriesLevel`].

use std::time::Instant;

use rayon::prelude::*;

use crate::algebra::{Rational, XPoly};
use crate::blowup::{bb_sides, bbb_sides, frak_b_root_form, BlowupSeriesSet};
use crate::elementary;
use crate::error::{Error, Result};
use crate::report::{Mismatch, Status, VerificationReport};
use crate::series::{BiSeries, TSeries};

/// Lowest order accepted by [`verify_all`].
pub const MIN_VERIFY_ORDER: i64 = 8;

/// Which configured order an identity is checked at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Main,
    Bivariate,
    Mirror,
    Fixed(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Univariate,
    Bivariate,
}

enum Sides {
    Uni(TSeries, TSeries),
    Bi(BiSeries, BiSeries),
    /// Precomputed outcome (coefficient spot checks).
    Outcome(Option<Mismatch>),
}

type Builder = fn(&BlowupSeriesSet, i64) -> Result<Sides>;

/// One catalog entry.
pub struct IdentityDescriptor {
    pub id: &'static str,
    pub arity: Arity,
    pub status: Status,
    pub target: Target,
    /// How many orders of the set are consumed (derivatives lose one each).
    pub headroom: i64,
    /// Rough ceiling for desk-scale runtimes.
    pub max_feasible_order_hint: i64,
    builder: Builder,
}

impl std::fmt::Debug for IdentityDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityDescriptor").field("id", &self.id).finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub order: i64,
    pub bivariate_order: i64,
    pub mirror_order: i64,
    pub jobs: usize,
    /// Restrict to these identity ids (all when empty).
    pub identities: Vec<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { order: 28, bivariate_order: 16, mirror_order: 12, jobs: 1, identities: Vec::new() }
    }
}

impl VerifyConfig {
    fn target_order(&self, target: Target) -> i64 {
        match target {
            Target::Main => self.order,
            Target::Bivariate => self.bivariate_order.min(self.order),
            Target::Mirror => self.mirror_order.min(self.order),
            Target::Fixed(n) => n,
        }
    }
}

fn two() -> Rational {
    Rational::from_integer(2)
}

fn uni(a: &TSeries, b: &TSeries) -> Result<Sides> {
    Ok(Sides::Uni(a.clone(), b.clone()))
}

fn pm_ode_sides(set: &BlowupSeriesSet, sign: i64) -> Result<Sides> {
    let sign = Rational::from_integer(sign);
    let combo = &set.b2 + &set.s2.scale(&sign);
    let numerator = &set.b.derivative() + &set.s.scale(&sign);
    let rate = numerator.div(&set.b)?.scale_arg(&two());
    Ok(Sides::Uni(combo.derivative(), rate.mul(&combo)))
}

fn e2_sides(set: &BlowupSeriesSet, _: i64) -> Result<Sides> {
    let b = &set.b;
    let db = b.derivative();
    let residual = &(&b.derivative().derivative().mul(b) - &db.square()) + &set.s.square();
    let zero = TSeries::zero(residual.order());
    Ok(Sides::Uni(residual, zero))
}

fn e4_sides(set: &BlowupSeriesSet, _: i64) -> Result<Sides> {
    let b = &set.b;
    let d1 = b.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let d4 = d3.derivative();
    let mut residual = d4.mul(b);
    residual = &residual - &d3.mul(&d1).scale(&Rational::from_integer(4));
    residual = &residual + &d2.square().scale(&Rational::from_integer(3));
    residual = &residual + &b.square().scale(&two());
    residual = &residual - &set.s.square().scale_poly(&XPoly::monomial(Rational::from_integer(4), 1));
    let zero = TSeries::zero(residual.order());
    Ok(Sides::Uni(residual, zero))
}

fn bb_diagonal_sides(set: &BlowupSeriesSet, _: i64) -> Result<Sides> {
    let lhs = set.b.scale_arg(&two());
    let rhs = &set.b2.square() - &set.s2.square();
    Ok(Sides::Uni(lhs, rhs))
}

fn bivariate(order: i64, f: fn(&TSeries, &TSeries) -> Result<(BiSeries, BiSeries)>, set: &BlowupSeriesSet) -> Result<Sides> {
    // the derivative in (BBB) costs one order
    let (l, r) = f(&set.b.truncate(order + 1), &set.s.truncate(order + 1))?;
    Ok(Sides::Bi(l, r))
}

/// `(x value, [B^2, S^2, W, BS] references)`.
fn degeneration_refs(value: i64, order: i64) -> [TSeries; 4] {
    let gauss = elementary::gaussian(&Rational::from_integer(-value / 2), order);
    let (even, odd) = if value > 0 {
        (elementary::cosh(order), elementary::sinh(order))
    } else {
        (elementary::cos(order), elementary::sin(order))
    };
    // sinh(2t)/2 = sinh t cosh t, likewise for sin
    let half_double = even.mul(&odd);
    [
        gauss.mul(&even.square()),
        gauss.mul(&odd.square()),
        gauss.clone(),
        gauss.mul(&half_double),
    ]
}

fn degeneration_sides(set: &BlowupSeriesSet, order: i64, value: i64, slot: usize) -> Result<Sides> {
    let member = [&set.b2, &set.s2, &set.wronskian, &set.bs][slot];
    let lhs = member.eval_x(&Rational::from_integer(value));
    let rhs = degeneration_refs(value, order)[slot].clone();
    Ok(Sides::Uni(lhs, rhs))
}

fn relation_sides(set: &BlowupSeriesSet, _: i64) -> Result<Sides> {
    let expectations: [(&TSeries, i64, XPoly); 4] = [
        (&set.b2, 2, XPoly::zero()),
        (&set.s2, 2, XPoly::from_ints(&[2])),
        (&set.b2, 4, XPoly::from_ints(&[-4])),
        (&set.s2, 4, XPoly::from_ints(&[0, -8])),
    ];
    for (series, n, expected) in expectations {
        let actual = series.coeff_checked(n, true)?;
        if let Some((x, lhs, rhs)) = crate::series::first_poly_difference(&actual, &expected) {
            let scale = Rational::factorial(n as u32).recip()?;
            return Ok(Sides::Outcome(Some(Mismatch {
                t: n,
                x,
                lhs: (&lhs * &scale).to_string(),
                rhs: (&rhs * &scale).to_string(),
                u: None,
                v: None,
                series: None,
            })));
        }
    }
    Ok(Sides::Outcome(None))
}

macro_rules! descriptor {
    ($id:expr, $arity:ident, $status:ident, $target:expr, $headroom:expr, $hint:expr, $builder:expr) => {
        IdentityDescriptor {
            id: $id,
            arity: Arity::$arity,
            status: Status::$status,
            target: $target,
            headroom: $headroom,
            max_feasible_order_hint: $hint,
            builder: $builder,
        }
    };
}

/// The fixed, ordered identity catalog.
pub struct Catalog;

impl Catalog {
    pub fn descriptors() -> &'static [IdentityDescriptor] {
        static CATALOG: &[IdentityDescriptor] = &[
            descriptor!("frak_b0_eq_b2", Univariate, ConjecturalSeriesLevel, Target::Main, 0, 40,
                |s, _| uni(&s.frak_b0, &s.b2)),
            descriptor!("frak_btau_eq_s2", Univariate, ConjecturalSeriesLevel, Target::Main, 0, 40,
                |s, _| uni(&s.frak_btau, &s.s2)),
            descriptor!("frak_s0_eq_wronskian", Univariate, ConjecturalSeriesLevel, Target::Main, 0, 40,
                |s, _| uni(&s.frak_s0, &s.wronskian)),
            descriptor!("frak_s1_eq_bs", Univariate, ConjecturalSeriesLevel, Target::Main, 0, 40,
                |s, _| uni(&s.frak_s1, &s.bs)),
            descriptor!("bplus_root_form", Univariate, Theorem, Target::Main, 0, 40,
                |s, _| { let (p, _) = frak_b_root_form(&s.b, &s.s)?; uni(&s.bplus, &p) }),
            descriptor!("bminus_root_form", Univariate, Theorem, Target::Main, 0, 40,
                |s, _| { let (_, m) = frak_b_root_form(&s.b, &s.s)?; uni(&s.bminus, &m) }),
            descriptor!("bplus_bminus_product", Univariate, Theorem, Target::Main, 0, 40,
                |s, _| uni(&s.bplus.mul(&s.bminus), &s.b.scale_arg(&two()))),
            descriptor!("pm_ode_plus", Univariate, ConjecturalSeriesLevel, Target::Main, 1, 40,
                |s, _| pm_ode_sides(s, 1)),
            descriptor!("pm_ode_minus", Univariate, ConjecturalSeriesLevel, Target::Main, 1, 40,
                |s, _| pm_ode_sides(s, -1)),
            descriptor!("ode_e2", Univariate, ConjecturalSeriesLevel, Target::Main, 2, 40, e2_sides),
            descriptor!("ode_e4", Univariate, ConjecturalSeriesLevel, Target::Main, 4, 40, e4_sides),
            descriptor!("bb_diagonal", Univariate, ConjecturalSeriesLevel, Target::Main, 0, 40, bb_diagonal_sides),
            descriptor!("bb", Bivariate, ConjecturalSeriesLevel, Target::Bivariate, 0, 20,
                |s, n| bivariate(n, bb_sides, s)),
            descriptor!("bbb", Bivariate, ConjecturalSeriesLevel, Target::Bivariate, 1, 20,
                |s, n| bivariate(n, bbb_sides, s)),
            descriptor!("simple_type_b2", Univariate, Theorem, Target::Main, 0, 40,
                |s, n| degeneration_sides(s, n, 2, 0)),
            descriptor!("simple_type_s2", Univariate, Theorem, Target::Main, 0, 40,
                |s, n| degeneration_sides(s, n, 2, 1)),
            descriptor!("simple_type_wronskian", Univariate, Theorem, Target::Main, 0, 40,
                |s, n| degeneration_sides(s, n, 2, 2)),
            descriptor!("simple_type_bs", Univariate, Theorem, Target::Main, 0, 40,
                |s, n| degeneration_sides(s, n, 2, 3)),
            descriptor!("mirror_b2", Univariate, ConjecturalSeriesLevel, Target::Mirror, 0, 40,
                |s, n| degeneration_sides(s, n, -2, 0)),
            descriptor!("mirror_s2", Univariate, ConjecturalSeriesLevel, Target::Mirror, 0, 40,
                |s, n| degeneration_sides(s, n, -2, 1)),
            descriptor!("mirror_wronskian", Univariate, ConjecturalSeriesLevel, Target::Mirror, 0, 40,
                |s, n| degeneration_sides(s, n, -2, 2)),
            descriptor!("mirror_bs", Univariate, ConjecturalSeriesLevel, Target::Mirror, 0, 40,
                |s, n| degeneration_sides(s, n, -2, 3)),
            descriptor!("relation_coefficients", Univariate, Theorem, Target::Fixed(4), 0, 4, relation_sides),
        ];
        CATALOG
    }

    pub fn ids() -> Vec<&'static str> {
        Self::descriptors().iter().map(|d| d.id).collect()
    }

    pub fn get(id: &str) -> Option<&'static IdentityDescriptor> {
        Self::descriptors().iter().find(|d| d.id == id)
    }

    /// Largest headroom any selected identity needs.
    pub fn headroom(ids: &[String]) -> i64 {
        Self::descriptors()
            .iter()
            .filter(|d| ids.is_empty() || ids.iter().any(|i| i == d.id))
            .map(|d| d.headroom)
            .max()
            .unwrap_or(0)
    }
}

/// Checks one identity through `order` on `set`.
pub fn check(desc: &IdentityDescriptor, set: &BlowupSeriesSet, order: i64) -> Result<VerificationReport> {
    if order + desc.headroom > set.order {
        return Err(Error::Precondition(format!(
            "{} through order {order} needs series through {}, set has {}",
            desc.id,
            order + desc.headroom,
            set.order
        )));
    }
    let started = Instant::now();
    let mismatch = match (desc.builder)(set, order)? {
        Sides::Uni(l, r) => Mismatch::from_comparison(&l.equal_to_order(&r, order)?),
        Sides::Bi(l, r) => Mismatch::from_bi_comparison(&l.equal_to_order(&r, order)?),
        Sides::Outcome(m) => m,
    };
    let mut report = VerificationReport::new(desc.id, order, desc.status, mismatch);
    report.series_hash = set.hash();
    report.ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

fn check_ids<const N: usize>(ids: [&str; N], set: &BlowupSeriesSet, order: i64) -> Result<[VerificationReport; N]> {
    let reports = ids
        .iter()
        .map(|id| check(Catalog::get(id).expect("catalog id"), set, order))
        .collect::<Result<Vec<_>>>()?;
    Ok(reports.try_into().expect("length N"))
}

/// `𝔅₀ = B²`, `𝔅τ = S²`, `𝔖₀ = BS' - B'S`, `𝔖₁ = BS`.
pub fn verify_frak_identities(set: &BlowupSeriesSet, order: i64) -> Result<[VerificationReport; 4]> {
    check_ids(["frak_b0_eq_b2", "frak_btau_eq_s2", "frak_s0_eq_wronskian", "frak_s1_eq_bs"], set, order)
}

pub fn verify_bb(set: &BlowupSeriesSet, total_order: i64) -> Result<VerificationReport> {
    check(Catalog::get("bb").expect("catalog id"), set, total_order)
}

pub fn verify_bbb(set: &BlowupSeriesSet, total_order: i64) -> Result<VerificationReport> {
    check(Catalog::get("bbb").expect("catalog id"), set, total_order)
}

/// `d/dt(B² ± S²) = ((B' ± S)/B)(2t) (B² ± S²)`.
pub fn verify_pm_ode(set: &BlowupSeriesSet, order: i64) -> Result<[VerificationReport; 2]> {
    check_ids(["pm_ode_plus", "pm_ode_minus"], set, order)
}

/// At `x = 2` the four theorem series become Gaussians times hyperbolic
/// functions.
pub fn verify_simple_type_degeneration(set: &BlowupSeriesSet, order: i64) -> Result<[VerificationReport; 4]> {
    check_ids(["simple_type_b2", "simple_type_s2", "simple_type_wronskian", "simple_type_bs"], set, order)
}

/// The `x = -2` counterpart, with trigonometric functions.
pub fn verify_simple_type_mirror(set: &BlowupSeriesSet, order: i64) -> Result<[VerificationReport; 4]> {
    check_ids(["mirror_b2", "mirror_s2", "mirror_wronskian", "mirror_bs"], set, order)
}

pub fn verify_relations_coefficients(set: &BlowupSeriesSet) -> Result<VerificationReport> {
    check(Catalog::get("relation_coefficients").expect("catalog id"), set, 4)
}

/// Runs the catalog against an existing set, in catalog order.
pub fn verify_set(set: &BlowupSeriesSet, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let selected: Vec<&IdentityDescriptor> = Catalog::descriptors()
        .iter()
        .filter(|d| config.identities.is_empty() || config.identities.iter().any(|i| i == d.id))
        .collect();
    let run = || {
        selected
            .par_iter()
            .map(|d| check(d, set, config.target_order(d.target)))
            .collect::<Result<Vec<_>>>()
    };
    if config.jobs <= 1 {
        return selected.iter().map(|d| check(d, set, config.target_order(d.target))).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    pool.install(run)
}

/// Generates the series and runs the (filtered) catalog.
pub fn verify_all(config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    if config.order < MIN_VERIFY_ORDER {
        return Err(Error::Precondition(format!(
            "verification needs order >= {MIN_VERIFY_ORDER}, got {}",
            config.order
        )));
    }
    for id in &config.identities {
        if Catalog::get(id).is_none() {
            return Err(Error::Precondition(format!("unknown identity {id:?}")));
        }
    }
    let needed = config.order.max(config.bivariate_order).max(config.mirror_order).max(4);
    let set = BlowupSeriesSet::generate(needed + Catalog::headroom(&config.identities))?;
    verify_set(&set, config)
}
