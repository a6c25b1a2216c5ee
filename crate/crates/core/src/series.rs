//! Truncated power and Laurent series in `t` over `Q[x]`, plus bivariate
//! series in `(u, v)` truncated by total degree.
//!
//! Every [`TSeries`] carries the exponent `order` through which its
//! coefficients are exact. Operations compute the order of their result from
//! the orders and valuations of their inputs; nothing beyond `order` is ever
//! stored or compared.

use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{Rational, XPoly};
use crate::error::{Error, Result};

/// Truncated Laurent series `sum_{n = valuation}^{order} c_n t^n`.
///
/// `coeffs[k]` holds the coefficient of `t^(valuation + k)`. The leading
/// stored coefficient is nonzero; a series that vanishes through `order` has
/// `valuation == order + 1` and no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TSeries {
    valuation: i64,
    order: i64,
    coeffs: Vec<XPoly>,
}

impl std::fmt::Debug for TSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TSeries[")?;
        for (n, c) in self.terms() {
            if !c.is_zero() {
                write!(f, " ({c})t^{n}")?;
            }
        }
        write!(f, " + O(t^{})]", self.order + 1)
    }
}

/// Outcome of comparing two series through a given order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    /// Least `t`-power (then `x`-power) where the plain coefficients differ.
    Differ { t: i64, x: usize, lhs: Rational, rhs: Rational },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

/// First differing `x`-coefficient of two polynomials.
pub(crate) fn first_poly_difference(a: &XPoly, b: &XPoly) -> Option<(usize, Rational, Rational)> {
    let len = a.coeffs().len().max(b.coeffs().len());
    (0..len).find_map(|k| {
        let (ak, bk) = (a.coeff(k), b.coeff(k));
        (ak != bk).then_some((k, ak, bk))
    })
}

impl TSeries {
    /// Builds a series from coefficients of `t^start, t^(start+1), ...`,
    /// dropping anything above `order` and normalizing the valuation.
    pub fn from_coeffs(start: i64, coeffs: Vec<XPoly>, order: i64) -> Self {
        let keep = (order - start + 1).max(0) as usize;
        let mut coeffs = coeffs;
        coeffs.truncate(keep);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => TSeries::zero(order),
            Some(skip) => {
                coeffs.drain(..skip);
                let valuation = start + skip as i64;
                coeffs.resize((order - valuation + 1) as usize, XPoly::zero());
                TSeries { valuation, order, coeffs }
            }
        }
    }

    /// Series with rational coefficients of `t^0, t^1, ...`.
    pub fn from_rationals(coeffs: Vec<Rational>, order: i64) -> Self {
        TSeries::from_coeffs(0, coeffs.into_iter().map(XPoly::constant).collect(), order)
    }

    pub fn zero(order: i64) -> Self {
        TSeries { valuation: order + 1, order, coeffs: Vec::new() }
    }

    pub fn one(order: i64) -> Self {
        TSeries::monomial(XPoly::one(), 0, order)
    }

    /// `c * t^power`, exact through `order`.
    pub fn monomial(c: XPoly, power: i64, order: i64) -> Self {
        TSeries::from_coeffs(power, vec![c], order)
    }

    /// The series `t`.
    pub fn t(order: i64) -> Self {
        TSeries::monomial(XPoly::one(), 1, order)
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^n`; zero below the valuation.
    ///
    /// # Panics
    /// If `n > order`: that coefficient is unknown.
    pub fn coeff(&self, n: i64) -> XPoly {
        assert!(n <= self.order, "coefficient t^{n} requested beyond order {}", self.order);
        self.coeff_ref(n).cloned().unwrap_or_default()
    }

    fn coeff_ref(&self, n: i64) -> Option<&XPoly> {
        if n < self.valuation || n > self.order {
            None
        } else {
            Some(&self.coeffs[(n - self.valuation) as usize])
        }
    }

    /// `(exponent, coefficient)` pairs from the valuation through the order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &XPoly)> {
        let v = self.valuation;
        self.coeffs.iter().enumerate().map(move |(k, c)| (v + k as i64, c))
    }

    /// Dense coefficients of `t^0 ..= t^order` for a series with valuation
    /// at least zero.
    fn dense_from_zero(&self) -> Vec<XPoly> {
        debug_assert!(self.valuation >= 0 || self.is_zero());
        (0..=self.order).map(|n| self.coeff(n)).collect()
    }

    /// Drops every term above `order` (no-op if `order` is not lower).
    pub fn truncate(&self, order: i64) -> TSeries {
        if order >= self.order {
            return self.clone();
        }
        TSeries::from_coeffs(self.valuation, self.coeffs.clone(), order)
    }

    /// Highest `x`-degree among the coefficients.
    pub fn max_x_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(XPoly::degree).max()
    }

    pub fn is_even(&self) -> bool {
        self.terms().all(|(n, c)| n % 2 == 0 || c.is_zero())
    }

    pub fn is_odd(&self) -> bool {
        self.terms().all(|(n, c)| n % 2 != 0 || c.is_zero())
    }

    fn zip_with(&self, other: &TSeries, f: impl Fn(&XPoly, &XPoly) -> XPoly) -> TSeries {
        let order = self.order.min(other.order);
        let lo = self.valuation.min(other.valuation).min(order + 1);
        let zero = XPoly::zero();
        let coeffs = (lo..=order)
            .map(|n| {
                f(
                    self.coeff_ref(n).unwrap_or(&zero),
                    other.coeff_ref(n).unwrap_or(&zero),
                )
            })
            .collect();
        TSeries::from_coeffs(lo, coeffs, order)
    }

    pub fn map_coeffs(&self, f: impl Fn(&XPoly) -> XPoly) -> TSeries {
        TSeries::from_coeffs(self.valuation, self.coeffs.iter().map(f).collect(), self.order)
    }

    pub fn scale(&self, c: &Rational) -> TSeries {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn scale_poly(&self, p: &XPoly) -> TSeries {
        self.map_coeffs(|q| p * q)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> TSeries {
        TSeries::from_coeffs(self.valuation + k, self.coeffs.clone(), self.order + k)
    }

    /// Substitutes `x = v` in every coefficient.
    pub fn eval_x(&self, v: &Rational) -> TSeries {
        self.map_coeffs(|p| XPoly::constant(p.eval_at(v)))
    }

    /// Product. Exact through `min(order_a + val_b, order_b + val_a)`.
    pub fn mul(&self, other: &TSeries) -> TSeries {
        let order = (self.order + other.valuation).min(other.order + self.valuation);
        if self.is_zero() || other.is_zero() {
            return TSeries::zero(order);
        }
        let lo = self.valuation + other.valuation;
        let len = (order - lo + 1).max(0) as usize;
        let mut out = vec![XPoly::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len.saturating_sub(i)) {
                out[i + j].add_product_assign(a, b);
            }
        }
        TSeries::from_coeffs(lo, out, order)
    }

    pub fn square(&self) -> TSeries {
        self.mul(self)
    }

    /// Termwise `d/dt`; the order drops by one.
    pub fn derivative(&self) -> TSeries {
        let coeffs = self
            .terms()
            .map(|(n, c)| c.scale(&Rational::from_integer(n)))
            .collect();
        TSeries::from_coeffs(self.valuation - 1, coeffs, self.order - 1)
    }

    /// Definite integral from 0; the order rises by one.
    pub fn integrate(&self) -> Result<TSeries> {
        if let Some(c) = self.coeff_ref(-1) {
            if !c.is_zero() {
                return Err(Error::LogarithmicSingularity);
            }
        }
        let coeffs = self
            .terms()
            .map(|(n, c)| {
                if n == -1 {
                    XPoly::zero()
                } else {
                    c.scale(&Rational::new(1, n + 1).expect("n + 1 != 0"))
                }
            })
            .collect();
        Ok(TSeries::from_coeffs(self.valuation + 1, coeffs, self.order + 1))
    }

    /// Argument rescaling `f(t) -> f(c t)`.
    ///
    /// # Panics
    /// If `c == 0` and the series has negative-power terms.
    pub fn scale_arg(&self, c: &Rational) -> TSeries {
        if c.is_zero() {
            assert!(self.valuation >= 0, "cannot evaluate a Laurent tail at t = 0");
            return TSeries::from_coeffs(0, vec![self.coeff(0)], self.order);
        }
        let inv = c.recip().expect("c != 0");
        let coeffs = self
            .terms()
            .map(|(n, p)| {
                let factor = if n >= 0 { c.pow(n as u32) } else { inv.pow((-n) as u32) };
                p.scale(&factor)
            })
            .collect();
        TSeries::from_coeffs(self.valuation, coeffs, self.order)
    }

    /// Multiplicative inverse in `Q[x]((t))`.
    ///
    /// Requires the leading coefficient to be a nonzero rational. The result
    /// has valuation `-v` and the same relative precision as `self`.
    pub fn recip(&self) -> Result<TSeries> {
        let lead = self
            .coeffs
            .first()
            .ok_or_else(|| Error::NonUnitLeading("0".into()))?;
        let lead = lead
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::NonUnitLeading(lead.to_string()))?;
        let inv = lead.recip()?;
        let neg_inv = -&inv;
        let precision = (self.order - self.valuation) as usize;
        let mut out: Vec<XPoly> = Vec::with_capacity(precision + 1);
        out.push(XPoly::constant(inv));
        for n in 1..=precision {
            let mut acc = XPoly::zero();
            for k in 1..=n {
                acc.add_product_assign(&self.coeffs[k], &out[n - k]);
            }
            out.push(acc.scale(&neg_inv));
        }
        Ok(TSeries::from_coeffs(
            -self.valuation,
            out,
            precision as i64 - self.valuation,
        ))
    }

    /// `self / other`, as `self * other^-1` with valuation subtraction.
    pub fn div(&self, other: &TSeries) -> Result<TSeries> {
        Ok(self.mul(&other.recip()?))
    }

    /// `exp(self)` for a series with zero constant term, from `f' = a' f`.
    pub fn exp(&self) -> Result<TSeries> {
        if self.valuation < 1 {
            return Err(Error::Precondition(format!(
                "exp requires valuation >= 1, got {}",
                self.valuation
            )));
        }
        let order = self.order;
        if order < 0 {
            return Ok(TSeries::zero(order));
        }
        let a = self.dense_from_zero();
        // k * a_k, the coefficients of t * a'
        let ka: Vec<XPoly> = a
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&Rational::from_integer(k as i64)))
            .collect();
        let mut f: Vec<XPoly> = Vec::with_capacity(a.len());
        f.push(XPoly::one());
        for n in 1..a.len() {
            let mut acc = XPoly::zero();
            for k in 1..=n {
                acc.add_product_assign(&ka[k], &f[n - k]);
            }
            f.push(acc.scale(&Rational::new(1, n as i64)?));
        }
        Ok(TSeries::from_coeffs(0, f, order))
    }

    /// Square root with constant term 1 of a series whose constant term is 1.
    pub fn sqrt(&self) -> Result<TSeries> {
        if self.valuation != 0 || !self.coeffs[0].as_constant().is_some_and(|c| c.is_one()) {
            return Err(Error::Precondition("sqrt requires constant term 1".into()));
        }
        let a = &self.coeffs;
        let half = Rational::new(1, 2)?;
        let mut g: Vec<XPoly> = Vec::with_capacity(a.len());
        g.push(XPoly::one());
        for n in 1..a.len() {
            let mut acc = a[n].clone();
            for k in 1..n {
                acc.add_scaled_assign(&(&g[k] * &g[n - k]), &-Rational::one());
            }
            g.push(acc.scale(&half));
        }
        Ok(TSeries::from_coeffs(0, g, self.order))
    }

    /// Coefficient of `t^n`, multiplied by `n!` when `normalized`.
    pub fn coeff_checked(&self, n: i64, normalized: bool) -> Result<XPoly> {
        let lo = self.valuation.min(0);
        if n < lo || n > self.order || (normalized && n < 0) {
            return Err(Error::OutOfRange { index: n, valuation: self.valuation, order: self.order });
        }
        let c = self.coeff(n);
        Ok(if normalized { c.scale(&Rational::factorial(n as u32)) } else { c })
    }

    /// Compares through `t^n`; both series must be exact that far.
    pub fn equal_to_order(&self, other: &TSeries, n: i64) -> Result<Comparison> {
        if n > self.order || n > other.order {
            return Err(Error::Precondition(format!(
                "comparison through t^{n} but orders are {} and {}",
                self.order, other.order
            )));
        }
        let lo = self.valuation.min(other.valuation);
        let zero = XPoly::zero();
        for k in lo..=n {
            let a = self.coeff_ref(k).unwrap_or(&zero);
            let b = other.coeff_ref(k).unwrap_or(&zero);
            if let Some((x, lhs, rhs)) = first_poly_difference(a, b) {
                return Ok(Comparison::Differ { t: k, x, lhs, rhs });
            }
        }
        Ok(Comparison::Equal)
    }

    /// `t^n -> (u + v)^n` or `(u - v)^n`, truncated at total degree `order`.
    pub fn subst_pm(&self, sign: Sign) -> Result<BiSeries> {
        if self.valuation < 0 {
            return Err(Error::Precondition("substitution needs valuation >= 0".into()));
        }
        let mut out = BiSeries::zero(self.order);
        for (n, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let n = n as u32;
            for i in 0..=n {
                let j = n - i;
                let mut binom = Rational::binomial(n, i);
                if sign == Sign::Minus && j % 2 == 1 {
                    binom = -binom;
                }
                *out.slot_mut(i as usize, j as usize) = c.scale(&binom);
            }
        }
        Ok(out)
    }

    /// `f(u)` viewed as a bivariate series.
    pub fn in_u(&self) -> Result<BiSeries> {
        self.embed(true)
    }

    /// `f(v)` viewed as a bivariate series.
    pub fn in_v(&self) -> Result<BiSeries> {
        self.embed(false)
    }

    fn embed(&self, along_u: bool) -> Result<BiSeries> {
        if self.valuation < 0 {
            return Err(Error::Precondition("embedding needs valuation >= 0".into()));
        }
        let mut out = BiSeries::zero(self.order);
        for (n, c) in self.terms() {
            let n = n as usize;
            let slot = if along_u { out.slot_mut(n, 0) } else { out.slot_mut(0, n) };
            *slot = c.clone();
        }
        Ok(out)
    }
}

impl Add for &TSeries {
    type Output = TSeries;
    fn add(self, rhs: &TSeries) -> TSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TSeries {
    type Output = TSeries;
    fn sub(self, rhs: &TSeries) -> TSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &TSeries {
    type Output = TSeries;
    fn mul(self, rhs: &TSeries) -> TSeries {
        TSeries::mul(self, rhs)
    }
}

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        self.map_coeffs(|p| -p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Series in `(u, v)` truncated by total degree.
///
/// Coefficients live in a row-major triangle: row `i` (the `u`-exponent)
/// holds `j = 0 ..= order - i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiSeries {
    order: i64,
    coeffs: Vec<XPoly>,
}

/// First differing slot of two bivariate series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BiComparison {
    Equal,
    Differ { u: usize, v: usize, x: usize, lhs: Rational, rhs: Rational },
}

impl BiComparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, BiComparison::Equal)
    }
}

fn triangle_len(order: i64) -> usize {
    if order < 0 {
        0
    } else {
        let n = order as usize + 1;
        n * (n + 1) / 2
    }
}

impl BiSeries {
    pub fn zero(order: i64) -> Self {
        BiSeries { order, coeffs: vec![XPoly::zero(); triangle_len(order)] }
    }

    /// Builds from the row-major triangular layout.
    pub fn from_triangle(order: i64, coeffs: Vec<XPoly>) -> Result<Self> {
        if coeffs.len() != triangle_len(order) {
            return Err(Error::Parse(format!(
                "bivariate series of order {order} needs {} coefficients, got {}",
                triangle_len(order),
                coeffs.len()
            )));
        }
        Ok(BiSeries { order, coeffs })
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn triangle(&self) -> &[XPoly] {
        &self.coeffs
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let n = self.order as usize + 1;
        i * n - i * (i.saturating_sub(1)) / 2 + j
    }

    /// Coefficient of `u^i v^j`; zero outside the triangle.
    pub fn coeff(&self, i: usize, j: usize) -> XPoly {
        if (i + j) as i64 > self.order {
            XPoly::zero()
        } else {
            self.coeffs[self.index(i, j)].clone()
        }
    }

    fn slot(&self, i: usize, j: usize) -> &XPoly {
        &self.coeffs[self.index(i, j)]
    }

    fn slot_mut(&mut self, i: usize, j: usize) -> &mut XPoly {
        let idx = self.index(i, j);
        &mut self.coeffs[idx]
    }

    pub fn truncate(&self, order: i64) -> BiSeries {
        if order >= self.order {
            return self.clone();
        }
        let mut out = BiSeries::zero(order);
        for d in 0..=order as usize {
            for i in 0..=d {
                *out.slot_mut(i, d - i) = self.slot(i, d - i).clone();
            }
        }
        out
    }

    fn zip_with(&self, other: &BiSeries, f: impl Fn(&XPoly, &XPoly) -> XPoly) -> BiSeries {
        let order = self.order.min(other.order);
        let (a, b) = (self.truncate(order), other.truncate(order));
        BiSeries {
            order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(p, q)| f(p, q)).collect(),
        }
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let order = self.order.min(other.order);
        let mut out = BiSeries::zero(order);
        if order < 0 {
            return out;
        }
        let n = order as usize;
        for i1 in 0..=n {
            for j1 in 0..=n - i1 {
                let a = self.slot(i1, j1);
                if a.is_zero() {
                    continue;
                }
                let rest = n - i1 - j1;
                for i2 in 0..=rest {
                    for j2 in 0..=rest - i2 {
                        let b = other.slot(i2, j2);
                        if !b.is_zero() {
                            out.slot_mut(i1 + i2, j1 + j2).add_product_assign(a, b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Restriction to the diagonal `u = v = t`.
    pub fn diagonal(&self) -> TSeries {
        if self.order < 0 {
            return TSeries::zero(self.order);
        }
        let n = self.order as usize;
        let coeffs = (0..=n)
            .map(|d| {
                let mut acc = XPoly::zero();
                for i in 0..=d {
                    acc.add_scaled_assign(self.slot(i, d - i), &Rational::one());
                }
                acc
            })
            .collect();
        TSeries::from_coeffs(0, coeffs, self.order)
    }

    /// Compares through total degree `n`, scanning by total degree, then by
    /// ascending `u`-exponent.
    pub fn equal_to_order(&self, other: &BiSeries, n: i64) -> Result<BiComparison> {
        if n > self.order || n > other.order {
            return Err(Error::Precondition(format!(
                "comparison through total degree {n} but orders are {} and {}",
                self.order, other.order
            )));
        }
        for d in 0..=n.max(-1) as usize {
            if n < 0 {
                break;
            }
            for i in 0..=d {
                let j = d - i;
                if let Some((x, lhs, rhs)) = first_poly_difference(self.slot(i, j), other.slot(i, j)) {
                    return Ok(BiComparison::Differ { u: i, v: j, x, lhs, rhs });
                }
            }
        }
        Ok(BiComparison::Equal)
    }
}

impl Add for &BiSeries {
    type Output = BiSeries;
    fn add(self, rhs: &BiSeries) -> BiSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &BiSeries {
    type Output = BiSeries;
    fn sub(self, rhs: &BiSeries) -> BiSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &BiSeries {
    type Output = BiSeries;
    fn mul(self, rhs: &BiSeries) -> BiSeries {
        BiSeries::mul(self, rhs)
    }
}

/// Operation selector for [`biv_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiOp {
    Add,
    Sub,
    Mul,
}

pub fn biv_arith(a: &BiSeries, b: &BiSeries, op: BiOp) -> BiSeries {
    match op {
        BiOp::Add => a + b,
        BiOp::Sub => a - b,
        BiOp::Mul => a * b,
    }
}
