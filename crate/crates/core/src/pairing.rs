//! Evaluation of the blow-up formulas against user-supplied data.
//!
//! A Donaldson polynomial restricted as in the formulas is modeled only by
//! its moments `μ_k = D(x^k z₀)` against a fixed implicit class `z₀`. Pairing
//! a universal series with such a functional replaces every `x^k` by `μ_k`,
//! leaving a rational series in `t`.
//!
//! Even case: `D_c(e^{tτ}) = D_c(B²) + D_{c+τ}(S²)`, or equivalently
//! `D_c(B²) + ½ ν(S²)` with `ν` the τ-inserted functional. Odd case:
//! `D_c(e^{tτ}) = D_c(BS' - B'S) + ν(BS)`.
//!
//! The inserted data is taken as given. Real invariants satisfy
//! `ν = 2 D_{c+τ}` in the even case; [`Evaluator::even_forms_agree`] checks
//! this for a data set but nothing enforces it.

use serde::{Deserialize, Serialize};

use crate::algebra::{Rational, XPoly};
use crate::blowup::BlowupSeriesSet;
use crate::elementary;
use crate::error::{Error, Result};
use crate::json::{Normalization, TSeriesJson};
use crate::series::TSeries;

/// Values of a linear form on `x^0, x^1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentFunctional {
    #[serde(default)]
    pub label: String,
    pub moments: Vec<Rational>,
}

impl MomentFunctional {
    pub fn new(label: impl Into<String>, moments: Vec<Rational>) -> Self {
        MomentFunctional { label: label.into(), moments }
    }

    /// `c r^k` for `k < len`: the moments of evaluation at `x = r`, scaled.
    pub fn geometric(label: impl Into<String>, c: &Rational, r: &Rational, len: usize) -> Self {
        let mut moments = Vec::with_capacity(len);
        let mut power = c.clone();
        for _ in 0..len {
            moments.push(power.clone());
            power = &power * r;
        }
        MomentFunctional::new(label, moments)
    }

    pub fn zeros(label: impl Into<String>, len: usize) -> Self {
        MomentFunctional::new(label, vec![Rational::zero(); len])
    }

    /// `alpha * self + beta * other`, padded to the longer length.
    pub fn combine(&self, alpha: &Rational, other: &MomentFunctional, beta: &Rational) -> Self {
        let len = self.moments.len().max(other.moments.len());
        let at = |m: &[Rational], k: usize| m.get(k).cloned().unwrap_or_default();
        let moments = (0..len)
            .map(|k| &(alpha * &at(&self.moments, k)) + &(beta * &at(&other.moments, k)))
            .collect();
        MomentFunctional::new(self.label.clone(), moments)
    }

    pub fn apply(&self, p: &XPoly) -> Result<Rational> {
        if p.coeffs().len() > self.moments.len() {
            return Err(Error::InsufficientMoments {
                label: self.label.clone(),
                required: p.coeffs().len(),
                got: self.moments.len(),
            });
        }
        Ok(p.coeffs()
            .iter()
            .zip(&self.moments)
            .fold(Rational::zero(), |acc, (c, m)| &acc + &(c * m)))
    }
}

/// Replaces every `x^k` in the coefficients of `f` by `μ_k`.
pub fn pair(f: &TSeries, mu: &MomentFunctional) -> Result<TSeries> {
    if f.valuation() < 0 && !f.is_zero() {
        return Err(Error::Precondition("pairing needs a power series".into()));
    }
    let required = f.max_x_degree().map_or(0, |d| d + 1);
    if required > mu.moments.len() {
        return Err(Error::InsufficientMoments {
            label: mu.label.clone(),
            required,
            got: mu.moments.len(),
        });
    }
    let coeffs = f
        .terms()
        .map(|(_, c)| mu.apply(c).map(XPoly::constant))
        .collect::<Result<Vec<_>>>()?;
    Ok(TSeries::from_coeffs(f.valuation(), coeffs, f.order()))
}

/// Which formula produced an [`EvalResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Maina,
    Mainb,
    MainPrime,
    CorollaryEven,
    CorollaryOdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A rational series in `t` (all coefficients free of `x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalResult {
    pub series: TSeries,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct EvalResultJson {
    provenance: Provenance,
    #[serde(flatten)]
    series: TSeriesJson,
}

impl EvalResult {
    pub fn to_json(&self, normalization: Normalization) -> Result<String> {
        let json = EvalResultJson {
            provenance: self.provenance,
            series: TSeriesJson::encode(&self.series, normalization)?,
        };
        Ok(serde_json::to_string(&json).expect("serializable"))
    }

    pub fn from_json(text: &str) -> Result<EvalResult> {
        let json: EvalResultJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(EvalResult { series: json.series.decode()?, provenance: json.provenance })
    }
}

/// Holds the universal series for one order and evaluates the formulas.
#[derive(Clone, Debug)]
pub struct Evaluator {
    set: BlowupSeriesSet,
}

impl Evaluator {
    pub fn new(order: i64) -> Result<Self> {
        Ok(Evaluator { set: BlowupSeriesSet::generate(order)? })
    }

    pub fn from_set(set: BlowupSeriesSet) -> Self {
        Evaluator { set }
    }

    pub fn set(&self) -> &BlowupSeriesSet {
        &self.set
    }

    pub fn order(&self) -> i64 {
        self.set.order
    }

    /// `D_c(B²) + D_{c+τ}(S²)`.
    pub fn eval_even(&self, mu_c: &MomentFunctional, mu_ctau: &MomentFunctional) -> Result<EvalResult> {
        let series = &pair(&self.set.b2, mu_c)? + &pair(&self.set.s2, mu_ctau)?;
        Ok(EvalResult { series, provenance: Provenance::Maina })
    }

    /// `D_c(B²) + ½ ν(S²)` with `ν` the τ-inserted functional.
    pub fn eval_even_mainprime(&self, mu_c: &MomentFunctional, nu_c: &MomentFunctional) -> Result<EvalResult> {
        let half = Rational::new(1, 2)?;
        let series = &pair(&self.set.b2, mu_c)? + &pair(&self.set.s2, nu_c)?.scale(&half);
        Ok(EvalResult { series, provenance: Provenance::MainPrime })
    }

    /// `D_c(BS' - B'S) + ν(BS)` with `ν` the τ-inserted functional.
    pub fn eval_odd(&self, mu_c: &MomentFunctional, nu_c: &MomentFunctional) -> Result<EvalResult> {
        let series = &pair(&self.set.wronskian, mu_c)? + &pair(&self.set.bs, nu_c)?;
        Ok(EvalResult { series, provenance: Provenance::Mainb })
    }

    /// Whether both even-case forms agree on the given data, i.e. whether
    /// `nu_c` and `mu_ctau` are related as real invariants must be.
    pub fn even_forms_agree(
        &self,
        mu_c: &MomentFunctional,
        mu_ctau: &MomentFunctional,
        nu_c: &MomentFunctional,
    ) -> Result<bool> {
        let a = self.eval_even(mu_c, mu_ctau)?.series;
        let b = self.eval_even_mainprime(mu_c, nu_c)?.series;
        Ok(a.equal_to_order(&b, self.order())?.is_equal())
    }
}

pub fn eval_even(mu_c: &MomentFunctional, mu_ctau: &MomentFunctional, order: i64) -> Result<EvalResult> {
    Evaluator::new(order)?.eval_even(mu_c, mu_ctau)
}

pub fn eval_even_mainprime(mu_c: &MomentFunctional, nu_c: &MomentFunctional, order: i64) -> Result<EvalResult> {
    Evaluator::new(order)?.eval_even_mainprime(mu_c, nu_c)
}

pub fn eval_odd(mu_c: &MomentFunctional, nu_c: &MomentFunctional, order: i64) -> Result<EvalResult> {
    Evaluator::new(order)?.eval_odd(mu_c, nu_c)
}

/// Closed forms for simple type data:
/// even `e^{-t²}(a cosh²t + b sinh²t)`, odd `e^{-t²}(a + d sinh(2t)/2)`.
pub fn eval_simple_type(a: &Rational, b: &Rational, d: &Rational, parity: Parity, order: i64) -> EvalResult {
    let gauss = elementary::gaussian(&Rational::from_integer(-1), order);
    let (ch, sh) = (elementary::cosh(order), elementary::sinh(order));
    match parity {
        Parity::Even => {
            let inner = &ch.square().scale(a) + &sh.square().scale(b);
            EvalResult { series: gauss.mul(&inner), provenance: Provenance::CorollaryEven }
        }
        Parity::Odd => {
            let inner = &TSeries::one(order).scale(a) + &ch.mul(&sh).scale(d);
            EvalResult { series: gauss.mul(&inner), provenance: Provenance::CorollaryOdd }
        }
    }
}

/// Functional keys of an evaluation request.
pub const KEY_C: &str = "D_c";
pub const KEY_C_TAU: &str = "D_{c+tau}";
pub const KEY_TAU_INSERTED: &str = "D_c tau-inserted";

/// `{"parity":"even"|"odd","order":N,"functionals":{...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRequest {
    pub parity: Parity,
    pub order: i64,
    pub functionals: std::collections::BTreeMap<String, MomentFunctional>,
}

impl EvalRequest {
    pub fn parse(text: &str) -> Result<EvalRequest> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    fn functional(&self, key: &str) -> Option<MomentFunctional> {
        self.functionals.get(key).map(|f| {
            let mut f = f.clone();
            if f.label.is_empty() {
                f.label = key.to_string();
            }
            f
        })
    }

    fn require(&self, key: &str) -> Result<MomentFunctional> {
        self.functional(key)
            .ok_or_else(|| Error::Precondition(format!("{:?} parity needs functional {key:?}", self.parity)))
    }

    /// Even requests use `D_{c+tau}` when present, else the τ-inserted
    /// form; odd requests need `D_c` and the τ-inserted functional.
    pub fn evaluate(&self) -> Result<EvalResult> {
        if self.order < 0 {
            return Err(Error::Precondition(format!("order must be >= 0, got {}", self.order)));
        }
        let mu_c = self.require(KEY_C)?;
        match self.parity {
            Parity::Even => {
                let evaluator = Evaluator::new(self.order)?;
                if let Some(mu_ctau) = self.functional(KEY_C_TAU) {
                    evaluator.eval_even(&mu_c, &mu_ctau)
                } else {
                    let nu = self.functional(KEY_TAU_INSERTED).ok_or_else(|| {
                        Error::Precondition(format!(
                            "even parity needs {KEY_C_TAU:?} or {KEY_TAU_INSERTED:?}"
                        ))
                    })?;
                    evaluator.eval_even_mainprime(&mu_c, &nu)
                }
            }
            Parity::Odd => {
                let nu = self.require(KEY_TAU_INSERTED)?;
                Evaluator::new(self.order)?.eval_odd(&mu_c, &nu)
            }
        }
    }
}
