//! JSON encodings of series.
//!
//! `TSeries`: `{"variable":"t","valuation":v,"order":N,"normalization":"plain"|"factorial","coeffs":[XPoly, ...]}`
//! where `coeffs[k]` is the coefficient of `t^(v+k)` for `k = 0 ..= N - v`.
//! Under factorial normalization each stored coefficient is the plain one
//! times `n!`. `BiSeries` uses `"variables":["u","v"]` and the row-major
//! triangle.

use serde::{Deserialize, Serialize};

use crate::algebra::{Rational, XPoly};
use crate::error::{Error, Result};
use crate::series::{BiSeries, TSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Plain,
    #[default]
    Factorial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TSeriesJson {
    pub variable: String,
    pub valuation: i64,
    pub order: i64,
    pub normalization: Normalization,
    pub coeffs: Vec<XPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiSeriesJson {
    pub variables: [String; 2],
    pub order: i64,
    pub normalization: Normalization,
    pub coeffs: Vec<XPoly>,
}

fn factorial_factor(n: i64) -> Result<Rational> {
    if n < 0 {
        return Err(Error::Precondition(format!(
            "factorial normalization undefined for t^{n}"
        )));
    }
    Ok(Rational::factorial(n as u32))
}

impl TSeriesJson {
    pub fn encode(series: &TSeries, normalization: Normalization) -> Result<Self> {
        let coeffs = series
            .terms()
            .map(|(n, c)| match normalization {
                Normalization::Plain => Ok(c.clone()),
                Normalization::Factorial => Ok(c.scale(&factorial_factor(n)?)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TSeriesJson {
            variable: "t".into(),
            valuation: series.valuation(),
            order: series.order(),
            normalization,
            coeffs,
        })
    }

    pub fn decode(&self) -> Result<TSeries> {
        if self.variable != "t" {
            return Err(Error::Parse(format!("expected variable \"t\", got {:?}", self.variable)));
        }
        let expected = (self.order - self.valuation + 1).max(0) as usize;
        if self.coeffs.len() > expected {
            return Err(Error::Parse(format!(
                "{} coefficients exceed the range t^{}..=t^{}",
                self.coeffs.len(),
                self.valuation,
                self.order
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let n = self.valuation + k as i64;
                match self.normalization {
                    Normalization::Plain => Ok(c.clone()),
                    Normalization::Factorial => Ok(c.scale(&factorial_factor(n)?.recip()?)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TSeries::from_coeffs(self.valuation, coeffs, self.order))
    }
}

impl BiSeriesJson {
    /// Bivariate series are always written with plain coefficients.
    pub fn encode(series: &BiSeries) -> Self {
        BiSeriesJson {
            variables: ["u".into(), "v".into()],
            order: series.order(),
            normalization: Normalization::Plain,
            coeffs: series.triangle().to_vec(),
        }
    }

    pub fn decode(&self) -> Result<BiSeries> {
        if self.variables != ["u", "v"] {
            return Err(Error::Parse(format!("expected variables [u, v], got {:?}", self.variables)));
        }
        if self.normalization != Normalization::Plain {
            return Err(Error::Parse("bivariate series must use plain normalization".into()));
        }
        BiSeries::from_triangle(self.order, self.coeffs.clone())
    }
}

pub fn tseries_to_string(series: &TSeries, normalization: Normalization) -> Result<String> {
    let json = TSeriesJson::encode(series, normalization)?;
    Ok(serde_json::to_string(&json).expect("series JSON is always serializable"))
}

pub fn tseries_from_str(s: &str) -> Result<TSeries> {
    let json: TSeriesJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    json.decode()
}
