//! Structured outcome of checking one identity.

use serde::{Deserialize, Serialize};

use crate::series::{BiComparison, Comparison};

/// How much weight a passing check carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Consequence of a proven statement; the check certifies the engine.
    Theorem,
    /// Expected to hold as series but only known under evaluation; a pass
    /// certifies the finite order checked, nothing more.
    ConjecturalSeriesLevel,
    /// Comparison against transcribed reference data.
    Golden,
}

/// Location and values of the first disagreement, in plain (unnormalized)
/// coefficients. `t` is the total degree for bivariate identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub t: i64,
    pub x: usize,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
}

impl Mismatch {
    pub fn from_comparison(cmp: &Comparison) -> Option<Mismatch> {
        match cmp {
            Comparison::Equal => None,
            Comparison::Differ { t, x, lhs, rhs } => Some(Mismatch {
                t: *t,
                x: *x,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                u: None,
                v: None,
                series: None,
            }),
        }
    }

    pub fn from_bi_comparison(cmp: &BiComparison) -> Option<Mismatch> {
        match cmp {
            BiComparison::Equal => None,
            BiComparison::Differ { u, v, x, lhs, rhs } => Some(Mismatch {
                t: (u + v) as i64,
                x: *x,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                u: Some(*u),
                v: Some(*v),
                series: None,
            }),
        }
    }
}

/// One line of verification output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub order: i64,
    pub pass: bool,
    pub status: Status,
    pub first_mismatch: Option<Mismatch>,
    pub series_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden_hash: Option<String>,
    pub ms: u64,
}

impl VerificationReport {
    pub fn new(identity: &str, order: i64, status: Status, mismatch: Option<Mismatch>) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            order,
            pass: mismatch.is_none(),
            status,
            first_mismatch: mismatch,
            series_hash: String::new(),
            golden_hash: None,
            ms: 0,
        }
    }

    /// JSON line with the timing field zeroed, for reproducibility checks.
    pub fn to_json_without_timing(&self) -> String {
        let mut copy = self.clone();
        copy.ms = 0;
        serde_json::to_string(&copy).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_has_no_mismatch_and_null_field() {
        let r = VerificationReport::new("demo", 4, Status::Theorem, None);
        assert!(r.pass);
        let json = r.to_json();
        assert!(json.contains(r#""first_mismatch":null"#));
        assert!(json.starts_with(r#"{"identity":"demo","order":4,"pass":true"#));
    }
}
