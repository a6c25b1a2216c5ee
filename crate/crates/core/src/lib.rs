//! Exact generation and verification of the universal blow-up series for
//! Donaldson invariants of (-1)- and (-2)-spheres.
//!
//! The crate is layered bottom-up:
//!
//! - [`algebra`]: exact rationals and dense polynomials in `x`;
//! - [`series`]: truncated Laurent series in `t` and bivariate series in
//!   `(u, v)` over `Q[x]`;
//! - [`blowup`]: generation of `B`, `S` and all derived series, plus the
//!   embedded reference table;
//! - [`verify`]: the identity catalog and structured reports;
//! - [`pairing`]: evaluation of the blow-up formulas against moment data.

pub mod algebra;
pub mod blowup;
pub mod elementary;
pub mod error;
pub mod json;
pub mod pairing;
pub mod report;
pub mod series;
pub mod verify;

pub use algebra::{Rational, XPoly};
pub use blowup::{BlowupSeriesSet, GoldenTable};
pub use error::{Error, Result};
pub use json::Normalization;
pub use pairing::{EvalResult, MomentFunctional, Provenance};
pub use report::{Mismatch, Status, VerificationReport};
pub use series::{BiSeries, Comparison, Sign, TSeries};
pub use verify::{Catalog, VerifyConfig};
