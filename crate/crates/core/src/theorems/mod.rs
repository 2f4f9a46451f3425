//! Closed-form gap sets, the P_i/Q_i family, numerical semigroups, the
//! counting identities and Weierstrass-place classification.

pub mod classify;
pub mod counting;
pub mod gaps;
pub mod pq;
pub mod semigroup;

use thiserror::Error;

use crate::curve::CurveError;
use crate::oracle::OracleError;

pub use classify::{
    case_label, classify, classify_weierstrass, survey, survey_each, survey_place, Bucket,
    Classification,
    PlaceRecord,
};
pub use gaps::{closed_form_gaps, gaps_half, gaps_o, gaps_third, Branch, ClosedForm};
pub use pq::{p_order, pq_polynomials, POrder, PQPair};
pub use semigroup::{semigroup_from_gaps, NumericalSemigroup, SemigroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoremError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("no primitive cube root of unity in characteristic {p}")]
    NoCubeRoot { p: u64 },
    #[error("{what}_{index}: numerator is not divisible by the stated denominator")]
    InexactDivision { what: &'static str, index: u64 },
    #[error("index {index} above the limit {max}")]
    IndexTooLarge { index: u64, max: u64 },
    #[error("alpha must differ from 0 and 1")]
    DegenerateAlpha,
    #[error("P-order must be at least 1")]
    BadOrder,
    #[error("closed form does not apply: {0}")]
    NotApplicable(String),
    #[error("{what} produced {got} gaps, the genus is {genus}")]
    SizeMismatch { what: &'static str, got: u64, genus: u64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}
