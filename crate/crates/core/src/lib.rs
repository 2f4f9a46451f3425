//! Weierstrass gap sequences at the places of the Fermat curves
//! `X^m + Y^m + 1 = 0` over F_{q^2} with `m | q + 1`.
//!
//! Two independent routes compute a gap sequence:
//!
//! * [`oracle`] expands the holomorphic differentials of the curve as power
//!   series at the place and reads the gaps off their valuations;
//! * [`theorems`] evaluates the closed forms for places of the special orbit
//!   `O`, and for `m = (q+1)/2` and `m = (q+1)/3` at every other place.
//!
//! The command-line tool (`fermat-ws`) wraps both and cross-checks them.

pub mod field;
pub mod series;
pub mod linalg;
pub mod curve;
pub mod oracle;
pub mod theorems;
pub mod report;
pub mod cli;

pub use curve::{make_curve, AutGen, AutWord, CurveCtx, Place};
pub use field::{make_field_tower, FieldElem, FieldError, FieldTower};
pub use oracle::{gap_set_oracle, GapSet};
pub use series::{TruncSeries, Valuation};
