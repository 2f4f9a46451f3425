//! The polynomial families P_i, Q_i built from cube roots of unity, and
//! the P-order of an element.
//!
//! With `z` a primitive cube root of unity,
//!
//! ```text
//! P_i(s) = [(s+z)^{3i} - (s+z^2)^{3i}] / (3 (z - z^2) s (s-1))
//! Q_i(s) = [((1-z)/3) (s+z)^{3i-1} + ((1-z^2)/3) (s+z^2)^{3i-1}] / (s-1)
//! ```

use serde::Serialize;

use super::TheoremError;
use crate::curve::CurveCtx;
use crate::field::{poly, FieldElem, FieldTower};

/// Largest index accepted by [`pq_polynomials`].
pub const PQ_MAX_INDEX: u64 = 2000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PQPair {
    pub index: u64,
    /// Little-endian coefficients of P_i over F_{q^2}.
    pub p_poly: Vec<FieldElem>,
    /// Q_i for `i >= 1`; Q_0 is the rational function `1/(s^2 - s + 1)`.
    pub q_poly: Option<Vec<FieldElem>>,
}

/// P-order of an element `alpha`: the least `i >= 1` with
/// `P_{i+1}(alpha) = 0`, or `Infinite` when `alpha^2 - alpha + 1 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum POrder {
    Finite(u64),
    Infinite,
}

impl std::fmt::Display for POrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            POrder::Finite(i) => write!(f, "{i}"),
            POrder::Infinite => write!(f, "inf"),
        }
    }
}

fn zeta3(ctx: &CurveCtx) -> Result<FieldElem, TheoremError> {
    ctx.zeta_3().ok_or(TheoremError::NoCubeRoot {
        p: ctx.characteristic(),
    })
}

fn linear_power(f: &FieldTower, c: FieldElem, k: u64) -> Vec<FieldElem> {
    let lin = vec![c, f.one()];
    let mut acc = vec![f.one()];
    for _ in 0..k {
        acc = poly::mul(f, &acc, &lin);
    }
    acc
}

fn exact_div(
    f: &FieldTower,
    num: &[FieldElem],
    den: &[FieldElem],
    what: &'static str,
    index: u64,
) -> Result<Vec<FieldElem>, TheoremError> {
    let (quot, rem) = poly::divrem(f, num, den);
    if !rem.is_empty() {
        return Err(TheoremError::InexactDivision { what, index });
    }
    Ok(quot)
}

/// P_i and Q_i over F_{q^2}.
pub fn pq_polynomials(ctx: &CurveCtx, i: u64) -> Result<PQPair, TheoremError> {
    if i > PQ_MAX_INDEX {
        return Err(TheoremError::IndexTooLarge {
            index: i,
            max: PQ_MAX_INDEX,
        });
    }
    let f = ctx.base();
    let z = zeta3(ctx)?;
    let z2 = f.square(z);
    let three = f.from_int(3);
    let p_num = poly::sub(&f, &linear_power(&f, z, 3 * i), &linear_power(&f, z2, 3 * i));
    let c = f.mul(three, f.sub(z, z2));
    // 3 (z - z^2) (s^2 - s)
    let p_den = vec![f.zero(), f.neg(c), c];
    let p_poly = exact_div(&f, &p_num, &p_den, "P", i)?;
    let q_poly = if i == 0 {
        None
    } else {
        let third = f.inv(three).map_err(|_| TheoremError::NoCubeRoot { p: 3 })?;
        let c1 = f.mul(f.sub(f.one(), z), third);
        let c2 = f.mul(f.sub(f.one(), z2), third);
        let num = poly::add(
            &f,
            &poly::scale(&f, &linear_power(&f, z, 3 * i - 1), c1),
            &poly::scale(&f, &linear_power(&f, z2, 3 * i - 1), c2),
        );
        Some(exact_div(&f, &num, &[f.neg(f.one()), f.one()], "Q", i)?)
    };
    Ok(PQPair {
        index: i,
        p_poly,
        q_poly,
    })
}

/// P-order of `alpha`, an element of the layer `f`.
///
/// For `alpha` outside `{0, 1}`, `P_j(alpha) = 0` exactly when
/// `rho^{3j} = 1` with `rho = (alpha + z)/(alpha + z^2)`, so the P-order is
/// one less than the multiplicative order of `rho^3`.
pub fn p_order(ctx: &CurveCtx, f: &FieldTower, alpha: FieldElem) -> Result<POrder, TheoremError> {
    f.check(alpha).map_err(crate::curve::CurveError::from)?;
    if alpha.is_zero() || alpha == f.one() {
        return Err(TheoremError::DegenerateAlpha);
    }
    let z = f.embed(zeta3(ctx)?).map_err(crate::curve::CurveError::from)?;
    let z2 = f.square(z);
    let den = f.add(alpha, z2);
    if f.add(f.sub(f.square(alpha), alpha), f.one()).is_zero() || den.is_zero() {
        return Ok(POrder::Infinite);
    }
    let rho = f.div(f.add(alpha, z), den).expect("denominator is nonzero");
    let w = f.pow(rho, 3);
    let ord = f
        .multiplicative_order(w)
        .expect("rho^3 is nonzero");
    debug_assert!(ord >= 2, "rho^3 = 1 forces alpha in {{0, 1}}");
    Ok(POrder::Finite(ord - 1))
}
