//! Truncated power series over one layer of a [`FieldTower`].
//!
//! A series stores the coefficients of `t^0 .. t^{N-1}`; `N` is its
//! precision. Binary operations keep the smaller precision.

use thiserror::Error;

use crate::curve::{CurveCtx, CurveError, Place};
use crate::field::{FieldElem, FieldError, FieldTower};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series from different field layers")]
    MixedLayers,
    #[error("precision {precision} cannot certify valuations up to {cap}")]
    InsufficientPrecision { precision: usize, cap: usize },
    #[error("series is not a unit (constant term vanishes)")]
    NotUnit,
    #[error("initial value is not a root of the equation")]
    BadInitialValue,
    #[error("{0} has no affine local parameter X - a")]
    NotAffine(String),
    #[error("(A, B) is not a point of the Hermitian curve with AB != 0")]
    NotOnHermitian,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Valuation of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Exact(usize),
    /// Every stored coefficient vanishes.
    AbovePrecision,
}

#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    layer: u32,
    coeffs: Vec<FieldElem>,
}

impl std::fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} + O(t^{})", self.coeffs, self.coeffs.len())
    }
}

impl TruncSeries {
    pub fn zero(f: &FieldTower, precision: usize) -> Self {
        TruncSeries {
            layer: f.layer(),
            coeffs: vec![f.zero(); precision],
        }
    }

    pub fn constant(f: &FieldTower, c: FieldElem, precision: usize) -> Self {
        let mut s = Self::zero(f, precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(f: &FieldTower, precision: usize) -> Self {
        Self::constant(f, f.one(), precision)
    }

    /// The parameter `t` itself.
    pub fn var(f: &FieldTower, precision: usize) -> Self {
        let mut s = Self::zero(f, precision);
        if precision > 1 {
            s.coeffs[1] = f.one();
        }
        s
    }

    /// Series with the given leading coefficients, padded with zeros.
    pub fn from_coeffs(
        f: &FieldTower,
        coeffs: &[FieldElem],
        precision: usize,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(f, precision);
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            f.check(c)?;
            *slot = c;
        }
        Ok(s)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<FieldElem> {
        self.coeffs.get(i).copied()
    }

    pub fn layer(&self) -> u32 {
        self.layer
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(precision);
        s
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AbovePrecision,
        }
    }

    fn same_layer(&self, f: &FieldTower, other: &Self) -> Result<(), SeriesError> {
        if self.layer != f.layer() || other.layer != f.layer() {
            return Err(SeriesError::MixedLayers);
        }
        Ok(())
    }

    fn own_layer(&self, f: &FieldTower) -> Result<(), SeriesError> {
        if self.layer != f.layer() {
            return Err(SeriesError::MixedLayers);
        }
        Ok(())
    }

    pub fn add(&self, f: &FieldTower, other: &Self) -> Result<Self, SeriesError> {
        self.same_layer(f, other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| f.add(x, y))
            .collect();
        Ok(TruncSeries { layer: self.layer, coeffs })
    }

    pub fn sub(&self, f: &FieldTower, other: &Self) -> Result<Self, SeriesError> {
        self.same_layer(f, other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| f.sub(x, y))
            .collect();
        Ok(TruncSeries { layer: self.layer, coeffs })
    }

    pub fn neg(&self, f: &FieldTower) -> Result<Self, SeriesError> {
        self.own_layer(f)?;
        Ok(TruncSeries {
            layer: self.layer,
            coeffs: self.coeffs.iter().map(|&x| f.neg(x)).collect(),
        })
    }

    pub fn scale(&self, f: &FieldTower, c: FieldElem) -> Result<Self, SeriesError> {
        self.own_layer(f)?;
        f.check(c)?;
        Ok(TruncSeries {
            layer: self.layer,
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
        })
    }

    /// Adds the constant `c`.
    pub fn add_constant(&self, f: &FieldTower, c: FieldElem) -> Result<Self, SeriesError> {
        self.own_layer(f)?;
        f.check(c)?;
        let mut s = self.clone();
        if let Some(c0) = s.coeffs.first_mut() {
            *c0 = f.add(*c0, c);
        }
        Ok(s)
    }

    pub fn mul(&self, f: &FieldTower, other: &Self) -> Result<Self, SeriesError> {
        self.same_layer(f, other)?;
        let n = self.precision().min(other.precision());
        let mut coeffs = vec![f.zero(); n];
        for (i, &x) in self.coeffs.iter().take(n).enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in other.coeffs.iter().take(n - i).enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(x, y));
            }
        }
        Ok(TruncSeries { layer: self.layer, coeffs })
    }

    /// Multiplies by `t^k`. The top `k` coefficients are dropped, so the
    /// precision falls by `k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.precision().saturating_sub(k);
        let mut coeffs = vec![FieldElem::zero_in(self.layer); n];
        coeffs[k..n].copy_from_slice(&self.coeffs[..n - k]);
        TruncSeries { layer: self.layer, coeffs }
    }

    pub fn pow(&self, f: &FieldTower, mut k: u64) -> Result<Self, SeriesError> {
        self.own_layer(f)?;
        let mut acc = Self::one(f, self.precision());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(f, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(f, &base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a unit, by the coefficient recurrence.
    pub fn inverse(&self, f: &FieldTower) -> Result<Self, SeriesError> {
        self.own_layer(f)?;
        let n = self.precision();
        if n == 0 {
            return Ok(self.clone());
        }
        let inv0 = f.inv(self.coeffs[0]).map_err(|_| SeriesError::NotUnit)?;
        let mut out = vec![f.zero(); n];
        out[0] = inv0;
        for k in 1..n {
            let mut acc = f.zero();
            for j in 1..=k {
                let c = self.coeffs[j];
                if !c.is_zero() {
                    acc = f.add(acc, f.mul(c, out[k - j]));
                }
            }
            out[k] = f.neg(f.mul(acc, inv0));
        }
        Ok(TruncSeries { layer: self.layer, coeffs: out })
    }

    /// `self^k` for a signed exponent; negative powers need a unit.
    pub fn pow_signed(&self, f: &FieldTower, k: i64) -> Result<Self, SeriesError> {
        if k >= 0 {
            self.pow(f, k as u64)
        } else {
            self.inverse(f)?.pow(f, k.unsigned_abs())
        }
    }

    /// `t^k` at the given precision.
    pub fn monomial(f: &FieldTower, k: usize, precision: usize) -> Self {
        let mut s = Self::zero(f, precision);
        if k < precision {
            s.coeffs[k] = f.one();
        }
        s
    }

    /// Substitutes `t -> c t`.
    pub fn reparametrize(&self, f: &FieldTower, c: FieldElem) -> Result<Self, SeriesError> {
        self.own_layer(f)?;
        f.check(c)?;
        let mut power = f.one();
        let mut coeffs = Vec::with_capacity(self.precision());
        for &x in &self.coeffs {
            coeffs.push(f.mul(x, power));
            power = f.mul(power, c);
        }
        Ok(TruncSeries { layer: self.layer, coeffs })
    }
}

/// Solves `w^n = rhs` for the series `w` with `w(0) = w0` by Newton
/// iteration, doubling the number of correct coefficients each step.
/// `n` must be a unit in the field and `w0` nonzero.
pub fn binomial_root(
    f: &FieldTower,
    rhs: &TruncSeries,
    n: u64,
    w0: FieldElem,
) -> Result<TruncSeries, SeriesError> {
    rhs.own_layer(f)?;
    f.check(w0)?;
    let prec = rhs.precision();
    if prec == 0 {
        return Ok(rhs.clone());
    }
    if f.pow(w0, n) != rhs.coeffs[0] || w0.is_zero() {
        return Err(SeriesError::BadInitialValue);
    }
    let n_inv = f.inv(f.from_int((n % f.characteristic()) as i64))?;
    let mut w = TruncSeries::constant(f, w0, 1);
    let mut correct = 1;
    while correct < prec {
        correct = (2 * correct).min(prec);
        let mut wc = TruncSeries::zero(f, correct);
        wc.coeffs[..w.precision()].copy_from_slice(&w.coeffs);
        let r = rhs.truncate(correct);
        let w_pow = wc.pow(f, n - 1)?;
        let residual = w_pow.mul(f, &wc)?.sub(f, &r)?;
        let step = residual.mul(f, &w_pow.inverse(f)?)?.scale(f, n_inv)?;
        w = wc.sub(f, &step)?;
    }
    Ok(w)
}

/// Expansion of `Y` at an affine place `(a, b)` in the parameter
/// `t = X - a`: the series `y(t)` with `y(0) = b` and
/// `(a + t)^m + y(t)^m + 1 = 0` modulo `t^precision`.
pub fn newton_expand_y(
    ctx: &CurveCtx,
    place: &Place,
    precision: usize,
) -> Result<TruncSeries, SeriesError> {
    let Place::Affine { a, b, degree } = *place else {
        return Err(SeriesError::NotAffine(place.to_string()));
    };
    let f = ctx.tower(degree)?;
    let x = TruncSeries::var(&f, precision).add_constant(&f, a)?;
    let rhs = x
        .pow(&f, ctx.m())?
        .neg(&f)?
        .add_constant(&f, f.neg(f.one()))?;
    binomial_root(&f, &rhs, ctx.m(), b)
}

/// Expansions over a point `(A, B)` of the Hermitian curve
/// `U^{q+1} + V^{q+1} + 1 = 0`, in the parameter `T = (U - A)/A`.
#[derive(Clone, Debug)]
pub struct HermitianExpansion {
    /// `(X - a)/a` with `X = U^r`, `a = A^r`, `r = (q+1)/m`.
    pub x_rel: TruncSeries,
    /// `(Y - b)/b` with `Y = V^r`, `b = B^r`.
    pub y_rel: TruncSeries,
    /// `(V - B)/B`.
    pub v_rel: TruncSeries,
}

/// Expands `X`, `Y` and `V` over the Hermitian point `(A, B)`; `A` and `B`
/// live in the layer `f`.
pub fn hermitian_expand(
    ctx: &CurveCtx,
    f: &FieldTower,
    big_a: FieldElem,
    big_b: FieldElem,
    precision: usize,
) -> Result<HermitianExpansion, SeriesError> {
    f.check(big_a)?;
    f.check(big_b)?;
    let q1 = ctx.q() + 1;
    let r = q1 / ctx.m();
    let on_curve = f
        .add(f.add(f.pow(big_a, q1), f.pow(big_b, q1)), f.one())
        .is_zero();
    if big_a.is_zero() || big_b.is_zero() || !on_curve {
        return Err(SeriesError::NotOnHermitian);
    }
    let one = f.one();
    let u_rel = TruncSeries::var(f, precision).add_constant(f, one)?;
    let x_rel = u_rel.pow(f, r)?.add_constant(f, f.neg(one))?;
    let rhs = u_rel
        .pow(f, q1)?
        .scale(f, f.neg(f.pow(big_a, q1)))?
        .add_constant(f, f.neg(one))?;
    let v = binomial_root(f, &rhs, q1, big_b)?;
    let v_unit = v.scale(f, f.inv(big_b)?)?;
    let y_rel = v_unit.pow(f, r)?.add_constant(f, f.neg(one))?;
    let v_rel = v_unit.add_constant(f, f.neg(one))?;
    Ok(HermitianExpansion { x_rel, y_rel, v_rel })
}

/// Pivot valuations of the span of `family`, i.e. the set of valuations
/// attained by its nonzero members, restricted to `0..=cap`.
pub fn valuation_spectrum(
    f: &FieldTower,
    family: &[TruncSeries],
    cap: usize,
) -> Result<Vec<usize>, SeriesError> {
    for s in family {
        s.own_layer(f)?;
        if s.precision() <= cap {
            return Err(SeriesError::InsufficientPrecision {
                precision: s.precision(),
                cap,
            });
        }
    }
    let rows: Vec<Vec<FieldElem>> = family.iter().map(|s| s.coeffs[..=cap].to_vec()).collect();
    Ok(linalg::leading_pivots(f, rows))
}
