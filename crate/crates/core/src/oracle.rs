//! Gap sequences from valuations of holomorphic differentials.
//!
//! For `i + j <= m - 3` the differentials `X^i Y^j dX / Y^{m-1}` form a
//! basis of the holomorphic differentials, and `n` is a gap at `P` exactly
//! when one of them vanishes to order `n - 1` there. Expanding the basis in
//! a local parameter and row reducing gives all gaps at once.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{apply_automorphism, AutGen, AutWord, CurveCtx, CurveError, Place};
use crate::field::{FieldElem, FieldTower};
use crate::linalg;
use crate::series::{
    binomial_root, hermitian_expand, newton_expand_y, SeriesError, TruncSeries, Valuation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("precision {precision} too low at {place}: raise it above {needed}")]
    InsufficientPrecision {
        place: String,
        precision: usize,
        needed: usize,
    },
    #[error("expansion family at {place} has rank {rank}, expected {expected}")]
    RankDeficient {
        place: String,
        rank: usize,
        expected: usize,
    },
    #[error("valuation {valuation} at {place} exceeds the bound {bound}")]
    BoundViolation {
        place: String,
        valuation: usize,
        bound: usize,
    },
    #[error("n = {n} outside the monomial regime 0..={max}")]
    RrRegime { n: u64, max: u64 },
    #[error("{0} is not an affine place outside O")]
    NotAffine(String),
    #[error("transport by {word} sends {from} to {to}, which is not an axis_x or affine place")]
    BadTransport {
        word: String,
        from: String,
        to: String,
    },
}

/// Sorted gap list of a place, together with the genus it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GapSet {
    genus: u64,
    gaps: Vec<u64>,
}

impl GapSet {
    /// Sorts and deduplicates `gaps`.
    pub fn new(genus: u64, mut gaps: Vec<u64>) -> Self {
        gaps.sort_unstable();
        gaps.dedup();
        GapSet { genus, gaps }
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }
}

/// Exponent pairs `(i, j)` with `i + j <= m - 3`, lexicographic.
pub fn holomorphic_basis(m: u64) -> Vec<(u64, u64)> {
    if m < 3 {
        return Vec::new();
    }
    let top = m - 3;
    (0..=top)
        .flat_map(|i| (0..=top - i).map(move |j| (i, j)))
        .collect()
}

/// Default series precision `2g + 2`.
pub fn default_precision(ctx: &CurveCtx) -> usize {
    2 * ctx.genus() as usize + 2
}

/// Word used to move a place of O onto an `axis_x` place.
pub fn transport_word(place: &Place) -> AutWord {
    match place {
        Place::Infinity(_) => AutWord(vec![AutGen::S]),
        Place::AxisY(_) => AutWord(vec![AutGen::S, AutGen::S]),
        _ => AutWord::identity(),
    }
}

/// Gap set at `place`, moving places at infinity and on the Y axis to the
/// X axis first.
pub fn gap_set_oracle(
    ctx: &CurveCtx,
    place: &Place,
    precision: Option<usize>,
) -> Result<GapSet, OracleError> {
    gap_set_oracle_via(ctx, place, &transport_word(place), precision)
}

/// Gap set at `place`, computed at its image under `word`. The image must be
/// an `axis_x` or affine place.
pub fn gap_set_oracle_via(
    ctx: &CurveCtx,
    place: &Place,
    word: &AutWord,
    precision: Option<usize>,
) -> Result<GapSet, OracleError> {
    let n = precision.unwrap_or_else(|| default_precision(ctx));
    let (f, family) = local_expansions(ctx, place, word, n)?;
    let g = ctx.genus() as usize;
    let pivots = linalg::leading_pivots(&f, family.iter().map(|s| s.coeffs().to_vec()).collect());
    // holomorphic differentials vanish to order at most 2g - 2
    let bound = (2 * g).saturating_sub(2);
    if pivots.len() < g {
        if n > bound {
            return Err(OracleError::RankDeficient {
                place: place.to_string(),
                rank: pivots.len(),
                expected: g,
            });
        }
        return Err(OracleError::InsufficientPrecision {
            place: place.to_string(),
            precision: n,
            needed: bound,
        });
    }
    if let Some(&v) = pivots.iter().find(|&&v| v > bound) {
        return Err(OracleError::BoundViolation {
            place: place.to_string(),
            valuation: v,
            bound,
        });
    }
    Ok(GapSet::new(
        ctx.genus(),
        pivots.into_iter().map(|v| v as u64 + 1).collect(),
    ))
}

/// Coefficient series of the holomorphic basis at the image of `place`
/// under `word`, each to precision `n`, in the order of
/// [`holomorphic_basis`].
pub fn local_expansions(
    ctx: &CurveCtx,
    place: &Place,
    word: &AutWord,
    n: usize,
) -> Result<(std::sync::Arc<FieldTower>, Vec<TruncSeries>), OracleError> {
    let target = apply_automorphism(ctx, word, place)?;
    match target {
        Place::AxisX(i) => axis_family(ctx, i, n),
        Place::Affine { .. } => affine_family(ctx, &target, n),
        _ => Err(OracleError::BadTransport {
            word: word.to_string(),
            from: place.to_string(),
            to: target.to_string(),
        }),
    }
}

// coefficient functions of X^i Y^j dX/Y^{m-1} in t = X - a
fn affine_family(
    ctx: &CurveCtx,
    place: &Place,
    n: usize,
) -> Result<(std::sync::Arc<FieldTower>, Vec<TruncSeries>), OracleError> {
    let Place::Affine { a, degree, .. } = *place else {
        return Err(OracleError::NotAffine(place.to_string()));
    };
    let f = ctx.tower(degree)?;
    let m = ctx.m();
    let y = newton_expand_y(ctx, place, n)?;
    let x = TruncSeries::var(&f, n).add_constant(&f, a)?;
    let weight = y.inverse(&f)?.pow(&f, m - 1)?;
    let family = monomial_family(&f, &x, &y, &weight, m)?;
    Ok((f, family))
}

// at (alpha_i, 0) the parameter is t = Y and the basis reads
// -X^{i-(m-1)} Y^j dY, since dX/Y^{m-1} = -dY/X^{m-1}
fn axis_family(
    ctx: &CurveCtx,
    i: usize,
    n: usize,
) -> Result<(std::sync::Arc<FieldTower>, Vec<TruncSeries>), OracleError> {
    let f = ctx.base();
    let m = ctx.m();
    let t = TruncSeries::var(&f, n);
    let rhs = t.pow(&f, m)?.neg(&f)?.add_constant(&f, f.neg(f.one()))?;
    let x = binomial_root(&f, &rhs, m, ctx.alpha(i)?)?;
    let weight = x.inverse(&f)?.pow(&f, m - 1)?;
    let family = monomial_family(&f, &x, &t, &weight, m)?;
    Ok((f, family))
}

fn powers(f: &FieldTower, s: &TruncSeries, top: u64) -> Result<Vec<TruncSeries>, SeriesError> {
    let mut out = vec![TruncSeries::one(f, s.precision())];
    for k in 1..=top as usize {
        out.push(out[k - 1].mul(f, s)?);
    }
    Ok(out)
}

// weight * u^i * v^j over the holomorphic basis
fn monomial_family(
    f: &FieldTower,
    u: &TruncSeries,
    v: &TruncSeries,
    weight: &TruncSeries,
    m: u64,
) -> Result<Vec<TruncSeries>, SeriesError> {
    let top = m.saturating_sub(3);
    let up = powers(f, u, top)?;
    let vw: Vec<TruncSeries> = powers(f, v, top)?
        .iter()
        .map(|s| s.mul(f, weight))
        .collect::<Result<_, _>>()?;
    holomorphic_basis(m)
        .into_iter()
        .map(|(i, j)| up[i as usize].mul(f, &vw[j as usize]))
        .collect()
}

/// Largest `n` accepted by [`rr_valuation_spectrum`].
pub fn rr_max_n(ctx: &CurveCtx) -> u64 {
    ctx.m() - 1
}

/// Valuations at an affine place `P` attained by the span of `X^i Y^j`,
/// `i + j <= n`, i.e. by L(n D_inf) for `n <= m - 1`.
pub fn rr_valuation_spectrum(
    ctx: &CurveCtx,
    place: &Place,
    n: u64,
) -> Result<Vec<u64>, OracleError> {
    if !matches!(place, Place::Affine { .. }) {
        return Err(OracleError::NotAffine(place.to_string()));
    }
    if n > rr_max_n(ctx) {
        return Err(OracleError::RrRegime {
            n,
            max: rr_max_n(ctx),
        });
    }
    let Place::Affine { a, degree, .. } = *place else { unreachable!() };
    let f = ctx.tower(degree)?;
    // a nonzero function in L(n D_inf) has n m zeros counted with multiplicity
    let cap = (n * ctx.m()) as usize;
    let prec = cap + 2;
    let x = TruncSeries::var(&f, prec).add_constant(&f, a)?;
    let y = newton_expand_y(ctx, place, prec)?;
    let xp = powers(&f, &x, n)?;
    let yp = powers(&f, &y, n)?;
    let mut rows = Vec::new();
    for (i, xi) in xp.iter().enumerate() {
        for yj in &yp[..=n as usize - i] {
            rows.push(xi.mul(&f, yj)?.coeffs().to_vec());
        }
    }
    let expected = ((n + 1) * (n + 2) / 2) as usize;
    let pivots = linalg::leading_pivots(&f, rows);
    if pivots.len() != expected {
        return Err(OracleError::RankDeficient {
            place: place.to_string(),
            rank: pivots.len(),
            expected,
        });
    }
    if let Some(&v) = pivots.iter().find(|&&v| v > cap) {
        return Err(OracleError::BoundViolation {
            place: place.to_string(),
            valuation: v,
            bound: cap,
        });
    }
    Ok(pivots.into_iter().map(|v| v as u64).collect())
}

/// Expansion of `a^{m-1}(X - a) + b^{m-1}(Y - b)` over a Hermitian point.
#[derive(Clone, Debug)]
pub struct F0Tilde {
    /// The function in the parameter `T = (U - A)/A`.
    pub series: TruncSeries,
    pub valuation: Valuation,
    /// Coefficient of `(U - A)^2`.
    pub leading: FieldElem,
    /// `-binom(r, 2) A^{q-1} / B^{q+1}` with `r = (q+1)/m`.
    pub predicted: FieldElem,
}

pub fn f0_tilde_expansion(
    ctx: &CurveCtx,
    f: &FieldTower,
    big_a: FieldElem,
    big_b: FieldElem,
    precision: usize,
) -> Result<F0Tilde, OracleError> {
    let q = ctx.q();
    let r = (q + 1) / ctx.m();
    let h = hermitian_expand(ctx, f, big_a, big_b, precision)?;
    // a^{m-1}(X-a) = a^m x_rel and a^m = A^{q+1}
    let am = f.pow(big_a, q + 1);
    let bm = f.pow(big_b, q + 1);
    let series = h.x_rel.scale(f, am)?.add(f, &h.y_rel.scale(f, bm)?)?;
    let t2 = series.coeff(2).unwrap_or(f.zero());
    let leading = f.div(t2, f.square(big_a)).map_err(SeriesError::from)?;
    let binom = f.from_int(((r * (r - 1) / 2) % ctx.characteristic()) as i64);
    let ratio = f
        .div(f.pow(big_a, q - 1), f.pow(big_b, q + 1))
        .map_err(SeriesError::from)?;
    let predicted = f.neg(f.mul(binom, ratio));
    Ok(F0Tilde {
        valuation: series.valuation(),
        series,
        leading,
        predicted,
    })
}
