//! The Fermat curve `X^m + Y^m + 1 = 0` over F_{q^2}, its places and the
//! automorphisms generated by `A_{a,b}`, `S` and `T`.

mod enumerate;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::field::{make_field_tower, FieldElem, FieldError, FieldTower};

pub use enumerate::{
    enumerate_places, rational_place_census, sample_places, sampled_places, ENUMERATION_LIMIT,
};

/// Largest tower degree d a context will build.
pub const MAX_TOWER_DEGREE: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("q = {p}^{e} does not fit in 64 bits")]
    QOverflow { p: u64, e: u32 },
    #[error("m = {m} does not divide q + 1 = {q_plus_1}")]
    NotDivisor { m: u64, q_plus_1: u64 },
    #[error("m = {m} is too small (need m >= {min})")]
    MTooSmall { m: u64, min: u64 },
    #[error("m = {m} is not coprime to the characteristic {p}")]
    NotCoprime { m: u64, p: u64 },
    #[error("tower degree {d} outside 1..={max}")]
    TowerDegree { d: u32, max: u32 },
    #[error("F_{{q^{{2d}}}} has {order} elements; enumeration is limited to {limit}")]
    EnumerationTooLarge { order: u64, limit: u64 },
    #[error("{0} is not an affine place outside O")]
    NotAffine(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("coordinates have degree {exact} but were given in layer {layer}")]
    WrongLayer { exact: u32, layer: u32 },
    #[error("place index {index} outside 1..={m}")]
    BadIndex { index: usize, m: u64 },
    #[error("only {found} of {wanted} degree-{d} places found after {attempts} draws")]
    SampleExhausted {
        found: usize,
        wanted: usize,
        d: u32,
        attempts: usize,
    },
}

/// Immutable parameters of one Fermat curve.
pub struct CurveCtx {
    p: u64,
    e: u32,
    q: u64,
    m: u64,
    genus: u64,
    towers: Vec<OnceLock<Result<Arc<FieldTower>, FieldError>>>,
    zeta_m: FieldElem,
    zeta_3: Option<FieldElem>,
    xi: FieldElem,
    alpha_roots: Vec<FieldElem>,
}

impl fmt::Debug for CurveCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveCtx")
            .field("p", &self.p)
            .field("q", &self.q)
            .field("m", &self.m)
            .field("genus", &self.genus)
            .finish()
    }
}

/// Builds the context for `X^m + Y^m + 1 = 0` over F_{q^2}, `q = p^e`.
///
/// `m = 2` is accepted (genus 0); the closed-form gap theorems impose their
/// own lower bounds.
pub fn make_curve(p: u64, e: u32, m: u64) -> Result<CurveCtx, CurveError> {
    let base = make_field_tower(p, e, 1)?;
    let q = p.checked_pow(e).ok_or(CurveError::QOverflow { p, e })?;
    if m < 2 {
        return Err(CurveError::MTooSmall { m, min: 2 });
    }
    if (q + 1) % m != 0 {
        return Err(CurveError::NotDivisor { m, q_plus_1: q + 1 });
    }
    if m.is_multiple_of(p) {
        return Err(CurveError::NotCoprime { m, p });
    }
    let zeta_m = base.primitive_root_of_unity(m)?;
    let zeta_3 = if p != 3 {
        Some(base.primitive_root_of_unity(3)?)
    } else {
        None
    };
    let xi = base.primitive_root_of_unity((q + 1) / m)?;
    let alpha_1 = base.nth_roots(base.neg(base.one()), m)[0];
    let alpha_roots: Vec<FieldElem> = (0..m)
        .map(|k| base.mul(alpha_1, base.pow(zeta_m, k)))
        .collect();
    let distinct: BTreeSet<_> = alpha_roots.iter().collect();
    assert_eq!(distinct.len() as u64, m, "Z^m + 1 splits with distinct roots");
    let towers: Vec<_> = (0..MAX_TOWER_DEGREE).map(|_| OnceLock::new()).collect();
    let _ = towers[0].set(Ok(Arc::new(base)));
    Ok(CurveCtx {
        p,
        e,
        q,
        m,
        genus: (m - 1) * (m - 2) / 2,
        towers,
        zeta_m,
        zeta_3,
        xi,
        alpha_roots,
    })
}

impl CurveCtx {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// The coefficient field F_{q^2}.
    pub fn base(&self) -> Arc<FieldTower> {
        self.tower(1).expect("base layer is built eagerly")
    }

    /// F_{q^{2d}}, built on first use.
    pub fn tower(&self, d: u32) -> Result<Arc<FieldTower>, CurveError> {
        if d == 0 || d > MAX_TOWER_DEGREE {
            return Err(CurveError::TowerDegree {
                d,
                max: MAX_TOWER_DEGREE,
            });
        }
        self.towers[d as usize - 1]
            .get_or_init(|| make_field_tower(self.p, self.e, d).map(Arc::new))
            .clone()
            .map_err(CurveError::from)
    }

    pub fn zeta_m(&self) -> FieldElem {
        self.zeta_m
    }

    /// Primitive cube root of unity, absent in characteristic 3.
    pub fn zeta_3(&self) -> Option<FieldElem> {
        self.zeta_3
    }

    /// Primitive `(q+1)/m`-th root of unity.
    pub fn xi(&self) -> FieldElem {
        self.xi
    }

    /// The roots `alpha_1, ..., alpha_m` of `Z^m + 1`, with
    /// `alpha_{k+1} = alpha_1 * zeta_m^k`.
    pub fn alpha_roots(&self) -> &[FieldElem] {
        &self.alpha_roots
    }

    /// `alpha_i` for `1 <= i <= m`.
    pub fn alpha(&self, i: usize) -> Result<FieldElem, CurveError> {
        if i == 0 || i as u64 > self.m {
            return Err(CurveError::BadIndex { index: i, m: self.m });
        }
        Ok(self.alpha_roots[i - 1])
    }

    fn alpha_index(&self, x: FieldElem) -> Option<usize> {
        self.alpha_roots.iter().position(|&r| r == x).map(|k| k + 1)
    }

    /// Layer degree d such that `x` lives in F_{q^{2d}}, among the built towers.
    fn layer_of(&self, x: FieldElem) -> Option<u32> {
        (1..=MAX_TOWER_DEGREE).find(|&d| {
            self.towers[d as usize - 1]
                .get()
                .and_then(|r| r.as_ref().ok())
                .is_some_and(|f| f.contains(x))
        })
    }

    /// Validated affine place from coordinates in some F_{q^{2d}}.
    pub fn affine_place(&self, a: FieldElem, b: FieldElem) -> Result<Place, CurveError> {
        let d = self.layer_of(a).ok_or(CurveError::Field(FieldError::MixedTower))?;
        let f = self.tower(d)?;
        f.check(b)?;
        if a.is_zero() || b.is_zero() {
            return Err(CurveError::NotAffine("a point on a coordinate axis".into()));
        }
        if !self.on_curve(&f, a, b) {
            return Err(CurveError::NotOnCurve);
        }
        let exact = point_degree(&f, a, b);
        if exact != d {
            return Err(CurveError::WrongLayer { exact, layer: d });
        }
        Ok(Place::Affine { a, b, degree: d })
    }

    fn on_curve(&self, f: &FieldTower, a: FieldElem, b: FieldElem) -> bool {
        let s = f.add(f.add(f.pow(a, self.m), f.pow(b, self.m)), f.one());
        s.is_zero()
    }

    /// Places of O in their fixed order: axis_x, axis_y, infinity, each by index.
    pub fn o_places(&self) -> Vec<Place> {
        let m = self.m as usize;
        (1..=m)
            .map(Place::AxisX)
            .chain((1..=m).map(Place::AxisY))
            .chain((1..=m).map(Place::Infinity))
            .collect()
    }
}

/// Smallest k with both coordinates fixed by the q^{2k}-power map.
pub(crate) fn point_degree(f: &FieldTower, a: FieldElem, b: FieldElem) -> u32 {
    let (mut x, mut y) = (a, b);
    for k in 1..=f.degree() {
        x = f.frobenius_q2(x);
        y = f.frobenius_q2(y);
        if x == a && y == b {
            return k;
        }
    }
    unreachable!("the q^{{2d}}-power map is the identity on F_{{q^{{2d}}}}")
}

/// A place of the Fermat function field.
///
/// Affine places carry one point of their Frobenius orbit; coordinates live
/// in F_{q^{2d}} for `d = degree`. The places of O are indexed by the roots
/// `alpha_i`: `AxisX(i)` is `(alpha_i, 0)`, `AxisY(i)` is `(0, alpha_i)`, and
/// `Infinity(i)` is the point at infinity where `Y/X = alpha_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity(usize),
    AxisX(usize),
    AxisY(usize),
    Affine {
        a: FieldElem,
        b: FieldElem,
        degree: u32,
    },
}

impl Place {
    pub fn in_o(&self) -> bool {
        !matches!(self, Place::Affine { .. })
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Affine { degree, .. } => *degree,
            _ => 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Place::Infinity(_) => "infinity",
            Place::AxisX(_) => "axis_x",
            Place::AxisY(_) => "axis_y",
            Place::Affine { .. } => "affine",
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            Place::Infinity(i) | Place::AxisX(i) | Place::AxisY(i) => Some(*i),
            Place::Affine { .. } => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Affine { a, b, degree } => {
                write!(f, "affine({}, {}; degree {})", a.packed(), b.packed(), degree)
            }
            other => write!(f, "{}:{}", other.kind(), other.index().unwrap_or(0)),
        }
    }
}

/// Generators of the automorphism group.
///
/// As maps of projective points: `A(a,b)` sends `[x:y:z]` to
/// `[zeta^a x : zeta^b y : z]`, `S` to `[y:z:x]` and `T` to `[z:y:x]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutGen {
    A(u64, u64),
    S,
    T,
}

/// A word in the generators, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AutWord(pub Vec<AutGen>);

impl AutWord {
    pub fn identity() -> Self {
        AutWord(Vec::new())
    }

    pub fn single(g: AutGen) -> Self {
        AutWord(vec![g])
    }

    /// Inverse word for the curve with exponent `m`.
    pub fn inverse(&self, m: u64) -> Self {
        AutWord(
            self.0
                .iter()
                .rev()
                .flat_map(|g| match *g {
                    AutGen::A(a, b) => vec![AutGen::A((m - a % m) % m, (m - b % m) % m)],
                    AutGen::S => vec![AutGen::S, AutGen::S],
                    AutGen::T => vec![AutGen::T],
                })
                .collect(),
        )
    }

    /// This word followed by `other`.
    pub fn then(&self, other: &AutWord) -> Self {
        AutWord(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl fmt::Display for AutWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|g| match g {
                AutGen::A(a, b) => format!("A({a},{b})"),
                AutGen::S => "S".to_string(),
                AutGen::T => "T".to_string(),
            })
            .collect();
        write!(f, "{}", parts.join("."))
    }
}

fn place_point(
    ctx: &CurveCtx,
    place: &Place,
) -> Result<(Arc<FieldTower>, [FieldElem; 3]), CurveError> {
    let f = ctx.tower(place.degree())?;
    let (zero, one) = (f.zero(), f.one());
    let pt = match *place {
        Place::AxisX(i) => [ctx.alpha(i)?, zero, one],
        Place::AxisY(i) => [zero, ctx.alpha(i)?, one],
        Place::Infinity(i) => [one, ctx.alpha(i)?, zero],
        Place::Affine { a, b, .. } => {
            f.check(a)?;
            f.check(b)?;
            [a, b, one]
        }
    };
    Ok((f, pt))
}

fn point_place(
    ctx: &CurveCtx,
    f: &FieldTower,
    [x, y, z]: [FieldElem; 3],
) -> Result<Place, CurveError> {
    let lookup = |v: FieldElem| ctx.alpha_index(v).ok_or(CurveError::NotOnCurve);
    if z.is_zero() {
        return Ok(Place::Infinity(lookup(f.div(y, x)?)?));
    }
    let (a, b) = (f.div(x, z)?, f.div(y, z)?);
    if b.is_zero() {
        Ok(Place::AxisX(lookup(a)?))
    } else if a.is_zero() {
        Ok(Place::AxisY(lookup(b)?))
    } else {
        Ok(Place::Affine {
            a,
            b,
            degree: f.degree(),
        })
    }
}

/// Image of a place under an automorphism word.
pub fn apply_automorphism(
    ctx: &CurveCtx,
    word: &AutWord,
    place: &Place,
) -> Result<Place, CurveError> {
    let (f, mut pt) = place_point(ctx, place)?;
    let zeta = f.embed(ctx.zeta_m)?;
    for g in &word.0 {
        let [x, y, z] = pt;
        pt = match *g {
            AutGen::A(a, b) => [
                f.mul(f.pow(zeta, a % ctx.m), x),
                f.mul(f.pow(zeta, b % ctx.m), y),
                z,
            ],
            AutGen::S => [y, z, x],
            AutGen::T => [z, y, x],
        };
    }
    point_place(ctx, &f, pt)
}

/// The q^2-Frobenius image; fixes every place of O.
pub fn frobenius_place(ctx: &CurveCtx, place: &Place) -> Result<Place, CurveError> {
    match *place {
        Place::Affine { a, b, degree } => {
            let f = ctx.tower(degree)?;
            Ok(Place::Affine {
                a: f.frobenius_q2(a),
                b: f.frobenius_q2(b),
                degree,
            })
        }
        other => Ok(other),
    }
}

/// Orbit representative with the smallest packed coordinates.
pub fn canonical_place(ctx: &CurveCtx, place: &Place) -> Result<Place, CurveError> {
    let mut best = *place;
    let mut cur = *place;
    for _ in 1..place.degree() {
        cur = frobenius_place(ctx, &cur)?;
        if let (Place::Affine { a, b, .. }, Place::Affine { a: ba, b: bb, .. }) = (cur, best) {
            if (a.packed(), b.packed()) < (ba.packed(), bb.packed()) {
                best = cur;
            }
        }
    }
    Ok(best)
}

/// `alpha(P) = a^m / (1 + a^m)`, in the layer of the place.
pub fn alpha_invariant(ctx: &CurveCtx, place: &Place) -> Result<FieldElem, CurveError> {
    let Place::Affine { a, degree, .. } = *place else {
        return Err(CurveError::NotAffine(place.to_string()));
    };
    let f = ctx.tower(degree)?;
    let am = f.pow(a, ctx.m);
    Ok(f.div(am, f.add(f.one(), am))?)
}

/// A point `(A, B)` of the Hermitian curve `U^{q+1} + V^{q+1} + 1 = 0` over
/// the affine place, with `A^r = a` and `B^r = b` for `r = (q+1)/m`, using
/// the smallest such roots in the place's own layer.
pub fn hermitian_lift(
    ctx: &CurveCtx,
    place: &Place,
) -> Result<Option<(FieldElem, FieldElem)>, CurveError> {
    let Place::Affine { a, b, degree } = *place else {
        return Err(CurveError::NotAffine(place.to_string()));
    };
    let f = ctx.tower(degree)?;
    let r = (ctx.q + 1) / ctx.m;
    let (ra, rb) = (f.nth_roots(a, r), f.nth_roots(b, r));
    Ok(match (ra.first(), rb.first()) {
        (Some(&big_a), Some(&big_b)) => Some((big_a, big_b)),
        _ => None,
    })
}

/// `count` distinct rational affine places with a rational Hermitian point
/// `(A, B)` above them, found by drawing `A` and solving for `B`. Returned
/// in draw order together with the point.
pub fn sample_hermitian_places(
    ctx: &CurveCtx,
    count: usize,
    seed: u64,
) -> Result<Vec<(Place, FieldElem, FieldElem)>, CurveError> {
    use rand::{Rng, SeedableRng};
    let f = ctx.base();
    let q = ctx.q;
    let r = (q + 1) / ctx.m;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let attempts = 1000 + 200 * count;
    let mut out: Vec<(Place, FieldElem, FieldElem)> = Vec::new();
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let big_a = f.random(&mut rng);
        if big_a.is_zero() {
            continue;
        }
        let rhs = f.sub(f.neg(f.one()), f.pow(big_a, q + 1));
        let roots = f.nth_roots(rhs, q + 1);
        if rhs.is_zero() || roots.is_empty() {
            continue;
        }
        let big_b = roots[rng.gen_range(0..roots.len())];
        let place = Place::Affine {
            a: f.pow(big_a, r),
            b: f.pow(big_b, r),
            degree: 1,
        };
        if out.iter().all(|(p, _, _)| *p != place) {
            out.push((place, big_a, big_b));
        }
    }
    if out.len() < count {
        return Err(CurveError::SampleExhausted {
            found: out.len(),
            wanted: count,
            d: 1,
            attempts,
        });
    }
    Ok(out)
}

/// Orbit of `start` under the group generated by `gens`, in discovery order.
pub fn orbit(
    ctx: &CurveCtx,
    start: &Place,
    gens: &[AutGen],
) -> Result<Vec<Place>, CurveError> {
    let mut seen = vec![*start];
    let mut queue = VecDeque::from([*start]);
    while let Some(p) = queue.pop_front() {
        for &g in gens {
            let img = apply_automorphism(ctx, &AutWord::single(g), &p)?;
            if !seen.contains(&img) {
                seen.push(img);
                queue.push_back(img);
            }
        }
    }
    Ok(seen)
}

/// Generators of the full automorphism group: `A(1,0)`, `A(0,1)`, `S`, `T`.
pub fn standard_generators() -> [AutGen; 4] {
    [AutGen::A(1, 0), AutGen::A(0, 1), AutGen::S, AutGen::T]
}
