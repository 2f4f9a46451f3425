//! Place enumeration, random sampling and the rational-place census.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{canonical_place, point_degree, CurveCtx, CurveError, Place};
use crate::field::{FieldTower, TABLE_LIMIT};

/// Largest field F_{q^{2d}} that [`enumerate_places`] will sweep.
pub const ENUMERATION_LIMIT: u64 = TABLE_LIMIT;

/// All affine points `(a, b)`, `ab != 0`, of the curve over `f`, visited
/// through discrete logarithms: `u = a^m` runs over the nonzero m-th powers
/// and `b` over the m-th roots of `-1 - u`. Each call to `visit` receives
/// the logarithms of `a` and `b`.
fn for_each_point<F>(ctx: &CurveCtx, f: &FieldTower, visit: F) -> Result<Vec<Place>, CurveError>
where
    F: Fn(u64, u64) -> Option<Place> + Sync,
{
    if !f.has_tables() {
        return Err(CurveError::EnumerationTooLarge {
            order: f.order(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let m = ctx.m();
    let group = f.order() - 1;
    let step = group / m;
    let minus_one = f.neg(f.one());
    let mut out: Vec<Place> = (0..step)
        .into_par_iter()
        .flat_map_iter(|k| {
            let u = f.table_exp(k * m).expect("tables present");
            let v = f.sub(minus_one, u);
            let lv = f.table_log(v).filter(|lv| lv % m == 0);
            let mut found = Vec::new();
            if let Some(lv) = lv {
                for i in 0..m {
                    for j in 0..m {
                        if let Some(p) = visit(k + i * step, lv / m + j * step) {
                            found.push(p);
                        }
                    }
                }
            }
            found
        })
        .collect();
    out.sort_by_key(|p| match p {
        Place::Affine { a, b, .. } => (a.packed(), b.packed()),
        _ => (0, 0),
    });
    Ok(out)
}

/// The places of O followed by one representative of every Frobenius orbit
/// of affine places of degree at most `d_max`, by degree and then by packed
/// coordinates. The representative is the orbit member with the smallest
/// packed `(a, b)`.
pub fn enumerate_places(ctx: &CurveCtx, d_max: u32) -> Result<Vec<Place>, CurveError> {
    let mut places = ctx.o_places();
    for d in 1..=d_max {
        let f = ctx.tower(d)?;
        let group = f.order() - 1;
        let q2 = ctx.q() * ctx.q();
        // log x is a multiple of this iff x lies in the degree-k layer
        let sub_step: Vec<u64> = (1..d)
            .filter(|k| d % k == 0)
            .map(|k| group / (q2.pow(k) - 1))
            .collect();
        let found = for_each_point(ctx, &f, |la, lb| {
            if sub_step.iter().any(|&s| la % s == 0 && lb % s == 0) {
                return None;
            }
            // the orbit under x -> x^{q^2} multiplies logs by q^2
            let key = |la: u64, lb: u64| {
                let a = f.table_exp(la).expect("tables present");
                let b = f.table_exp(lb).expect("tables present");
                (a.packed(), b.packed())
            };
            let own = key(la, lb);
            let (mut xa, mut xb) = (la, lb);
            for _ in 1..d {
                xa = ((xa as u128 * q2 as u128) % group as u128) as u64;
                xb = ((xb as u128 * q2 as u128) % group as u128) as u64;
                if key(xa, xb) < own {
                    return None;
                }
            }
            Some(Place::Affine {
                a: f.table_exp(la).expect("tables present"),
                b: f.table_exp(lb).expect("tables present"),
                degree: d,
            })
        })?;
        places.extend(found);
    }
    Ok(places)
}

/// Number of degree-1 places: affine points with `ab != 0` plus the `3m`
/// places of O.
pub fn rational_place_census(ctx: &CurveCtx) -> Result<u64, CurveError> {
    let f = ctx.base();
    let affine = for_each_point(ctx, &f, |la, lb| {
        Some(Place::Affine {
            a: f.table_exp(la).expect("tables present"),
            b: f.table_exp(lb).expect("tables present"),
            degree: 1,
        })
    })?;
    Ok(affine.len() as u64 + 3 * ctx.m())
}

/// `count` distinct affine places of exact degree `d`, drawn with a seeded
/// generator and returned as canonical representatives in draw order.
pub fn sample_places(
    ctx: &CurveCtx,
    d: u32,
    count: usize,
    seed: u64,
) -> Result<Vec<Place>, CurveError> {
    let f = ctx.tower(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let minus_one = f.neg(f.one());
    let attempts = 1000 + 200 * count;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let a = f.random(&mut rng);
        if a.is_zero() {
            continue;
        }
        let rhs = f.sub(minus_one, f.pow(a, ctx.m()));
        if rhs.is_zero() {
            continue;
        }
        let roots = f.nth_roots(rhs, ctx.m());
        if roots.is_empty() {
            continue;
        }
        let b = roots[rng.gen_range(0..roots.len())];
        if point_degree(&f, a, b) != d {
            continue;
        }
        let place = canonical_place(ctx, &Place::Affine { a, b, degree: d })?;
        if seen.insert(place) {
            out.push(place);
        }
    }
    if out.len() < count {
        return Err(CurveError::SampleExhausted {
            found: out.len(),
            wanted: count,
            d,
            attempts,
        });
    }
    Ok(out)
}

/// The places of O plus up to `per_degree` affine places of each degree
/// `1..=d_max`, ordered as in [`enumerate_places`]. Rational places are
/// drawn from the full list, higher degrees through [`sample_places`]; the
/// seed fixes every draw.
pub fn sampled_places(
    ctx: &CurveCtx,
    d_max: u32,
    per_degree: usize,
    seed: u64,
) -> Result<Vec<Place>, CurveError> {
    let mut places = ctx.o_places();
    if d_max == 0 {
        return Ok(places);
    }
    let rational: Vec<Place> = enumerate_places(ctx, 1)?
        .into_iter()
        .filter(|p| !p.in_o())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = per_degree.min(rational.len());
    let mut picked = rand::seq::index::sample(&mut rng, rational.len(), k).into_vec();
    picked.sort_unstable();
    places.extend(picked.into_iter().map(|i| rational[i]));
    for d in 2..=d_max {
        let mut drawn = sample_places(ctx, d, per_degree, seed.wrapping_add(d as u64))?;
        drawn.sort_by_key(|p| match p {
            Place::Affine { a, b, .. } => (a.packed(), b.packed()),
            _ => (0, 0),
        });
        places.extend(drawn);
    }
    Ok(places)
}
