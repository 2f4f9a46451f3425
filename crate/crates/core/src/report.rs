//! JSON and CSV encodings of curves, places, gap sets and surveys.
//!
//! Field elements are written as coordinate vectors over F_p, little-endian
//! in the polynomial basis of the layer they live in. Every top-level JSON
//! document carries `"schema": 1`.

use serde_json::{json, Map, Value};

use crate::curve::{CurveCtx, CurveError, Place};
use crate::field::{FieldElem, FieldTower};
use crate::oracle::GapSet;
use crate::series::TruncSeries;
use crate::theorems::{
    case_label, semigroup_from_gaps, Bucket, Classification, POrder, PlaceRecord,
};

pub const SCHEMA_VERSION: u64 = 1;

pub fn elem_json(f: &FieldTower, x: FieldElem) -> Value {
    json!(f.coords(x))
}

/// `{"p", "e", "q", "m", "genus", "modulus"}`, the modulus being the
/// integer coefficients of the defining polynomial of F_{q^2} over F_p.
pub fn curve_json(ctx: &CurveCtx) -> Value {
    json!({
        "p": ctx.characteristic(),
        "e": ctx.exponent(),
        "q": ctx.q(),
        "m": ctx.m(),
        "genus": ctx.genus(),
        "modulus": ctx.base().modulus(),
    })
}

/// `{"kind", "index"?, "a", "b", "degree"}`. Places at infinity have no
/// affine coordinates, so `a` and `b` are null for them.
pub fn place_json(ctx: &CurveCtx, place: &Place) -> Result<Value, CurveError> {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(place.kind()));
    if let Some(i) = place.index() {
        obj.insert("index".into(), json!(i));
    }
    let (a, b) = match *place {
        Place::Affine { a, b, degree } => {
            let f = ctx.tower(degree)?;
            (elem_json(&f, a), elem_json(&f, b))
        }
        Place::AxisX(i) => {
            let f = ctx.base();
            (elem_json(&f, ctx.alpha(i)?), elem_json(&f, f.zero()))
        }
        Place::AxisY(i) => {
            let f = ctx.base();
            (elem_json(&f, f.zero()), elem_json(&f, ctx.alpha(i)?))
        }
        Place::Infinity(i) => {
            ctx.alpha(i)?;
            (Value::Null, Value::Null)
        }
    };
    obj.insert("a".into(), a);
    obj.insert("b".into(), b);
    obj.insert("degree".into(), json!(place.degree()));
    Ok(Value::Object(obj))
}

/// `{"genus", "gaps", "generators", "frobenius"}`. A gap list whose
/// complement is not a semigroup gets null generators.
pub fn gapset_json(gaps: &GapSet) -> Value {
    let generators = semigroup_from_gaps(gaps.gaps()).ok().map(|s| s.min_generators);
    json!({
        "genus": gaps.genus(),
        "gaps": gaps.gaps(),
        "generators": generators,
        "frobenius": gaps.gaps().last().map_or(-1, |&f| f as i64),
    })
}

/// A number, or the string `"inf"`.
pub fn p_order_json(order: Option<POrder>) -> Value {
    match order {
        Some(POrder::Finite(i)) => json!(i),
        Some(POrder::Infinite) => json!("inf"),
        None => Value::Null,
    }
}

/// Coefficients of each series as coordinate vectors.
pub fn series_json(f: &FieldTower, family: &[TruncSeries]) -> Value {
    Value::Array(
        family
            .iter()
            .map(|s| Value::Array(s.coeffs().iter().map(|&c| elem_json(f, c)).collect()))
            .collect(),
    )
}

pub fn verdict(record: &PlaceRecord) -> &'static str {
    match record.matches() {
        Some(true) => "match",
        Some(false) => "mismatch",
        None => "no_closed_form",
    }
}

pub fn record_json(ctx: &CurveCtx, id: usize, r: &PlaceRecord) -> Result<Value, ReportError> {
    Ok(json!({
        "id": id,
        "place": place_json(ctx, &r.place)?,
        "oracle": gapset_json(&r.oracle),
        "closed_form": r.closed_form.as_ref().map(gapset_json),
        "branch": r.branch,
        "p_order": p_order_json(r.p_order),
        "case": r.p_order.and_then(|o| case_label(ctx.m(), o)),
        "verdict": verdict(r),
    }))
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv: {0}")]
    CsvFlush(String),
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn coords_field(ctx: &CurveCtx, place: &Place) -> Result<(String, String), CurveError> {
    let f = ctx.tower(place.degree())?;
    let (a, b) = match *place {
        Place::Affine { a, b, .. } => (Some(a), Some(b)),
        Place::AxisX(i) => (Some(ctx.alpha(i)?), Some(f.zero())),
        Place::AxisY(i) => (Some(f.zero()), Some(ctx.alpha(i)?)),
        Place::Infinity(_) => (None, None),
    };
    let enc = |x: Option<FieldElem>| x.map(|x| joined(&f.coords(x))).unwrap_or_default();
    Ok((enc(a), enc(b)))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, ReportError> {
    let bytes = w
        .into_inner()
        .map_err(|e| ReportError::CsvFlush(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

/// One row per place: `id,kind,index,degree,a,b`.
pub fn places_csv(ctx: &CurveCtx, places: &[Place]) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "kind", "index", "degree", "a", "b"])?;
    for (id, p) in places.iter().enumerate() {
        let (a, b) = coords_field(ctx, p)?;
        let index = p.index().map(|i| i.to_string()).unwrap_or_default();
        w.write_record([
            id.to_string(),
            p.kind().to_string(),
            index,
            p.degree().to_string(),
            a,
            b,
        ])?;
    }
    finish(w)
}

/// One row per place with degree, P-order, case label, the two gap lists
/// joined by semicolons, and the verdict.
pub fn survey_csv(ctx: &CurveCtx, rows: &[(usize, PlaceRecord)]) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "id",
        "kind",
        "index",
        "degree",
        "a",
        "b",
        "p_order",
        "case",
        "oracle_gaps",
        "closed_form_gaps",
        "verdict",
    ])?;
    for (id, r) in rows {
        let (a, b) = coords_field(ctx, &r.place)?;
        w.write_record([
            id.to_string(),
            r.place.kind().to_string(),
            r.place.index().map(|i| i.to_string()).unwrap_or_default(),
            r.place.degree().to_string(),
            a,
            b,
            r.p_order.map(|o| o.to_string()).unwrap_or_default(),
            r.p_order
                .and_then(|o| case_label(ctx.m(), o))
                .map(|c| c.to_string())
                .unwrap_or_default(),
            joined(r.oracle.gaps()),
            r.closed_form
                .as_ref()
                .map(|g| joined(g.gaps()))
                .unwrap_or_default(),
            verdict(r).to_string(),
        ])?;
    }
    finish(w)
}

fn bucket_json(b: &Bucket, generic: Option<&[u64]>) -> Value {
    json!({
        "gaps": b.gaps,
        "places": b.places,
        "count": b.places.len(),
        "rational": b.rational,
        "non_rational": b.non_rational,
        "in_o": b.in_o,
        "generic": generic == Some(b.gaps.as_slice()),
    })
}

/// Buckets refer to places by their position in `"places"`.
pub fn classification_json(
    ctx: &CurveCtx,
    records: &[PlaceRecord],
    cls: &Classification,
) -> Result<Value, ReportError> {
    let places = records
        .iter()
        .enumerate()
        .map(|(k, r)| record_json(ctx, k, r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cases = std::collections::BTreeMap::new();
    for r in records {
        if let Some(c) = r.p_order.and_then(|o| case_label(ctx.m(), o)) {
            *cases.entry(c.to_string()).or_insert(0usize) += 1;
        }
    }
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "curve": curve_json(ctx),
        "places": places,
        "generic": cls.generic,
        "generic_is_majority": cls.generic_is_majority,
        "buckets": cls
            .buckets
            .iter()
            .map(|b| bucket_json(b, cls.generic.as_deref()))
            .collect::<Vec<_>>(),
        "weierstrass": cls.weierstrass,
        "rational_weierstrass": cls.rational_weierstrass,
        "non_rational_weierstrass": cls.non_rational_weierstrass,
        "p_order_histogram": cls.p_order_histogram,
        "case_counts": cases,
    }))
}

/// One row per bucket.
pub fn classification_csv(cls: &Classification) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "gaps",
        "count",
        "rational",
        "non_rational",
        "in_o",
        "generic",
        "places",
    ])?;
    for b in &cls.buckets {
        w.write_record([
            joined(&b.gaps),
            b.places.len().to_string(),
            b.rational.to_string(),
            b.non_rational.to_string(),
            b.in_o.to_string(),
            (cls.generic.as_deref() == Some(b.gaps.as_slice())).to_string(),
            joined(&b.places),
        ])?;
    }
    finish(w)
}
