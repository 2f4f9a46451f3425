//! Surveys of many places and their grouping by gap set.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::gaps::{closed_form_gaps_with, Branch};
use super::pq::POrder;
use super::TheoremError;
use crate::curve::{enumerate_places, CurveCtx, Place};
use crate::oracle::{gap_set_oracle, GapSet};

/// Everything computed at one place.
#[derive(Clone, Debug)]
pub struct PlaceRecord {
    pub place: Place,
    pub oracle: GapSet,
    pub closed_form: Option<GapSet>,
    pub branch: Option<Branch>,
    pub p_order: Option<POrder>,
}

impl PlaceRecord {
    /// `None` when no closed form applies.
    pub fn matches(&self) -> Option<bool> {
        self.closed_form.as_ref().map(|g| *g == self.oracle)
    }
}

/// Oracle and closed form at one place.
pub fn survey_place(
    ctx: &CurveCtx,
    place: &Place,
    precision: Option<usize>,
    stride_offset: u64,
) -> Result<PlaceRecord, TheoremError> {
    let oracle = gap_set_oracle(ctx, place, precision)?;
    let cf = closed_form_gaps_with(ctx, place, stride_offset)?;
    let p_order = match &cf {
        Some(c) => c.p_order,
        None => super::gaps::place_p_order(ctx, place)?,
    };
    Ok(PlaceRecord {
        place: *place,
        oracle,
        branch: cf.as_ref().map(|c| c.branch),
        closed_form: cf.map(|c| c.gaps),
        p_order,
    })
}

/// [`survey_place`] at every place, in parallel, keeping the input order
/// and one result per place.
pub fn survey_each(
    ctx: &CurveCtx,
    places: &[Place],
    precision: Option<usize>,
    stride_offset: u64,
) -> Vec<Result<PlaceRecord, TheoremError>> {
    places
        .par_iter()
        .map(|p| survey_place(ctx, p, precision, stride_offset))
        .collect()
}

/// As [`survey_each`], stopping at the first failure.
pub fn survey(
    ctx: &CurveCtx,
    places: &[Place],
    precision: Option<usize>,
    stride_offset: u64,
) -> Result<Vec<PlaceRecord>, TheoremError> {
    survey_each(ctx, places, precision, stride_offset)
        .into_iter()
        .collect()
}

/// Case label of the cardinality analysis for P-order `i <= m - 2`:
/// 1 for `m-6 <= i`, otherwise 2, 3 or 4 as `2i` is above, equal to or
/// below `m - 5`.
pub fn case_label(m: u64, order: POrder) -> Option<u8> {
    let POrder::Finite(i) = order else {
        return None;
    };
    if i == 0 || i + 2 > m {
        return None;
    }
    if i + 6 >= m {
        return Some(1);
    }
    let (lhs, rhs) = (2 * i, m - 5);
    Some(if lhs > rhs {
        2
    } else if lhs == rhs {
        3
    } else {
        4
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Bucket {
    pub gaps: Vec<u64>,
    /// Positions in the surveyed place list.
    pub places: Vec<usize>,
    pub rational: usize,
    pub non_rational: usize,
    pub in_o: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    /// Most frequent gap set among affine places outside O.
    pub generic: Option<Vec<u64>>,
    /// Whether that set holds for more than half of those places. When it
    /// does not, "generic" is only a plurality and may be misleading.
    pub generic_is_majority: bool,
    pub buckets: Vec<Bucket>,
    /// Positions of places whose gap set differs from the generic one.
    pub weierstrass: Vec<usize>,
    pub rational_weierstrass: usize,
    pub non_rational_weierstrass: usize,
    pub p_order_histogram: BTreeMap<String, usize>,
}

/// Groups surveyed places by their oracle gap set.
pub fn classify(records: &[PlaceRecord]) -> Classification {
    let mut by_gaps: BTreeMap<Vec<u64>, Bucket> = BTreeMap::new();
    let mut hist = BTreeMap::new();
    for (k, r) in records.iter().enumerate() {
        let b = by_gaps
            .entry(r.oracle.gaps().to_vec())
            .or_insert_with(|| Bucket {
                gaps: r.oracle.gaps().to_vec(),
                places: Vec::new(),
                rational: 0,
                non_rational: 0,
                in_o: 0,
            });
        b.places.push(k);
        if r.place.in_o() {
            b.in_o += 1;
        } else if r.place.is_rational() {
            b.rational += 1;
        } else {
            b.non_rational += 1;
        }
        if let Some(o) = r.p_order {
            *hist.entry(o.to_string()).or_insert(0) += 1;
        }
    }
    let affine_total = records.iter().filter(|r| !r.place.in_o()).count();
    // ties go to the smaller gap list, since the map iterates in order
    let generic = by_gaps
        .values()
        .filter(|b| b.rational + b.non_rational > 0)
        .max_by(|x, y| {
            (x.rational + x.non_rational)
                .cmp(&(y.rational + y.non_rational))
                .then(y.gaps.cmp(&x.gaps))
        })
        .map(|b| (b.gaps.clone(), b.rational + b.non_rational));
    let generic_is_majority = generic.as_ref().is_some_and(|(_, n)| 2 * n > affine_total);
    let generic = generic.map(|(g, _)| g);
    let weierstrass: Vec<usize> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| generic.as_deref() != Some(r.oracle.gaps()))
        .map(|(k, _)| k)
        .collect();
    let rational_weierstrass = weierstrass
        .iter()
        .filter(|&&k| records[k].place.is_rational())
        .count();
    Classification {
        non_rational_weierstrass: weierstrass.len() - rational_weierstrass,
        rational_weierstrass,
        weierstrass,
        generic,
        generic_is_majority,
        buckets: by_gaps.into_values().collect(),
        p_order_histogram: hist,
    }
}

/// Surveys every place of degree at most `d_max` and classifies them.
pub fn classify_weierstrass(
    ctx: &CurveCtx,
    d_max: u32,
) -> Result<(Vec<PlaceRecord>, Classification), TheoremError> {
    let places = enumerate_places(ctx, d_max)?;
    let records = survey(ctx, &places, None, 0)?;
    let cls = classify(&records);
    Ok((records, cls))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_curve;

    #[test]
    fn q7_only_o_is_weierstrass() {
        let c = make_curve(7, 1, 4).unwrap();
        let (records, cls) = classify_weierstrass(&c, 1).unwrap();
        assert_eq!(records.len(), 92);
        assert_eq!(cls.generic.as_deref(), Some(&[1, 2, 3][..]));
        assert!(cls.generic_is_majority);
        assert_eq!(cls.weierstrass.len(), 12);
        assert!(cls.weierstrass.iter().all(|&k| records[k].place.in_o()));
        // buckets partition the places
        let mut all: Vec<usize> = cls.buckets.iter().flat_map(|b| b.places.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..records.len()).collect::<Vec<_>>());
        assert!(records.iter().all(|r| r.matches() == Some(true)));
    }

    #[test]
    fn case_labels() {
        assert_eq!(case_label(20, POrder::Finite(14)), Some(1));
        assert_eq!(case_label(20, POrder::Finite(13)), Some(2));
        assert_eq!(case_label(21, POrder::Finite(8)), Some(3));
        assert_eq!(case_label(20, POrder::Finite(3)), Some(4));
        assert_eq!(case_label(20, POrder::Finite(19)), None);
        assert_eq!(case_label(20, POrder::Infinite), None);
    }
}
