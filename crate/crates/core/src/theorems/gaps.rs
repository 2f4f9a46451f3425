//! Closed-form gap sets.
//!
//! Each set is produced by running over its index set, so colliding tuples
//! are harmless. The integer cores take `m` and the stride directly and do
//! not touch any field.

use std::collections::BTreeSet;

use serde::Serialize;

use super::pq::{p_order, POrder};
use super::semigroup::gaps_of_generated;
use super::TheoremError;
use crate::curve::{alpha_invariant, CurveCtx, Place};
use crate::oracle::GapSet;

/// Gaps of `<m-1, m>`, the semigroup at every place of O.
pub fn gaps_o_int(m: u64) -> Vec<u64> {
    if m < 3 {
        return Vec::new();
    }
    gaps_of_generated(&[m - 1, m])
}

/// Tuples `(i, j, k)` with `i + j + 2k <= m - 3`.
pub fn half_index_set(m: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    if m < 3 {
        return out;
    }
    let budget = m - 3;
    for k in 0..=budget / 2 {
        for i in 0..=budget - 2 * k {
            for j in 0..=budget - 2 * k - i {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// The tuple set without repetitions for `m = (q+1)/2`: `i <= 1`,
/// `j <= (q-5)/2 - i`, `k <= floor((q-5-2i-2j)/4)`. Needs odd `q >= 5`.
pub fn half_reduced_index_set(q: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    if q < 5 || q.is_multiple_of(2) {
        return out;
    }
    let top = (q - 5) / 2;
    for i in 0..=1u64.min(top) {
        for j in 0..=top - i {
            for k in 0..=(q - 5 - 2 * i - 2 * j) / 4 {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// `{ i + 2j + k*stride + 1 : i + j + 2k <= m - 3 }`.
pub fn gaps_half_int(m: u64, stride: u64) -> Vec<u64> {
    let set: BTreeSet<u64> = half_index_set(m)
        .into_iter()
        .map(|(i, j, k)| i + 2 * j + k * stride + 1)
        .collect();
    set.into_iter().collect()
}

/// All values of the index set for `m = (q+1)/3`, with repetitions.
///
/// Without a usable P-order (`Infinite`, or `i > m - 2`) the values are
/// `k*stride + 2 l0 + (3j+2) l1 + s + 1` over `s <= 1`, `j <= m - 2` and
/// `3k + l0 + (j+1) l1 + s <= m - 3`. For P-order `i <= m - 2` the extra
/// term `l2 (3i+3)` enters, `j <= i - 1`, and the constraint gains
/// `l2 (i+1)`.
pub fn third_index_values(m: u64, stride: u64, order: POrder) -> Vec<u64> {
    let mut out = Vec::new();
    if m < 3 {
        return out;
    }
    let budget0 = m - 3;
    let (j_max, l2_step) = match order {
        POrder::Finite(i) if i >= 1 && i + 2 <= m => (i - 1, Some(i + 1)),
        _ => (m - 2, None),
    };
    for k in 0..=budget0 / 3 {
        for s in 0..=1u64 {
            let Some(b1) = budget0.checked_sub(3 * k + s) else { continue };
            let l2_range = match l2_step {
                Some(step) => 0..=b1 / step,
                None => 0..=0,
            };
            for l2 in l2_range {
                let b2 = b1 - l2 * l2_step.unwrap_or(0);
                let extra = l2 * 3 * l2_step.unwrap_or(0);
                for l1 in 0..=b2 {
                    // j only matters when l1 > 0
                    let js = if l1 == 0 { 0..=0 } else { 0..=j_max };
                    for j in js {
                        let used = (j + 1) * l1;
                        if used > b2 {
                            break;
                        }
                        for l0 in 0..=b2 - used {
                            out.push(k * stride + 2 * l0 + (3 * j + 2) * l1 + extra + s + 1);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn gaps_third_int(m: u64, stride: u64, order: POrder) -> Vec<u64> {
    let set: BTreeSet<u64> = third_index_values(m, stride, order).into_iter().collect();
    set.into_iter().collect()
}

fn checked(ctx: &CurveCtx, gaps: Vec<u64>, what: &'static str) -> Result<GapSet, TheoremError> {
    if gaps.len() as u64 != ctx.genus() {
        return Err(TheoremError::SizeMismatch {
            what,
            got: gaps.len() as u64,
            genus: ctx.genus(),
        });
    }
    Ok(GapSet::new(ctx.genus(), gaps))
}

/// Gap set at the places of O.
pub fn gaps_o(ctx: &CurveCtx) -> Result<GapSet, TheoremError> {
    if ctx.m() < 3 {
        return Err(TheoremError::NotApplicable(format!(
            "the O formula needs m >= 3, got m = {}",
            ctx.m()
        )));
    }
    checked(ctx, gaps_o_int(ctx.m()), "gaps_o")
}

/// True when `m = (q+1)/2` with `m >= 4`.
pub fn half_applies(ctx: &CurveCtx) -> bool {
    2 * ctx.m() == ctx.q() + 1 && ctx.m() >= 4
}

/// True when `m = (q+1)/3` with `m >= 4`.
pub fn third_applies(ctx: &CurveCtx) -> bool {
    3 * ctx.m() == ctx.q() + 1 && ctx.m() >= 4
}

fn stride(ctx: &CurveCtx, rational: bool, offset: u64) -> u64 {
    (if rational { ctx.q() + 1 } else { ctx.q() }) + offset
}

/// Gap set at an affine place outside O for `m = (q+1)/2`.
pub fn gaps_half(ctx: &CurveCtx, rational: bool) -> Result<GapSet, TheoremError> {
    gaps_half_with(ctx, rational, 0)
}

fn gaps_half_with(ctx: &CurveCtx, rational: bool, offset: u64) -> Result<GapSet, TheoremError> {
    if !half_applies(ctx) {
        return Err(TheoremError::NotApplicable(format!(
            "needs m = (q+1)/2 >= 4, got q = {}, m = {}",
            ctx.q(),
            ctx.m()
        )));
    }
    checked(ctx, gaps_half_int(ctx.m(), stride(ctx, rational, offset)), "gaps_half")
}

/// Gap set at an affine place outside O for `m = (q+1)/3`.
pub fn gaps_third(ctx: &CurveCtx, rational: bool, order: POrder) -> Result<GapSet, TheoremError> {
    gaps_third_with(ctx, rational, order, 0)
}

fn gaps_third_with(
    ctx: &CurveCtx,
    rational: bool,
    order: POrder,
    offset: u64,
) -> Result<GapSet, TheoremError> {
    if !third_applies(ctx) {
        return Err(TheoremError::NotApplicable(format!(
            "needs m = (q+1)/3 >= 4, got q = {}, m = {}",
            ctx.q(),
            ctx.m()
        )));
    }
    if order == POrder::Finite(0) {
        return Err(TheoremError::BadOrder);
    }
    checked(
        ctx,
        gaps_third_int(ctx.m(), stride(ctx, rational, offset), order),
        "gaps_third",
    )
}

/// Which closed form produced a gap set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Places of O.
    Orbit,
    /// `m = (q+1)/2`.
    Half,
    /// `m = (q+1)/3` without the P-order term.
    ThirdGeneric,
    /// `m = (q+1)/3` with P-order `i <= m - 2`.
    ThirdOrdered,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub gaps: GapSet,
    pub branch: Branch,
    pub p_order: Option<POrder>,
}

/// P-order of the alpha invariant of an affine place, when `m = (q+1)/3`.
pub fn place_p_order(ctx: &CurveCtx, place: &Place) -> Result<Option<POrder>, TheoremError> {
    if !third_applies(ctx) || place.in_o() {
        return Ok(None);
    }
    let f = ctx.tower(place.degree())?;
    let alpha = alpha_invariant(ctx, place)?;
    Ok(Some(p_order(ctx, &f, alpha)?))
}

/// The applicable closed-form gap set at `place`, or `None` when no
/// theorem covers the curve.
pub fn closed_form_gaps(ctx: &CurveCtx, place: &Place) -> Result<Option<ClosedForm>, TheoremError> {
    closed_form_gaps_with(ctx, place, 0)
}

/// As [`closed_form_gaps`], with the stride of the non-O formulas raised by
/// `stride_offset`. A nonzero offset gives wrong answers on purpose; it
/// exists to exercise mismatch reporting.
pub fn closed_form_gaps_with(
    ctx: &CurveCtx,
    place: &Place,
    stride_offset: u64,
) -> Result<Option<ClosedForm>, TheoremError> {
    if place.in_o() {
        if ctx.m() < 3 {
            return Ok(None);
        }
        return Ok(Some(ClosedForm {
            gaps: gaps_o(ctx)?,
            branch: Branch::Orbit,
            p_order: None,
        }));
    }
    let rational = place.is_rational();
    if half_applies(ctx) {
        return Ok(Some(ClosedForm {
            gaps: gaps_half_with(ctx, rational, stride_offset)?,
            branch: Branch::Half,
            p_order: None,
        }));
    }
    if third_applies(ctx) {
        let order = place_p_order(ctx, place)?.expect("third branch applies");
        let branch = match order {
            POrder::Finite(i) if i + 2 <= ctx.m() => Branch::ThirdOrdered,
            _ => Branch::ThirdGeneric,
        };
        return Ok(Some(ClosedForm {
            gaps: gaps_third_with(ctx, rational, order, stride_offset)?,
            branch,
            p_order: Some(order),
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_curve;

    #[test]
    fn orbit_gaps() {
        assert_eq!(gaps_o_int(4), vec![1, 2, 5]);
        assert_eq!(gaps_o_int(5), vec![1, 2, 3, 6, 7, 11]);
        assert_eq!(gaps_o_int(3), vec![1]);
        let c = make_curve(5, 1, 3).unwrap();
        assert_eq!(gaps_o(&c).unwrap().gaps(), &[1]);
    }

    #[test]
    fn half_examples() {
        let c = make_curve(7, 1, 4).unwrap();
        assert_eq!(gaps_half(&c, true).unwrap().gaps(), &[1, 2, 3]);
        let c = make_curve(3, 2, 5).unwrap();
        assert_eq!(gaps_half(&c, true).unwrap().gaps(), &[1, 2, 3, 4, 5, 11]);
        assert_eq!(gaps_half(&c, false).unwrap().gaps(), &[1, 2, 3, 4, 5, 10]);
        let c = make_curve(5, 1, 3).unwrap();
        assert!(matches!(gaps_half(&c, true), Err(TheoremError::NotApplicable(_))));
        assert!(matches!(
            gaps_third(&c, true, POrder::Infinite),
            Err(TheoremError::NotApplicable(_))
        ));
    }

    #[test]
    fn third_examples() {
        let c = make_curve(17, 1, 6).unwrap();
        let generic = [1, 2, 3, 4, 5, 6, 7, 8, 9, 19];
        assert_eq!(gaps_third(&c, true, POrder::Infinite).unwrap().gaps(), &generic);
        assert_eq!(gaps_third(&c, true, POrder::Finite(5)).unwrap().gaps(), &generic);
        assert_eq!(
            gaps_third(&c, true, POrder::Finite(2)).unwrap().gaps(),
            &[1, 2, 3, 4, 5, 6, 7, 8, 10, 19]
        );
        assert_eq!(gaps_third(&c, true, POrder::Finite(0)), Err(TheoremError::BadOrder));
        let c = make_curve(11, 1, 4).unwrap();
        for order in [POrder::Finite(1), POrder::Finite(2), POrder::Infinite] {
            assert_eq!(gaps_third(&c, true, order).unwrap().gaps(), &[1, 2, 3]);
        }
    }

    #[test]
    fn reduced_half_set_has_no_repetitions() {
        for q in (5..=61).step_by(2) {
            let m = (q + 1) / 2;
            let mut vals: Vec<u64> = half_reduced_index_set(q)
                .into_iter()
                .map(|(i, j, k)| i + 2 * j + k * (q + 1) + 1)
                .collect();
            let n = vals.len();
            vals.sort_unstable();
            vals.dedup();
            assert_eq!(vals.len(), n, "q = {q}");
            assert_eq!(vals, gaps_half_int(m, q + 1), "q = {q}");
        }
    }

    #[test]
    fn boundary_continuity() {
        for m in 4..30 {
            let generic = gaps_third_int(m, 3 * m, POrder::Infinite);
            for i in m - 1..m + 3 {
                assert_eq!(gaps_third_int(m, 3 * m, POrder::Finite(i)), generic);
            }
        }
    }

    #[test]
    fn stride_swap_keeps_cardinality() {
        for m in 4..40 {
            let q = 2 * m - 1;
            assert_eq!(gaps_half_int(m, q + 1).len(), gaps_half_int(m, q).len());
            let q = 3 * m - 1;
            for i in (1..m).map(POrder::Finite).chain([POrder::Infinite]) {
                assert_eq!(
                    gaps_third_int(m, q + 1, i).len(),
                    gaps_third_int(m, q, i).len()
                );
            }
        }
    }
}
