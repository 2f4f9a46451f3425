//! C interface to `fermat-ws`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every fallible call returns an
//! [`FwsStatus`]; the message of the most recent failure on the calling
//! thread is available from [`fws_last_error`]. Gap lists are written into
//! caller buffers: the required length is always stored in `*len`, and
//! `FWS_STATUS_BUFFER_TOO_SMALL` is returned when `cap` is below it.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use fermat_ws::curve::{enumerate_places, make_curve, rational_place_census, CurveCtx, Place};
use fermat_ws::oracle::gap_set_oracle;
use fermat_ws::theorems::gaps::place_p_order;
use fermat_ws::theorems::{closed_form_gaps, POrder};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FwsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidCurve = 2,
    InvalidPlace = 3,
    Computation = 4,
    BufferTooSmall = 5,
    NoClosedForm = 6,
    Panic = 7,
}

/// Kind of a place.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FwsPlaceKind {
    AxisX = 0,
    AxisY = 1,
    Infinity = 2,
    Affine = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FwsPlaceInfo {
    pub kind: FwsPlaceKind,
    /// 1-based index for places of O, 0 for affine places.
    pub index: u64,
    pub degree: u32,
}

/// `FWS_P_ORDER_KIND_NONE` when the curve has no P-order data for the place.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FwsPOrderKind {
    None = 0,
    Finite = 1,
    Infinite = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FwsPOrder {
    pub kind: FwsPOrderKind,
    pub value: u64,
}

/// A curve `X^m + Y^m + 1 = 0` over F_{q^2}.
pub struct FwsCurve {
    ctx: Arc<CurveCtx>,
}

/// The places of O and the affine places up to some degree, in the order
/// of the `places` command.
pub struct FwsPlaceList {
    ctx: Arc<CurveCtx>,
    places: Vec<Place>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn guard(f: impl FnOnce() -> Result<(), (FwsStatus, String)>) -> FwsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FwsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FwsStatus::Panic
        }
    }
}

fn null() -> (FwsStatus, String) {
    (FwsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn list_place<'a>(
    list: *const FwsPlaceList,
    i: usize,
) -> Result<(&'a FwsPlaceList, Place), (FwsStatus, String)> {
    let list = list.as_ref().ok_or_else(null)?;
    let place = *list.places.get(i).ok_or_else(|| {
        (
            FwsStatus::InvalidPlace,
            format!("index {i} outside a list of {}", list.places.len()),
        )
    })?;
    Ok((list, place))
}

unsafe fn write_gaps(gaps: &[u64], buf: *mut u64, cap: usize, len: *mut usize) -> Result<(), (FwsStatus, String)> {
    let len = len.as_mut().ok_or_else(null)?;
    *len = gaps.len();
    if cap < gaps.len() {
        return Err((
            FwsStatus::BufferTooSmall,
            format!("{} gaps, buffer holds {cap}", gaps.len()),
        ));
    }
    if !gaps.is_empty() {
        if buf.is_null() {
            return Err(null());
        }
        std::slice::from_raw_parts_mut(buf, gaps.len()).copy_from_slice(gaps);
    }
    Ok(())
}

/// Message of the last failure on this thread, valid until the next call
/// on the same thread. Never null.
#[no_mangle]
pub extern "C" fn fws_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the curve with `q = p^e`; `m` must divide `q + 1`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fws_curve_new(p: u64, e: u32, m: u64, out: *mut *mut FwsCurve) -> FwsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(null)?;
        let ctx = make_curve(p, e, m).map_err(|err| (FwsStatus::InvalidCurve, err.to_string()))?;
        *out = Box::into_raw(Box::new(FwsCurve { ctx: Arc::new(ctx) }));
        Ok(())
    })
}

/// # Safety
/// `curve` must come from [`fws_curve_new`] and not be used afterwards.
/// Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn fws_curve_free(curve: *mut FwsCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Genus `(m-1)(m-2)/2`, or 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fws_curve_genus(curve: *const FwsCurve) -> u64 {
    curve.as_ref().map_or(0, |c| c.ctx.genus())
}

/// `q`, or 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fws_curve_q(curve: *const FwsCurve) -> u64 {
    curve.as_ref().map_or(0, |c| c.ctx.q())
}

/// Number of F_{q^2}-rational places.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fws_rational_place_count(curve: *const FwsCurve, out: *mut u64) -> FwsStatus {
    guard(|| {
        let curve = curve.as_ref().ok_or_else(null)?;
        let out = out.as_mut().ok_or_else(null)?;
        *out = rational_place_census(&curve.ctx).map_err(|e| (FwsStatus::Computation, e.to_string()))?;
        Ok(())
    })
}

/// Lists the places of O and the affine places of degree at most `d_max`.
/// The list keeps its curve alive.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fws_place_list_new(
    curve: *const FwsCurve,
    d_max: u32,
    out: *mut *mut FwsPlaceList,
) -> FwsStatus {
    guard(|| {
        let curve = curve.as_ref().ok_or_else(null)?;
        let out = out.as_mut().ok_or_else(null)?;
        let places = enumerate_places(&curve.ctx, d_max).map_err(|e| (FwsStatus::Computation, e.to_string()))?;
        *out = Box::into_raw(Box::new(FwsPlaceList {
            ctx: Arc::clone(&curve.ctx),
            places,
        }));
        Ok(())
    })
}

/// # Safety
/// `list` must come from [`fws_place_list_new`] and not be used afterwards.
/// Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn fws_place_list_free(list: *mut FwsPlaceList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Number of places, or 0 for a null handle.
///
/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fws_place_list_len(list: *const FwsPlaceList) -> usize {
    list.as_ref().map_or(0, |l| l.places.len())
}

/// # Safety
/// `list` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fws_place_info(list: *const FwsPlaceList, i: usize, out: *mut FwsPlaceInfo) -> FwsStatus {
    guard(|| {
        let (_, place) = list_place(list, i)?;
        let out = out.as_mut().ok_or_else(null)?;
        let (kind, index) = match place {
            Place::AxisX(k) => (FwsPlaceKind::AxisX, k as u64),
            Place::AxisY(k) => (FwsPlaceKind::AxisY, k as u64),
            Place::Infinity(k) => (FwsPlaceKind::Infinity, k as u64),
            Place::Affine { .. } => (FwsPlaceKind::Affine, 0),
        };
        *out = FwsPlaceInfo {
            kind,
            index,
            degree: place.degree(),
        };
        Ok(())
    })
}

/// Gap set at place `i` from the series oracle. `precision` 0 selects the
/// default `2g + 2`.
///
/// # Safety
/// `list` must be a live handle, `len` writable, and `buf` valid for `cap`
/// writes.
#[no_mangle]
pub unsafe extern "C" fn fws_oracle_gaps(
    list: *const FwsPlaceList,
    i: usize,
    precision: usize,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> FwsStatus {
    guard(|| {
        let (list, place) = list_place(list, i)?;
        let prec = (precision > 0).then_some(precision);
        let gaps = gap_set_oracle(&list.ctx, &place, prec).map_err(|e| (FwsStatus::Computation, e.to_string()))?;
        write_gaps(gaps.gaps(), buf, cap, len)
    })
}

/// Gap set at place `i` from the closed forms; `FWS_STATUS_NO_CLOSED_FORM` when
/// none covers the place.
///
/// # Safety
/// As for [`fws_oracle_gaps`].
#[no_mangle]
pub unsafe extern "C" fn fws_closed_form_gaps(
    list: *const FwsPlaceList,
    i: usize,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> FwsStatus {
    guard(|| {
        let (list, place) = list_place(list, i)?;
        let cf = closed_form_gaps(&list.ctx, &place)
            .map_err(|e| (FwsStatus::Computation, e.to_string()))?
            .ok_or_else(|| (FwsStatus::NoClosedForm, format!("no closed form at {place}")))?;
        write_gaps(cf.gaps.gaps(), buf, cap, len)
    })
}

/// P-order of the alpha invariant of place `i`, defined when
/// `m = (q+1)/3` and the place is affine.
///
/// # Safety
/// `list` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fws_p_order(list: *const FwsPlaceList, i: usize, out: *mut FwsPOrder) -> FwsStatus {
    guard(|| {
        let (list, place) = list_place(list, i)?;
        let out = out.as_mut().ok_or_else(null)?;
        let order = place_p_order(&list.ctx, &place).map_err(|e| (FwsStatus::Computation, e.to_string()))?;
        *out = match order {
            None => FwsPOrder {
                kind: FwsPOrderKind::None,
                value: 0,
            },
            Some(POrder::Finite(v)) => FwsPOrder {
                kind: FwsPOrderKind::Finite,
                value: v,
            },
            Some(POrder::Infinite) => FwsPOrder {
                kind: FwsPOrderKind::Infinite,
                value: 0,
            },
        };
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    #[test]
    fn error_message_is_kept_per_thread() {
        let mut c = ptr::null_mut();
        assert_eq!(unsafe { fws_curve_new(7, 1, 3, &mut c) }, FwsStatus::InvalidCurve);
        assert!(c.is_null());
        let msg = unsafe { CStr::from_ptr(fws_last_error()) }.to_str().unwrap().to_owned();
        assert!(msg.contains("does not divide"), "{msg}");
        std::thread::spawn(|| {
            let other = unsafe { CStr::from_ptr(fws_last_error()) };
            assert!(other.to_bytes().is_empty());
        })
        .join()
        .unwrap();
    }
}
