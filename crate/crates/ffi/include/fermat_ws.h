#ifndef FERMAT_WS_H
#define FERMAT_WS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  FWS_STATUS_OK = 0,
  FWS_STATUS_NULL_POINTER = 1,
  FWS_STATUS_INVALID_CURVE = 2,
  FWS_STATUS_INVALID_PLACE = 3,
  FWS_STATUS_COMPUTATION = 4,
  FWS_STATUS_BUFFER_TOO_SMALL = 5,
  FWS_STATUS_NO_CLOSED_FORM = 6,
  FWS_STATUS_PANIC = 7,
} FwsStatus;

/**
 * Kind of a place.
 */
typedef enum {
  FWS_PLACE_KIND_AXIS_X = 0,
  FWS_PLACE_KIND_AXIS_Y = 1,
  FWS_PLACE_KIND_INFINITY = 2,
  FWS_PLACE_KIND_AFFINE = 3,
} FwsPlaceKind;

/**
 * `FWS_P_ORDER_KIND_NONE` when the curve has no P-order data for the place.
 */
typedef enum {
  FWS_P_ORDER_KIND_NONE = 0,
  FWS_P_ORDER_KIND_FINITE = 1,
  FWS_P_ORDER_KIND_INFINITE = 2,
} FwsPOrderKind;

/**
 * A curve `X^m + Y^m + 1 = 0` over F_{q^2}.
 */
typedef struct FwsCurve FwsCurve;

/**
 * The places of O and the affine places up to some degree, in the order
 * of the `places` command.
 */
typedef struct FwsPlaceList FwsPlaceList;

typedef struct {
  FwsPlaceKind kind;
  /**
   * 1-based index for places of O, 0 for affine places.
   */
  uint64_t index;
  uint32_t degree;
} FwsPlaceInfo;

typedef struct {
  FwsPOrderKind kind;
  uint64_t value;
} FwsPOrder;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, valid until the next call
 * on the same thread. Never null.
 */
const char *fws_last_error(void);

/**
 * Builds the curve with `q = p^e`; `m` must divide `q + 1`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
FwsStatus fws_curve_new(uint64_t p, uint32_t e, uint64_t m, FwsCurve **out);

/**
 * # Safety
 * `curve` must come from [`fws_curve_new`] and not be used afterwards.
 * Null is accepted.
 */
void fws_curve_free(FwsCurve *curve);

/**
 * Genus `(m-1)(m-2)/2`, or 0 for a null handle.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
uint64_t fws_curve_genus(const FwsCurve *curve);

/**
 * `q`, or 0 for a null handle.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
uint64_t fws_curve_q(const FwsCurve *curve);

/**
 * Number of F_{q^2}-rational places.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
FwsStatus fws_rational_place_count(const FwsCurve *curve, uint64_t *out);

/**
 * Lists the places of O and the affine places of degree at most `d_max`.
 * The list keeps its curve alive.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
FwsStatus fws_place_list_new(const FwsCurve *curve, uint32_t d_max, FwsPlaceList **out);

/**
 * # Safety
 * `list` must come from [`fws_place_list_new`] and not be used afterwards.
 * Null is accepted.
 */
void fws_place_list_free(FwsPlaceList *list);

/**
 * Number of places, or 0 for a null handle.
 *
 * # Safety
 * `list` must be null or a live handle.
 */
size_t fws_place_list_len(const FwsPlaceList *list);

/**
 * # Safety
 * `list` must be a live handle and `out` writable.
 */
FwsStatus fws_place_info(const FwsPlaceList *list, size_t i, FwsPlaceInfo *out);

/**
 * Gap set at place `i` from the series oracle. `precision` 0 selects the
 * default `2g + 2`.
 *
 * # Safety
 * `list` must be a live handle, `len` writable, and `buf` valid for `cap`
 * writes.
 */
FwsStatus fws_oracle_gaps(const FwsPlaceList *list,
                          size_t i,
                          size_t precision,
                          uint64_t *buf,
                          size_t cap,
                          size_t *len);

/**
 * Gap set at place `i` from the closed forms; `FWS_STATUS_NO_CLOSED_FORM` when
 * none covers the place.
 *
 * # Safety
 * As for [`fws_oracle_gaps`].
 */
FwsStatus fws_closed_form_gaps(const FwsPlaceList *list,
                               size_t i,
                               uint64_t *buf,
                               size_t cap,
                               size_t *len);

/**
 * P-order of the alpha invariant of place `i`, defined when
 * `m = (q+1)/3` and the place is affine.
 *
 * # Safety
 * `list` must be a live handle and `out` writable.
 */
FwsStatus fws_p_order(const FwsPlaceList *list, size_t i, FwsPOrder *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FERMAT_WS_H */
