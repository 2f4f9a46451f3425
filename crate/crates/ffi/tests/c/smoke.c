#include <stdio.h>
#include <string.h>

#include "fermat_ws.h"

#define CHECK(cond)                                             \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                 \
    }                                                           \
  } while (0)

int main(void) {
  FwsCurve *curve = NULL;
  CHECK(fws_curve_new(7, 1, 3, &curve) == FWS_STATUS_INVALID_CURVE);
  CHECK(strstr(fws_last_error(), "does not divide") != NULL);
  CHECK(fws_curve_new(7, 1, 4, &curve) == FWS_STATUS_OK);
  CHECK(fws_curve_genus(curve) == 3);

  uint64_t census = 0;
  CHECK(fws_rational_place_count(curve, &census) == FWS_STATUS_OK);
  CHECK(census == 92);

  FwsPlaceList *list = NULL;
  CHECK(fws_place_list_new(curve, 1, &list) == FWS_STATUS_OK);
  fws_curve_free(curve);
  CHECK(fws_place_list_len(list) == 92);

  FwsPlaceInfo info;
  CHECK(fws_place_info(list, 0, &info) == FWS_STATUS_OK);
  CHECK(info.kind == FWS_PLACE_KIND_AXIS_X && info.index == 1 && info.degree == 1);

  uint64_t gaps[8];
  size_t len = 0;
  CHECK(fws_oracle_gaps(list, 0, 0, gaps, 8, &len) == FWS_STATUS_OK);
  CHECK(len == 3 && gaps[0] == 1 && gaps[1] == 2 && gaps[2] == 5);
  CHECK(fws_closed_form_gaps(list, 50, gaps, 1, &len) == FWS_STATUS_BUFFER_TOO_SMALL);
  CHECK(len == 3);
  CHECK(fws_closed_form_gaps(list, 50, gaps, 8, &len) == FWS_STATUS_OK);
  CHECK(gaps[0] == 1 && gaps[1] == 2 && gaps[2] == 3);
  CHECK(fws_place_info(list, 92, &info) == FWS_STATUS_INVALID_PLACE);

  fws_place_list_free(list);
  printf("ok\n");
  return 0;
}
