#ifndef COVINS_H
#define COVINS_H

/* This file is generated by cbindgen from covins-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum CovinsStatus {
  // The call succeeded.
  COVINS_STATUS_OK = 0,
  // A required pointer argument was NULL.
  COVINS_STATUS_NULL_POINTER = 1,
  // An input string was not valid UTF-8.
  COVINS_STATUS_INVALID_UTF8 = 2,
  // The configuration failed to parse or validate.
  COVINS_STATUS_INVALID_CONFIG = 3,
  // The job ran but a module reported an error.
  COVINS_STATUS_EXECUTION_FAILED = 4,
} CovinsStatus;

// Opaque job report; inspect via `covins_report_*` and release with
// [`covins_report_free`].
typedef struct CovinsReport CovinsReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string; do not free.
const char *covins_version(void);

// Runs one job from a JSON configuration.
//
// On success writes a report handle into `out_report` and returns
// [`CovinsStatus::Ok`]. On failure leaves `out_report` untouched,
// records a message for [`covins_last_error_message`] and returns the
// matching status.
//
// # Safety
//
// `config_json` must point to a NUL-terminated string and `out_report`
// to writable memory for one pointer.
enum CovinsStatus covins_run_json(const char *config_json, struct CovinsReport **out_report);

// Whether every check of the report passed: 1 yes, 0 no, -1 on NULL.
//
// # Safety
//
// `report` must be NULL or a handle from [`covins_run_json`] that has
// not been freed.
int32_t covins_report_passed(const struct CovinsReport *report);

// Serializes the report as JSON; free with [`covins_string_free`].
// Returns NULL on NULL input.
//
// # Safety
//
// `report` must be NULL or a live handle from [`covins_run_json`].
char *covins_report_to_json(const struct CovinsReport *report);

// Releases a report handle. NULL is a no-op.
//
// # Safety
//
// `report` must be NULL or a handle from [`covins_run_json`], freed at
// most once.
void covins_report_free(struct CovinsReport *report);

// Releases a string returned by this library. NULL is a no-op.
//
// # Safety
//
// `s` must be NULL or a pointer produced by this library's string
// returning functions, freed at most once.
void covins_string_free(char *s);

// The most recent error message on this thread, or NULL when the last
// call succeeded; free with [`covins_string_free`].
char *covins_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVINS_H */
