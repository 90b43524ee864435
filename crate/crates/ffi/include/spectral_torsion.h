#ifndef SPECTRAL_TORSION_H
#define SPECTRAL_TORSION_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum st_status {
  ST_STATUS_OK = 0,
  ST_STATUS_NULL_POINTER = 1,
  ST_STATUS_INVALID_UTF8 = 2,
  ST_STATUS_IO = 3,
  ST_STATUS_PARSE = 4,
  ST_STATUS_INVALID_SCENARIO = 5,
  ST_STATUS_USAGE = 6,
  ST_STATUS_COMPUTATION = 7,
  ST_STATUS_PANIC = 8,
} st_status;

/**
 * The result of running one scenario.
 */
typedef struct st_report st_report;

/**
 * A parsed and validated scenario.
 */
typedef struct st_scenario st_scenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *st_last_error(void);

/**
 * Library version as a static string.
 */
const char *st_version(void);

/**
 * Parses and validates a scenario document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum st_status st_scenario_from_json(const char *json, struct st_scenario **out);

/**
 * Reads, parses and validates a scenario file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum st_status st_scenario_from_file(const char *path, struct st_scenario **out);

/**
 * Half the dimension of the scenario, or 0 for a null handle.
 *
 * # Safety
 * `scenario` must be null or a live handle.
 */
uint32_t st_scenario_m(const struct st_scenario *scenario);

/**
 * # Safety
 * `scenario` must be null or a handle not yet freed.
 */
void st_scenario_free(struct st_scenario *scenario);

/**
 * Computes every density term and comparison for `scenario`. `tolerance`
 * applies to float-mode scenarios.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be valid for writes.
 */
enum st_status st_run_report(const struct st_scenario *scenario,
                             double tolerance,
                             struct st_report **out);

/**
 * 1 when every comparison passed, 0 when one failed, -1 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int st_report_pass(const struct st_report *report);

/**
 * Number of comparisons in the report, 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t st_report_diff_count(const struct st_report *report);

/**
 * Name and verdict of comparison `index`. The name is a new string.
 *
 * # Safety
 * `report` must be a live handle; `name` and `pass` must be valid for writes.
 */
enum st_status st_report_diff(const struct st_report *report, size_t index, char **name, int *pass);

/**
 * The full report as pretty-printed JSON.
 *
 * # Safety
 * `report` must be a live handle; `out` must be valid for writes.
 */
enum st_status st_report_to_json(const struct st_report *report, char **out);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void st_report_free(struct st_report *report);

/**
 * Random-scenario sweep. `float_mode` selects float arithmetic when
 * nonzero. Writes the summary JSON to `out` and 1 or 0 to `pass`.
 *
 * # Safety
 * `out` and `pass` must be valid for writes.
 */
enum st_status st_verify_sweep(uint32_t m,
                               uint32_t trials,
                               uint64_t seed,
                               int float_mode,
                               double tolerance,
                               char **out,
                               int *pass);

/**
 * One targeted verification by name (`laplacian`, `square`, `inverse`,
 * `trace`, `contraction`, `sphere`, `gamma`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` and `pass` must be valid
 * for writes.
 */
enum st_status st_lemma_check(const char *name, uint64_t seed, char **out, int *pass);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void st_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_TORSION_H */
