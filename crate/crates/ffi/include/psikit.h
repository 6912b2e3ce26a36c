#ifndef PSIKIT_H
#define PSIKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PsikitStatus {
  PSIKIT_STATUS_OK = 0,
  PSIKIT_STATUS_NULL_ARGUMENT = 1,
  PSIKIT_STATUS_INVALID_UTF8 = 2,
  PSIKIT_STATUS_SYNTAX = 3,
  PSIKIT_STATUS_UNKNOWN_NAME = 4,
  /**
   * A script or input error other than syntax.
   */
  PSIKIT_STATUS_INVALID = 5,
  PSIKIT_STATUS_UNSUPPORTED = 6,
  PSIKIT_STATUS_LIMIT = 7,
  PSIKIT_STATUS_PANIC = 8,
} PsikitStatus;

typedef enum PsikitVerdict {
  PSIKIT_VERDICT_NO = 0,
  PSIKIT_VERDICT_YES = 1,
  PSIKIT_VERDICT_UNKNOWN = 2,
} PsikitVerdict;

/**
 * A parsed script.
 */
typedef struct PsikitScript PsikitScript;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `source`; on success `*out` receives a handle to free with
 * `psikit_script_free`.
 *
 * # Safety
 * `source` must be a nul-terminated string and `out` a valid pointer.
 */
enum PsikitStatus psikit_script_parse(const char *source, struct PsikitScript **out);

/**
 * Number of statements in a parsed script, or -1 for a null handle.
 *
 * # Safety
 * `script` must be null or a live handle.
 */
int64_t psikit_script_len(const struct PsikitScript *script);

/**
 * Runs every command. `*report` receives the reports, one JSON object per
 * line when `json` is nonzero; `*exit_code_out` receives the command-line
 * exit code. A `bound` of 0 selects the default prime search bound.
 *
 * # Safety
 * `script` must be a live handle; `report` and `exit_code_out` valid pointers.
 */
enum PsikitStatus psikit_script_run(const struct PsikitScript *script,
                                    uint64_t bound,
                                    int32_t json,
                                    char **report,
                                    int32_t *exit_code_out);

/**
 * Frees a handle from `psikit_script_parse`. Null is ignored.
 *
 * # Safety
 * `script` must be null or a handle not yet freed.
 */
void psikit_script_free(struct PsikitScript *script);

/**
 * PSI for the order `ℤ[√d] → ℤ[(1 + √d)/2]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PsikitStatus psikit_quadratic_psi(int64_t d, enum PsikitVerdict *out);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void psikit_string_free(char *s);

/**
 * The message of the last failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *psikit_last_error_message(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PSIKIT_H */
