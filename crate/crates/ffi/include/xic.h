#ifndef XIC_H
#define XIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum XicStatus {
  XIC_STATUS_OK = 0,
  XIC_STATUS_NULL_ARGUMENT = 1,
  XIC_STATUS_INVALID_UTF8 = 2,
  XIC_STATUS_UNKNOWN_FUNCTION = 3,
  XIC_STATUS_INVALID_POINT = 4,
  XIC_STATUS_INVALID_POLYNOMIAL = 5,
  XIC_STATUS_UNKNOWN_CANDIDATE = 6,
  /**
   * A machine faulted or produced a malformed answer.
   */
  XIC_STATUS_FAULT = 7,
  /**
   * The candidate ran over its budget.
   */
  XIC_STATUS_BUDGET = 8,
  /**
   * An enumeration would exceed its cap.
   */
  XIC_STATUS_CAP = 9,
  /**
   * No usable `N` or clean region exists for the construction.
   */
  XIC_STATUS_NO_MARGIN = 10,
  XIC_STATUS_PANIC = 11,
} XicStatus;

typedef enum XicConstruction {
  XIC_CONSTRUCTION_MODULUS = 0,
  XIC_CONSTRUCTION_COMPOSITION = 1,
  XIC_CONSTRUCTION_LENGTH = 2,
  XIC_CONSTRUCTION_MIRROR = 3,
} XicConstruction;

/**
 * A function from the catalog together with its name.
 */
typedef struct XicFunction XicFunction;

/**
 * Outcome of an adversary run.
 */
typedef struct XicReport XicReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call on the same thread; do not free.
 */
const char *xic_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void xic_string_free(char *s);

/**
 * Looks up a catalog id (`zero`, `sawtooth`, `tent`, `pwl:<path>`,
 * `bump:<c>,<h>,<s>`, ...).
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` a valid pointer.
 */
enum XicStatus xic_function_new(const char *id, struct XicFunction **out);

/**
 * # Safety
 * `f` must be null or a handle from [`xic_function_new`], not yet freed.
 */
void xic_function_free(struct XicFunction *f);

/**
 * Evaluates `f(x)` to within `2^-n`. `x` is a dyadic word such as `00#11`
 * or an exact decimal in `[0,1]`. On success `*word` receives the answer as
 * a dyadic word and `*iterations`, if not null, the number of loop rounds.
 *
 * # Safety
 * `f` must be a live handle, `x` a NUL-terminated string, `word` a valid
 * pointer and `iterations` null or valid.
 */
enum XicStatus xic_function_eval(const struct XicFunction *f,
                                 const char *x,
                                 uint64_t n,
                                 bool suggested_schedule,
                                 char **word,
                                 uint64_t *iterations);

/**
 * Checks the function's name for precisions up to `n_max`. `*clean` is
 * set when no violation was found; `*violations`, if not null, receives the
 * number found.
 *
 * # Safety
 * `f` must be a live handle, `clean` valid and `violations` null or valid.
 */
enum XicStatus xic_function_validate(const struct XicFunction *f,
                                     uint64_t n_max,
                                     bool *clean,
                                     size_t *violations);

/**
 * Runs a fooling construction against a built-in candidate. `p` is the
 * budget polynomial in `x`; null selects the default (`x*x`, or `2*x+2` for
 * the length construction). `param` is `N` for the length construction and
 * the lookahead `C` for the mirror demo; it is ignored otherwise.
 *
 * # Safety
 * `candidate` must be a NUL-terminated string, `p` null or one, and `out`
 * a valid pointer.
 */
enum XicStatus xic_adversary_run(enum XicConstruction construction,
                                 const char *candidate,
                                 const char *p,
                                 uint64_t param,
                                 struct XicReport **out);

/**
 * Whether the run exhibited identical views together with a contradiction.
 * A null handle yields false.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
bool xic_report_fooled(const struct XicReport *r);

/**
 * The `N` the construction worked at.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
uint64_t xic_report_n(const struct XicReport *r);

/**
 * Plain-text rendering of the report; free with [`xic_string_free`].
 * Returns null for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
char *xic_report_text(const struct XicReport *r);

/**
 * # Safety
 * `r` must be null or a handle from [`xic_adversary_run`], not yet freed.
 */
void xic_report_free(struct XicReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XIC_H */
