/* C bindings for the qneuron quantum binary-neuron toolkit. */

#ifndef QNEURON_H
#define QNEURON_H

/* Generated by cbindgen from the qneuron-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every API call.
 */
typedef enum QnStatus {
  QN_STATUS_OK = 0,
  QN_STATUS_NULL_POINTER = 1,
  QN_STATUS_INVALID_ARGUMENT = 2,
  QN_STATUS_DIMENSION_MISMATCH = 3,
  QN_STATUS_DOMAIN_ERROR = 4,
  QN_STATUS_INDEX_ERROR = 5,
  QN_STATUS_CONFIG_ERROR = 6,
  QN_STATUS_PARSE_ERROR = 7,
  QN_STATUS_BUFFER_TOO_SMALL = 8,
  QN_STATUS_INVALID_UTF8 = 9,
  QN_STATUS_INTERNAL_ERROR = 10,
} QnStatus;

/**
 * Training scheme selector.
 */
typedef enum QnMode {
  QN_MODE_GLOBAL = 0,
  QN_MODE_LOCAL = 1,
} QnMode;

/**
 * Entangling cycle selector.
 */
typedef enum QnEntangler {
  QN_ENTANGLER_ALL_TO_ALL = 0,
  QN_ENTANGLER_NEAREST_NEIGHBOUR = 1,
} QnEntangler;

/**
 * Optimizer selector.
 */
typedef enum QnOptimizer {
  QN_OPTIMIZER_NELDER_MEAD = 0,
  QN_OPTIMIZER_SPSA = 1,
} QnOptimizer;

/**
 * Opaque handle to a ±1 pattern.
 */
typedef struct QnPattern QnPattern;

/**
 * Opaque handle to a finished training run.
 */
typedef struct QnTrainingResult QnTrainingResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static NUL-terminated string.
 */
const char *qn_version(void);

/**
 * Creates a pattern of length `m` from its integer label.
 *
 * # Safety
 * `out` must be a valid pointer to a `QnPattern*`.
 */
enum QnStatus qn_pattern_from_label(uint64_t label, uintptr_t m, struct QnPattern **out);

/**
 * Parses a pattern from a NUL-terminated string: `k:<int>` or a ±-string of
 * length `m`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum QnStatus qn_pattern_parse(const char *text, uintptr_t m, struct QnPattern **out);

/**
 * Number of entries of the pattern.
 *
 * # Safety
 * `pattern` must be a live handle and `out` a valid pointer.
 */
enum QnStatus qn_pattern_len(const struct QnPattern *pattern, uintptr_t *out);

/**
 * Integer label of the pattern.
 *
 * # Safety
 * `pattern` must be a live handle and `out` a valid pointer.
 */
enum QnStatus qn_pattern_label(const struct QnPattern *pattern, uint64_t *out);

/**
 * Copies the ±1 entries into `buf` (capacity `buf_len` entries).
 *
 * # Safety
 * `buf` must point to at least `buf_len` writable bytes.
 */
enum QnStatus qn_pattern_entries(const struct QnPattern *pattern, int8_t *buf, uintptr_t buf_len);

/**
 * Releases a pattern handle; accepts null.
 *
 * # Safety
 * `pattern` must have come from this library and not be freed twice.
 */
void qn_pattern_free(struct QnPattern *pattern);

/**
 * Copies the real amplitudes of the encoded pattern state (entry_j / √m)
 * into `buf` (capacity `buf_len` doubles).
 *
 * # Safety
 * `buf` must point to at least `buf_len` writable doubles.
 */
enum QnStatus qn_encode_amplitudes(const struct QnPattern *pattern, double *buf, uintptr_t buf_len);

/**
 * Exact activation probability (i⃗·w⃗ / m)².
 *
 * # Safety
 * Both handles must be live and `out` a valid pointer.
 */
enum QnStatus qn_classical_activation(const struct QnPattern *input,
                                      const struct QnPattern *weights,
                                      double *out);

/**
 * Activation probability through the exact hypergraph circuit.
 *
 * # Safety
 * Both handles must be live and `out` a valid pointer.
 */
enum QnStatus qn_exact_activation(const struct QnPattern *input,
                                  const struct QnPattern *weights,
                                  double *out);

/**
 * Activation estimated from `shots` seeded measurements of the ancilla
 * synapse.
 *
 * # Safety
 * Both handles must be live and `out` a valid pointer.
 */
enum QnStatus qn_ancilla_activation(const struct QnPattern *input,
                                    const struct QnPattern *weights,
                                    uint64_t shots,
                                    uint64_t seed,
                                    double *out);

/**
 * Depth of the exact weight unitary, optionally after decomposing every
 * multi-controlled gate into CNOTs and single-qubit rotations.
 *
 * # Safety
 * `weights` must be a live handle and `out` a valid pointer.
 */
enum QnStatus qn_exact_uw_depth(const struct QnPattern *weights, bool decomposed, uintptr_t *out);

/**
 * Trains a variational weight unitary and returns the best of `restarts`
 * runs. `cycles` configures the global mode; `structure` (e.g. "321") the
 * local mode and may be null otherwise. `shots` = 0 selects the exact cost
 * estimator. `max_iter` = 0 keeps the optimizer default.
 *
 * # Safety
 * `weights` must be a live handle, `structure` null or NUL-terminated, and
 * `out` a valid pointer.
 */
enum QnStatus qn_train(const struct QnPattern *weights,
                       enum QnMode mode,
                       enum QnEntangler entangler,
                       uintptr_t cycles,
                       const char *structure,
                       enum QnOptimizer optimizer,
                       uint64_t shots,
                       uintptr_t max_iter,
                       uint64_t seed,
                       uintptr_t restarts,
                       struct QnTrainingResult **out);

/**
 * Exact fidelity of the trained circuit.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid pointer.
 */
enum QnStatus qn_result_fidelity(const struct QnTrainingResult *result, double *out);

/**
 * Total optimizer iterations of the run.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid pointer.
 */
enum QnStatus qn_result_iterations(const struct QnTrainingResult *result, uintptr_t *out);

/**
 * Whether the optimizer met its convergence test within the budget.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid pointer.
 */
enum QnStatus qn_result_converged(const struct QnTrainingResult *result, bool *out);

/**
 * Length of the per-iteration cost trace.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid pointer.
 */
enum QnStatus qn_result_trace_len(const struct QnTrainingResult *result, uintptr_t *out);

/**
 * Copies the cost trace into `buf` (capacity `buf_len` doubles).
 *
 * # Safety
 * `buf` must point to at least `buf_len` writable doubles.
 */
enum QnStatus qn_result_trace(const struct QnTrainingResult *result,
                              double *buf,
                              uintptr_t buf_len);

/**
 * Releases a training-result handle; accepts null.
 *
 * # Safety
 * `result` must have come from this library and not be freed twice.
 */
void qn_result_free(struct QnTrainingResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QNEURON_H */
