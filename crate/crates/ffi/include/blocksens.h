#ifndef BLOCKSENS_H
#define BLOCKSENS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BsStatus {
  BS_STATUS_OK = 0,
  BS_STATUS_INVALID_ARGUMENT = 1,
  BS_STATUS_CAPACITY = 2,
  BS_STATUS_PARSE = 3,
  BS_STATUS_NULL_POINTER = 4,
  BS_STATUS_INTERNAL = 5,
} BsStatus;

/**
 * CNF instance produced by the encoder.
 */
typedef struct BsCnfInstance BsCnfInstance;

/**
 * Truth table of a Boolean function.
 */
typedef struct BsTruthTable BsTruthTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *bs_last_error(void);

/**
 * Parse the textual form `"n=<n>\n<bits>"`, bits in canonical index order.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum BsStatus bs_table_from_text(const char *text, struct BsTruthTable **out);

/**
 * Build a table from `2^n` bytes, each 0 or 1, in canonical index order.
 *
 * # Safety
 * `bits` must point to `len` readable bytes; `out` must be writable.
 */
enum BsStatus bs_table_from_bits(uint32_t n,
                                 const uint8_t *bits,
                                 size_t len,
                                 struct BsTruthTable **out);

/**
 * # Safety
 * `table` must be null or a handle not yet freed.
 */
void bs_table_free(struct BsTruthTable *table);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum BsStatus bs_table_arity(const struct BsTruthTable *table, uint32_t *out);

/**
 * `f(x)` for canonical index `x` (bit `i-1` holds `x_i`).
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum BsStatus bs_table_eval(const struct BsTruthTable *table, uint64_t index, bool *out);

/**
 * `s(f)` and the smallest input attaining it.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum BsStatus bs_sensitivity(const struct BsTruthTable *table, uint32_t *value, uint64_t *witness);

/**
 * `bs(f)` and the smallest input attaining it.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum BsStatus bs_block_sensitivity(const struct BsTruthTable *table,
                                   uint32_t *value,
                                   uint64_t *witness);

/**
 * `bs(f, w)` for canonical index `w`.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum BsStatus bs_block_sensitivity_at(const struct BsTruthTable *table,
                                      uint64_t index,
                                      uint32_t *value);

/**
 * Odd-square family member for `k` (`n = (2k+1)^2`); only `k = 1` fits a table.
 *
 * # Safety
 * `out` must be writable.
 */
enum BsStatus bs_virza_table(uint32_t k, struct BsTruthTable **out);

/**
 * Even-square family member for `m` (`n = m^2`).
 *
 * # Safety
 * `out` must be writable.
 */
enum BsStatus bs_rubinstein_table(uint32_t m, struct BsTruthTable **out);

/**
 * Instance for `s(f) <= s` with `f` sensitive at `0^n` on the consecutive
 * blocks given by `parts` (non-increasing sizes summing to `n`). With
 * `parts_len == 0` only the sensitivity bound is encoded.
 *
 * # Safety
 * `parts` must point to `parts_len` readable values; `out` must be writable.
 */
enum BsStatus bs_instance_build(uint32_t n,
                                uint32_t s,
                                const uint32_t *parts,
                                size_t parts_len,
                                struct BsCnfInstance **out);

/**
 * # Safety
 * `instance` must be null or a handle not yet freed.
 */
void bs_instance_free(struct BsCnfInstance *instance);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum BsStatus bs_instance_var_count(const struct BsCnfInstance *instance, size_t *out);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum BsStatus bs_instance_clause_count(const struct BsCnfInstance *instance, size_t *out);

/**
 * DIMACS text of the instance; release it with [`bs_string_free`].
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum BsStatus bs_instance_dimacs(const struct BsCnfInstance *instance, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void bs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCKSENS_H */
