#ifndef LOCALORDER_H
#define LOCALORDER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LoStatus {
  LO_STATUS_OK = 0,
  LO_STATUS_NULL_POINTER = 1,
  LO_STATUS_INVALID_INPUT = 2,
  LO_STATUS_NOT_LOCAL_ORDER = 3,
  LO_STATUS_BUFFER_TOO_SMALL = 4,
  LO_STATUS_BOUND_EXCEEDED = 5,
  LO_STATUS_INTERNAL = 6,
} LoStatus;

/*
 Opaque tournament handle.
 */
typedef struct LoTournament LoTournament;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses the text format (vertex count, then one 0/1 row per vertex).

 # Safety
 `src` must be a valid C string and `out` a valid pointer.
 */
enum LoStatus lo_tournament_parse(const char *src, struct LoTournament **out);

/*
 The circular tournament on `2n + 1` vertices, `n >= 1`.

 # Safety
 `out` must be a valid pointer.
 */
enum LoStatus lo_tournament_circular(size_t n, struct LoTournament **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `t` must come from this library and not be used afterwards.
 */
void lo_tournament_free(struct LoTournament *t);

/*
 # Safety
 `t` must be a live handle and `out` a valid pointer.
 */
enum LoStatus lo_tournament_size(const struct LoTournament *t, size_t *out);

/*
 # Safety
 `t` must be a live handle and `out` a valid pointer.
 */
enum LoStatus lo_automorphism_count(const struct LoTournament *t, uint64_t *out);

/*
 Small Ramsey degree in the class of local orders.

 # Safety
 `t` must be a live handle and `out` a valid pointer.
 */
enum LoStatus lo_small_degree(const struct LoTournament *t, uint64_t *out);

/*
 Big Ramsey degree as a decimal string.

 # Safety
 `t` must be a live handle, `buf` writable for `len` bytes, and
 `written` null or valid.
 */
enum LoStatus lo_big_degree(const struct LoTournament *t, char *buf, size_t len, size_t *written);

/*
 `tan^(order)(0)` for odd `order`, as a decimal string.

 # Safety
 `buf` must be writable for `len` bytes and `written` null or valid.
 */
enum LoStatus lo_tangent_derivative(size_t order, char *buf, size_t len, size_t *written);

/*
 Number of Devlin types of the partitioned order `word` (digits `1..=n`).

 # Safety
 `word` must be a valid C string and `out` a valid pointer.
 */
enum LoStatus lo_devlin_count(const char *word, uint8_t n_parts, uint64_t *out);

/*
 Copies the message of the last failure on this thread into `buf`
 (truncated to fit) and returns its full length; `0` when there is none.

 # Safety
 `buf` must be null or writable for `len` bytes.
 */
size_t lo_last_error(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOCALORDER_H */
