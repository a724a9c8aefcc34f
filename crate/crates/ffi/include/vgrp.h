#ifndef VGRP_H
#define VGRP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The first four match the command-line exit codes.
 */
typedef enum VgrpStatus {
  VGRP_STATUS_OK = 0,
  VGRP_STATUS_THEOREM_CHECK = 1,
  VGRP_STATUS_INPUT = 2,
  VGRP_STATUS_CAPACITY = 3,
  VGRP_STATUS_NULL_POINTER = 4,
  VGRP_STATUS_PANIC = 5,
} VgrpStatus;

/**
 * Builtin quantale families.
 */
typedef enum VgrpQuantaleKind {
  VGRP_QUANTALE_KIND_BOOLEAN = 0,
  VGRP_QUANTALE_KIND_LAWVERE_CHAIN = 1,
  VGRP_QUANTALE_KIND_ULTRAMETRIC_CHAIN = 2,
} VgrpQuantaleKind;

typedef struct VgrpHom VgrpHom;

typedef struct VgrpObject VgrpObject;

typedef struct VgrpQuantale VgrpQuantale;

typedef struct VgrpObjectClass {
  bool indiscrete;
  bool separated;
  bool symmetric;
  bool discrete;
} VgrpObjectClass;

typedef struct VgrpMorphismClass {
  bool in_e;
  bool in_m;
  bool in_e_prime;
  bool in_m_star;
  bool covering;
} VgrpMorphismClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The last error message on this thread, or null. Owned by the library.
 */
const char *vgrp_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void vgrp_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum VgrpStatus vgrp_quantale_builtin(enum VgrpQuantaleKind kind,
                                      uint16_t m,
                                      struct VgrpQuantale **out_q);

/**
 * # Safety
 * `q` must come from this library and not have been freed.
 */
void vgrp_quantale_free(struct VgrpQuantale *q);

/**
 * Number of elements; labels are `0..size` in the builtin order.
 *
 * # Safety
 * Pointers must be valid.
 */
enum VgrpStatus vgrp_quantale_size(const struct VgrpQuantale *q, size_t *out_size);

/**
 * The object on the cyclic group of order `n` with `a(x, y) = delta[y - x]`.
 *
 * # Safety
 * `delta` must point to `n` readable elements; `out_obj` must be writable.
 */
enum VgrpStatus vgrp_object_cyclic(const struct VgrpQuantale *q,
                                   size_t n,
                                   const uint16_t *delta,
                                   struct VgrpObject **out_obj);

/**
 * Loads a workbench document. Relative morphism targets resolve against
 * the working directory.
 *
 * # Safety
 * `json` must be a nul-terminated UTF-8 string.
 */
enum VgrpStatus vgrp_object_from_document(const char *json, struct VgrpObject **out_obj);

/**
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void vgrp_object_free(struct VgrpObject *g);

/**
 * # Safety
 * Pointers must be valid.
 */
enum VgrpStatus vgrp_object_size(const struct VgrpObject *g, size_t *out_size);

/**
 * # Safety
 * Pointers must be valid.
 */
enum VgrpStatus vgrp_object_classify(const struct VgrpObject *g, struct VgrpObjectClass *out_class);

/**
 * Writes `N_X` into `buf` (sorted) and its length into `out_len`. When
 * `cap` is too small nothing is written to `buf` and the status is
 * `Input`; `out_len` still receives the required length.
 *
 * # Safety
 * `buf` must have room for `cap` elements.
 */
enum VgrpStatus vgrp_object_torsion_part(const struct VgrpObject *g,
                                         size_t *buf,
                                         size_t cap,
                                         size_t *out_len);

/**
 * A validated morphism. `map` has one entry per element of `dom`.
 *
 * # Safety
 * `map` must point to `len` readable elements.
 */
enum VgrpStatus vgrp_hom_new(const struct VgrpObject *dom,
                             const struct VgrpObject *cod,
                             const size_t *map,
                             size_t len,
                             struct VgrpHom **out_hom);

/**
 * # Safety
 * `f` must come from this library and not have been freed.
 */
void vgrp_hom_free(struct VgrpHom *f);

/**
 * # Safety
 * Pointers must be valid.
 */
enum VgrpStatus vgrp_hom_is_covering(const struct VgrpHom *f, bool *out_covering);

/**
 * # Safety
 * Pointers must be valid.
 */
enum VgrpStatus vgrp_hom_classify(const struct VgrpHom *f, struct VgrpMorphismClass *out_class);

/**
 * Runs the command line in-process. `args_json` is a JSON array of
 * argument strings without the program name. The command's standard
 * output is returned in `out_stdout` (free with [`vgrp_string_free`]) and
 * its exit code in `out_exit`. The status reflects the call itself, not
 * the exit code.
 *
 * # Safety
 * `args_json` must be a nul-terminated UTF-8 string; outputs writable.
 */
enum VgrpStatus vgrp_run_json(const char *args_json, char **out_stdout, int32_t *out_exit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VGRP_H */
