#ifndef PAULICOMPAT_H
#define PAULICOMPAT_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every function.
typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_NULL_POINTER = 1,
  PC_STATUS_INVALID_UTF8 = 2,
  PC_STATUS_PARSE = 3,
  PC_STATUS_DIMENSION_MISMATCH = 4,
  PC_STATUS_CAPACITY = 5,
  PC_STATUS_INVALID_ARGUMENT = 6,
  PC_STATUS_INCOMPATIBLE = 7,
  PC_STATUS_BUFFER_TOO_SMALL = 8,
  PC_STATUS_PANIC = 9,
} PcStatus;

// Bracket selector for [`pc_pauli_unique_term`].
typedef enum PcBracket {
  PC_BRACKET_COMMUTATOR = 0,
  PC_BRACKET_ANTICOMMUTATOR = 1,
} PcBracket;

// Opaque Pauli string with its phase.
typedef struct PcPauliString PcPauliString;

// Opaque state vector.
typedef struct PcStateVector PcStateVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next call on the same thread.
const char *pc_last_error(void);

// Library version, statically allocated.
const char *pc_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void pc_string_free(char *s);

// Parses text such as `"-iXYZ"` or `"0123"`.
//
// # Safety
// `text` must be a NUL-terminated string; `result` must be writable.
enum PcStatus pc_pauli_parse(const char *text, struct PcPauliString **result);

// Builds a phase-free string from indices 0..=3.
//
// # Safety
// `indices` must point to `len` bytes; `result` must be writable.
enum PcStatus pc_pauli_from_indices(const uint8_t *indices,
                                    size_t len,
                                    struct PcPauliString **result);

// # Safety
// `p` must come from this library and not be freed twice. Null is ignored.
void pc_pauli_free(struct PcPauliString *p);

// Number of sites.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_pauli_len(const struct PcPauliString *p, size_t *len);

// Phase as an exponent of i, in 0..=3.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_pauli_phase(const struct PcPauliString *p, uint8_t *exponent);

// Canonical text, e.g. `"+iXZ"`. Free with [`pc_string_free`].
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_pauli_to_string(const struct PcPauliString *p, char **text);

// Operator product `a * b`.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_pauli_multiply(const struct PcPauliString *a,
                                const struct PcPauliString *b,
                                struct PcPauliString **result);

// Whether `a` and `b` commute as operators.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_pauli_commutes(const struct PcPauliString *a,
                                const struct PcPauliString *b,
                                bool *commutes);

// Writes the 1-based sites where `a` and `b` anticommute locally into
// `sites` (capacity `cap`) and their number into `count`. If `cap` is too
// small, `count` still receives the full number and
// `PC_STATUS_BUFFER_TOO_SMALL` is returned.
//
// # Safety
// `sites` must have room for `cap` values; other pointers must be valid.
enum PcStatus pc_pauli_noncommuting_sites(const struct PcPauliString *a,
                                          const struct PcPauliString *b,
                                          size_t *sites,
                                          size_t cap,
                                          size_t *count);

// Compatibility report as JSON. Free with [`pc_string_free`].
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_classify_json(const struct PcPauliString *a,
                               const struct PcPauliString *b,
                               char **json);

// The single nonzero term of the bracket expansions of `a` and `b`: which
// bracket it belongs to and its value `2^log2_scale * value`.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_pauli_unique_term(const struct PcPauliString *a,
                                   const struct PcPauliString *b,
                                   enum PcBracket *bracket,
                                   int32_t *log2_scale,
                                   struct PcPauliString **value);

// Exhaustive check that fully nontrivial n-qubit pairs commute exactly when
// their number of local anticommutations is even. `verified` is false when
// a counterexample exists.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_verify_theorem1(size_t n, bool parallel, bool *verified, uint64_t *pairs_checked);

// Sign-paradox certificate as JSON for `count` observables given as text.
// Groups hold 1-based indices; passing null for both compares the first
// observable against the product of the rest.
//
// # Safety
// `observables` must hold `count` strings; each group must hold its length
// in indices or be null.
enum PcStatus pc_paradox_json(const char *const *observables,
                              size_t count,
                              const size_t *group_a,
                              size_t len_a,
                              const size_t *group_b,
                              size_t len_b,
                              char **json);

// Builds a named state (`"psi1"`..`"psi4"`, `"phi1"`..`"phi3"`) on `n` qubits.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_state_named(const char *name, size_t n, struct PcStateVector **result);

// # Safety
// `s` must come from this library and not be freed twice. Null is ignored.
void pc_state_free(struct PcStateVector *s);

// Number of qubits.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_state_qubits(const struct PcStateVector *s, size_t *n);

// Copies the 2^n amplitudes into `re` and `im`, each of capacity `cap`.
//
// # Safety
// `re` and `im` must have room for `cap` doubles.
enum PcStatus pc_state_amplitudes(const struct PcStateVector *s,
                                  double *re,
                                  double *im,
                                  size_t cap);

// Tests whether `s` is an eigenvector of `p`; if so writes the eigenvalue.
//
// # Safety
// Pointers must be valid.
enum PcStatus pc_eigenvalue(const struct PcPauliString *p,
                            const struct PcStateVector *s,
                            bool *is_eigenvector,
                            double *re,
                            double *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAULICOMPAT_H */
