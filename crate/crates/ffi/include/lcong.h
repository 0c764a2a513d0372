#ifndef LCONG_H
#define LCONG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum LcongStatus {
  LCONG_STATUS_OK = 0,
  LCONG_STATUS_NULL_POINTER = 1,
  LCONG_STATUS_INVALID_ARGUMENT = 2,
  // The arguments lie outside the hypotheses of the computation.
  LCONG_STATUS_DOMAIN = 3,
  // The requested value is not defined (for example `𝓛` for a trivial character).
  LCONG_STATUS_UNDEFINED = 4,
  // The congruence check ran and at least one verdict failed.
  LCONG_STATUS_CONGRUENCE_FAILS = 5,
  LCONG_STATUS_INTERNAL = 6,
} LcongStatus;

// A Dirichlet character of prime-power modulus.
typedef struct LcongCharacter LcongCharacter;

// An element of a cyclotomic field, stored exactly.
typedef struct LcongValue LcongValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or null if there was
// none. Release it with [`lcong_string_free`].
char *lcong_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void lcong_string_free(char *s);

// The character mod `p^m` with the given generator exponents.
//
// # Safety
// `exponents` must point to `len` readable values (or be null when `len` is 0)
// and `out` must be writable.
enum LcongStatus lcong_character_new(uint64_t p,
                                     uint32_t m,
                                     const uint64_t *exponents,
                                     size_t len,
                                     struct LcongCharacter **out);

// Parses a character key such as `"2^3:0,1"`.
//
// # Safety
// `key` must be a NUL-terminated string and `out` writable.
enum LcongStatus lcong_character_parse(const char *key, struct LcongCharacter **out);

// # Safety
// `chi` must be null or a handle from this library, not yet freed.
void lcong_character_free(struct LcongCharacter *chi);

// The key `"p^m:e1,e2"` of `chi`.
//
// # Safety
// `chi` must be a live handle and `out` writable.
enum LcongStatus lcong_character_key(const struct LcongCharacter *chi, char **out);

// Conductor of `chi`, or 0 for a null handle.
//
// # Safety
// `chi` must be null or a live handle.
uint64_t lcong_character_conductor(const struct LcongCharacter *chi);

// 1 if `chi` is odd, 0 if even, -1 for a null handle.
//
// # Safety
// `chi` must be null or a live handle.
int32_t lcong_character_is_odd(const struct LcongCharacter *chi);

// `B_k` as `"num/den"` (or an integer).
//
// # Safety
// `out` must be writable.
enum LcongStatus lcong_bernoulli(uint64_t k, char **out);

// The Euler number `E_k` in decimal.
//
// # Safety
// `out` must be writable.
enum LcongStatus lcong_euler(uint64_t k, char **out);

// `B_{k,χ}`.
//
// # Safety
// `chi` must be a live handle and `out` writable.
enum LcongStatus lcong_generalized_bernoulli(const struct LcongCharacter *chi,
                                             uint64_t k,
                                             struct LcongValue **out);

// `L(-k, χ)`.
//
// # Safety
// `chi` must be a live handle and `out` writable.
enum LcongStatus lcong_l_value(const struct LcongCharacter *chi,
                               uint64_t k,
                               struct LcongValue **out);

// The normalized value `𝓛_{k,χ}`; [`LcongStatus::Undefined`] where it is not defined.
//
// # Safety
// `chi` must be a live handle and `out` writable.
enum LcongStatus lcong_script_l(const struct LcongCharacter *chi,
                                uint64_t k,
                                struct LcongValue **out);

// # Safety
// `v` must be null or a handle from this library, not yet freed.
void lcong_value_free(struct LcongValue *v);

// Human-readable form, e.g. `"22"` or `"1/2 + 3/2*z4"` (`z4` a primitive 4th root of unity).
//
// # Safety
// `v` must be a live handle and `out` writable.
enum LcongStatus lcong_value_to_string(const struct LcongValue *v, char **out);

// `{"order": N, "coeffs": ["num/den", ...]}` in the power basis of `Q(ζ_N)`.
//
// # Safety
// `v` must be a live handle and `out` writable.
enum LcongStatus lcong_value_to_json(const struct LcongValue *v, char **out);

// p-content valuation of `v`. Zero has infinite valuation: `*is_infinite`
// is set to 1 and `*valuation` to 0.
//
// # Safety
// `v` must be a live handle; `valuation` and `is_infinite` writable.
enum LcongStatus lcong_value_valuation(const struct LcongValue *v,
                                       uint64_t p,
                                       int64_t *valuation,
                                       int32_t *is_infinite);

// Runs one job given as JSON, e.g.
// `{"id": "1.4", "chi": ["2^3:0,1"], "k": 1, "n": 1, "q": 1}`, with the same
// keys and value syntax as a sweep config job. Writes the report as JSON
// lines (config, verdicts, skips, summary) to `out`.
//
// Returns [`LcongStatus::Ok`] when every in-hypothesis verdict holds and
// [`LcongStatus::CongruenceFails`] otherwise; `out` is written in both cases.
//
// # Safety
// `job_json` must be a NUL-terminated string and `out` writable.
enum LcongStatus lcong_verify_json(const char *job_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LCONG_H */
