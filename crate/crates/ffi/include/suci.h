#ifndef SUCI_FFI_H
#define SUCI_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SuciScheme {
  SUCI_SCHEME_NULL = 0,
  SUCI_SCHEME_PROFILE_A = 1,
  SUCI_SCHEME_PROFILE_B = 2,
} SuciScheme;

typedef enum SuciStatus {
  SUCI_STATUS_OK = 0,
  SUCI_STATUS_NULL_POINTER = 1,
  SUCI_STATUS_INVALID_UTF8 = 2,
  SUCI_STATUS_INVALID_ARGUMENT = 3,
  SUCI_STATUS_INVALID_SUPI = 4,
  SUCI_STATUS_INVALID_SUCI = 5,
  SUCI_STATUS_INVALID_KEY = 6,
  SUCI_STATUS_INTEGRITY_FAILURE = 7,
  SUCI_STATUS_UNKNOWN_KEY_ID = 8,
  SUCI_STATUS_SCENARIO = 9,
  SUCI_STATUS_IO = 10,
  SUCI_STATUS_INTERNAL = 99,
} SuciStatus;

/**
 * Opaque home-network key pair.
 */
typedef struct SuciKeyPair SuciKeyPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Generates a fresh key pair for `scheme` (ProfileA or ProfileB).
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum SuciStatus suci_keypair_generate(enum SuciScheme scheme, struct SuciKeyPair **out);

/**
 * Builds a key pair from a 32-octet private key given as hex.
 *
 * # Safety
 * `private_hex` must be a NUL-terminated string; `out` valid for writing.
 */
enum SuciStatus suci_keypair_from_private_hex(enum SuciScheme scheme,
                                              const char *private_hex,
                                              struct SuciKeyPair **out);

/**
 * Writes the public key as lowercase hex.
 *
 * # Safety
 * `keypair` must come from this library; `out` valid for writing.
 */
enum SuciStatus suci_keypair_public_hex(const struct SuciKeyPair *keypair, char **out);

/**
 * # Safety
 * `keypair` must come from this library and not be used afterwards. Null is ignored.
 */
void suci_keypair_free(struct SuciKeyPair *keypair);

/**
 * Conceals `supi` ("<mcc><mnc>-<msin>") and writes the SUCI text.
 *
 * `home_public_hex` is required for the ECIES schemes and ignored for
 * `Null`. `routing_indicator` may be null for the default "0000".
 *
 * # Safety
 * String arguments must be NUL-terminated or null where allowed; `out` valid for writing.
 */
enum SuciStatus suci_conceal(const char *supi,
                             enum SuciScheme scheme,
                             const char *home_public_hex,
                             uint8_t key_id,
                             const char *routing_indicator,
                             char **out);

/**
 * Recovers the SUPI text from `suci`. `keypair` is installed under `key_id`
 * and may be null for null-scheme SUCIs.
 *
 * # Safety
 * `suci` must be NUL-terminated; `keypair` null or from this library; `out` valid for writing.
 */
enum SuciStatus suci_deconceal(const char *suci,
                               const struct SuciKeyPair *keypair,
                               uint8_t key_id,
                               char **out);

/**
 * Runs a scenario file, optionally writing the JSONL trace, and returns the summary text.
 *
 * # Safety
 * `scenario_path` must be NUL-terminated; `trace_out_path` NUL-terminated or null;
 * `summary_out` valid for writing.
 */
enum SuciStatus suci_sim_run(const char *scenario_path,
                             const char *trace_out_path,
                             char **summary_out);

/**
 * # Safety
 * `s` must be a string returned by this library and not used afterwards. Null is ignored.
 */
void suci_string_free(char *s);

/**
 * Message for the last failed call on this thread, or "" after a success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *suci_last_error_message(void);

/**
 * Library version; a static string that must not be freed.
 */
const char *suci_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUCI_FFI_H */
