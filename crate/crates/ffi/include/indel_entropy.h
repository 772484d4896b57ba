/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef INDEL_ENTROPY_H
#define INDEL_ENTROPY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IeStatus {
  IE_STATUS_OK = 0,
  IE_STATUS_NULL_POINTER = 1,
  IE_STATUS_INVALID_ARGUMENT = 2,
  IE_STATUS_OVERFLOW = 3,
  IE_STATUS_NOT_CHARACTERIZED = 4,
  IE_STATUS_BUDGET_EXCEEDED = 5,
  IE_STATUS_INVALID_UTF8 = 6,
  IE_STATUS_OUT_OF_RANGE = 7,
  IE_STATUS_PANIC = 8,
} IeStatus;

typedef enum IeChannelKind {
  IE_CHANNEL_KIND_DELETION = 0,
  IE_CHANNEL_KIND_INSERTION = 1,
} IeChannelKind;

typedef enum IeMethod {
  IE_METHOD_CLOSED_FORM = 0,
  IE_METHOD_ENUMERATION = 1,
} IeMethod;

typedef enum IeWhich {
  IE_WHICH_MIN = 0,
  IE_WHICH_MAX = 1,
} IeWhich;

// Opaque weighted ball: members in lexicographic order with their counts.
typedef struct IeBall IeBall;

// Opaque word handle.
typedef struct IeWord IeWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *ie_last_error_message(void);

// Static name of a status code.
const char *ie_status_name(enum IeStatus status);

// Parses a digit string (or comma-separated symbols) over an alphabet of
// size `q`. On success `*out` owns a new handle.
//
// # Safety
// `text` must be NUL-terminated; `out` must be writable.
enum IeStatus ie_word_parse(const char *text, uint8_t q, struct IeWord **out);

// # Safety
// `word` must be NULL or a handle from this library, not yet freed.
void ie_word_free(struct IeWord *word);

// Length of the word; 0 for NULL.
//
// # Safety
// `word` must be NULL or a live handle.
size_t ie_word_len(const struct IeWord *word);

// Alphabet size of the word; 0 for NULL.
//
// # Safety
// `word` must be NULL or a live handle.
uint8_t ie_word_alphabet(const struct IeWord *word);

// Textual form of the word, to be released with [`ie_string_free`]; NULL
// for a NULL handle.
//
// # Safety
// `word` must be NULL or a live handle.
char *ie_word_to_string(const struct IeWord *word);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void ie_string_free(char *s);

// Number of occurrences of `y` as a subsequence of `x`. Counts beyond
// `u64` report [`IeStatus::Overflow`].
//
// # Safety
// Handles must be live; `out` must be writable.
enum IeStatus ie_embedding_number(const struct IeWord *y, const struct IeWord *x, uint64_t *out);

// Weighted radius-`k` ball around `word`: supersequences for
// `Insertion`, subsequences for `Deletion`.
//
// # Safety
// `word` must be live; `out` must be writable.
enum IeStatus ie_ball_new(const struct IeWord *word,
                          size_t k,
                          enum IeChannelKind ball_kind,
                          struct IeBall **out);

// # Safety
// `ball` must be NULL or a live handle.
size_t ie_ball_len(const struct IeBall *ball);

// Member `index` of the ball. `word_out` receives a new word handle (may be
// NULL to skip) and `count_out` its embedding count.
//
// # Safety
// `ball` must be live; non-NULL out pointers must be writable.
enum IeStatus ie_ball_entry(const struct IeBall *ball,
                            size_t index,
                            struct IeWord **word_out,
                            uint64_t *count_out);

// `Σ c log2 c` over the ball's counts; 0 for NULL.
//
// # Safety
// `ball` must be NULL or a live handle.
double ie_ball_log_sum(const struct IeBall *ball);

// # Safety
// `ball` must be NULL or a handle from this library, not yet freed.
void ie_ball_free(struct IeBall *ball);

// Entropy in bits of the channel input given output `word`; the alphabet
// comes from the word.
//
// # Safety
// `word` must be live; `out_bits` must be writable.
enum IeStatus ie_input_entropy(const struct IeWord *word,
                               enum IeChannelKind channel,
                               size_t k,
                               enum IeMethod method,
                               double *out_bits);

// Entropy in bits of the channel output given input `word`.
//
// # Safety
// `word` must be live; `out_bits` must be writable.
enum IeStatus ie_output_entropy(const struct IeWord *word,
                                enum IeChannelKind channel,
                                size_t k,
                                enum IeMethod method,
                                double *out_bits);

// Known extremum of the input entropy over outputs of length `m`, and the
// number of words attaining it (either out pointer may be NULL).
//
// # Safety
// Non-NULL out pointers must be writable.
enum IeStatus ie_global_extremum(uint8_t q,
                                 size_t m,
                                 enum IeChannelKind channel,
                                 size_t k,
                                 enum IeWhich which,
                                 double *out_bits,
                                 size_t *out_witness_count);

// Blahut–Arimoto capacity in bits at block length `n`. `converged` may be NULL.
//
// # Safety
// `out_bits` must be writable; `converged` must be NULL or writable.
enum IeStatus ie_capacity(enum IeChannelKind channel,
                          size_t k,
                          uint8_t q,
                          size_t n,
                          double tolerance,
                          size_t max_iterations,
                          double *out_bits,
                          bool *converged);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INDEL_ENTROPY_H */
