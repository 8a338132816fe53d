/* C interface to the recurrence-statistics library.
 *
 * Every function that can fail returns a reclab_status; on failure the
 * message is available from reclab_last_error_message() on the same thread
 * until the next failing call. Objects returned through out-parameters are
 * owned by the caller and released with the matching *_destroy function.
 */
#ifndef RECLAB_H
#define RECLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RECLAB_API __declspec(dllexport)
#else
#define RECLAB_API __attribute__((visibility("default")))
#endif

typedef enum reclab_status {
  RECLAB_OK = 0,
  RECLAB_INVALID_INPUT = 1,
  RECLAB_HYPOTHESIS_FAILED = 2,
  RECLAB_HORIZON_TOO_LARGE = 3,
  RECLAB_TOO_LARGE = 4,
  RECLAB_CONDITIONING = 5,
  RECLAB_NO_POSITIVE_RATE = 6,
  RECLAB_WRONG_MODEL = 7,
  RECLAB_DEGENERATE_PARAMETERS = 8,
  RECLAB_PRECONDITION = 9,
  RECLAB_INTERNAL = 99
} reclab_status;

typedef struct reclab_model reclab_model;
typedef struct reclab_text reclab_text;

RECLAB_API const char* reclab_version(void);
RECLAB_API const char* reclab_status_name(reclab_status status);
RECLAB_API const char* reclab_last_error_message(void);

/* Worker threads for Monte Carlo trials; 0 = hardware concurrency.
 * Results do not depend on this setting. */
RECLAB_API void reclab_set_thread_count(unsigned threads);

RECLAB_API reclab_status reclab_principal_period(const uint32_t* word, size_t n, size_t* out);
RECLAB_API reclab_status reclab_kappa(uint64_t r, const uint64_t* d, size_t ell, uint64_t* out);

/* spec: a JSON object ({"type":"bernoulli","probs":[...]}, ...) or a preset
 * such as "uniform-binary" or "xor:0.75" (given as a JSON string or bare). */
RECLAB_API reclab_status reclab_model_create(const char* spec, reclab_model** out);
RECLAB_API void reclab_model_destroy(reclab_model* model);
RECLAB_API reclab_status reclab_model_cylinder_prob(const reclab_model* model, const uint32_t* word,
                                                    size_t n, double* out);
RECLAB_API reclab_status reclab_model_sample_path(const reclab_model* model, uint64_t seed,
                                                  uint32_t* out, size_t length);
RECLAB_API reclab_status reclab_model_psi(const reclab_model* model, int64_t m, double* value,
                                          int* is_upper_bound);
RECLAB_API reclab_status reclab_model_decay_rate(const reclab_model* model, double* gamma);

/* Runs an experiment command (analyze, simulate, compare, nonconv, hitting,
 * entropy, bounds) on a JSON config and returns the JSON report. */
RECLAB_API reclab_status reclab_run(const char* command, const char* config_json, reclab_text** out);
RECLAB_API reclab_status reclab_report_to_csv(const char* report_json, reclab_text** out);

RECLAB_API const char* reclab_text_data(const reclab_text* text);
RECLAB_API size_t reclab_text_size(const reclab_text* text);
RECLAB_API void reclab_text_destroy(reclab_text* text);

#ifdef __cplusplus
}
#endif

#endif /* RECLAB_H */
