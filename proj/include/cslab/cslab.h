/* C interface to the cslab library. Every function returns a cslab_status;
 * on failure cslab_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * cslab_string_free. */
#ifndef CSLAB_CSLAB_H
#define CSLAB_CSLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CSLAB_API __declspec(dllexport)
#else
#define CSLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cslab_status {
  CSLAB_OK = 0,
  CSLAB_ERR_PARAMETER = 1,
  CSLAB_ERR_EMPTY_REQUEST = 2,
  CSLAB_ERR_CAPACITY = 3,
  CSLAB_ERR_DOMAIN = 4,
  CSLAB_ERR_DIMENSION = 5,
  CSLAB_ERR_INDEX_RANGE = 6,
  CSLAB_ERR_GRID_MISMATCH = 7,
  CSLAB_ERR_CONFIG = 8,
  CSLAB_ERR_IO = 9,
  CSLAB_ERR_NULL_ARGUMENT = 10,
  CSLAB_ERR_INTERNAL = 11
} cslab_status;

typedef struct cslab_config cslab_config;
typedef struct cslab_sweep cslab_sweep;
typedef struct cslab_codec cslab_codec;
typedef struct cslab_ensemble cslab_ensemble;

CSLAB_API const char* cslab_version(void);
CSLAB_API const char* cslab_status_string(cslab_status status);
CSLAB_API const char* cslab_last_error(void);
CSLAB_API void cslab_string_free(char* s);

/* Experiment configuration (JSON). */
CSLAB_API cslab_status cslab_config_parse(const char* json_text, cslab_config** out);
CSLAB_API cslab_status cslab_config_load(const char* path, cslab_config** out);
CSLAB_API void cslab_config_free(cslab_config* config);
CSLAB_API cslab_status cslab_config_set_seed(cslab_config* config, uint64_t master_seed);
CSLAB_API cslab_status cslab_config_set_trials(cslab_config* config, size_t trials);
CSLAB_API cslab_status cslab_config_set_threads(cslab_config* config, size_t threads);
CSLAB_API cslab_status cslab_config_set_timing(cslab_config* config, int enabled);
CSLAB_API cslab_status cslab_config_seed(const cslab_config* config, uint64_t* out);
/* Output paths from the config's "output" block; empty when unset. */
CSLAB_API cslab_status cslab_config_output(const cslab_config* config, char** csv, char** svg, char** points);

/* Monte Carlo runs. */
CSLAB_API cslab_status cslab_sweep_run(const cslab_config* config, cslab_sweep** out);
CSLAB_API void cslab_sweep_free(cslab_sweep* sweep);
CSLAB_API cslab_status cslab_sweep_records_csv(const cslab_sweep* sweep, char** out);
CSLAB_API cslab_status cslab_sweep_points_csv(const cslab_sweep* sweep, char** out);
CSLAB_API cslab_status cslab_sweep_svg(const cslab_sweep* sweep, char** out);
CSLAB_API cslab_status cslab_sweep_point_count(const cslab_sweep* sweep, size_t* out);
/* Aggregates of one sweep point; ok is 0 when the point failed. */
CSLAB_API cslab_status cslab_sweep_point(const cslab_sweep* sweep, size_t index, double* axis_value, size_t* d,
                                         double* exceed_rate, double* mean_error, double* max_error,
                                         double* bound_error, double* bound_fail_prob, int* ok);

/* Rate-distortion profile of the config's codec over the given deltas, or
 * the config's "deltas" list when count is 0. CSV: delta,rate_bits,alpha_hat. */
CSLAB_API cslab_status cslab_rd_profile_csv(const cslab_config* config, const double* deltas, size_t count,
                                            char** out);

/* Bound table. theorem is an id such as "T3", or NULL / "all" for every
 * theorem; assignments is a comma-separated list such as "r=10,d=40,delta=0.1".
 * Free parameters not assigned take their default seeds. Theorems whose
 * inputs are out of range are skipped unless theorem names exactly one.
 * CSV: theorem_id,inputs,error_bound,failure_probability. */
CSLAB_API cslab_status cslab_bounds_csv(const char* theorem, const char* assignments, char** out);
CSLAB_API cslab_status cslab_evaluate_bound(const char* theorem, const char* assignments, double* error_bound,
                                            double* failure_probability);
CSLAB_API cslab_status cslab_measurement_budget(double rate_bits, double delta, double eta, int strong, size_t* d);

/* Indistinguishable pairs for `trials` random ensembles with the config's n,
 * k and d (default 2k-1). CSV with one row per draw. */
CSLAB_API cslab_status cslab_pair_csv(const cslab_config* config, char** out);

/* Codecs over R^n (ball or sparse class) from a JSON codec block. */
CSLAB_API cslab_status cslab_codec_create(const char* json_descriptor, cslab_codec** out);
CSLAB_API void cslab_codec_free(cslab_codec* codec);
CSLAB_API cslab_status cslab_codec_info(const cslab_codec* codec, size_t* dim, uint64_t* size, double* rate_bits,
                                        double* delta);
CSLAB_API cslab_status cslab_codec_encode(const cslab_codec* codec, const double* x, size_t len, uint64_t* index);
CSLAB_API cslab_status cslab_codec_decode(const cslab_codec* codec, uint64_t index, double* out, size_t len);

/* Gaussian measurement ensembles. */
CSLAB_API cslab_status cslab_ensemble_sample(size_t d, size_t n, uint64_t master_seed, uint64_t stream_id,
                                             cslab_ensemble** out);
CSLAB_API void cslab_ensemble_free(cslab_ensemble* ensemble);
CSLAB_API cslab_status cslab_ensemble_measure(const cslab_ensemble* ensemble, const double* x, size_t n, double* y,
                                              size_t d);

/* Exhaustive CSP; truth may be NULL, in which case *error_l2 is NaN. */
CSLAB_API cslab_status cslab_recover(const cslab_codec* codec, const cslab_ensemble* ensemble, const double* y,
                                     size_t d, const double* truth, size_t threads, uint64_t* index,
                                     double* residual, double* error_l2);

#ifdef __cplusplus
}
#endif

#endif
