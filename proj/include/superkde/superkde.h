/* C interface to the superkde library.
 *
 * Every call returns an skde_status; results come back through out
 * parameters. On failure, skde_last_error() describes the most recent error
 * raised on the calling thread. Handles are opaque and owned by the caller,
 * who releases them with the matching *_destroy function (NULL is accepted).
 */
#ifndef SUPERKDE_H
#define SUPERKDE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SUPERKDE_BUILDING)
#define SKDE_API __declspec(dllexport)
#else
#define SKDE_API __declspec(dllimport)
#endif
#else
#define SKDE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum skde_status
{
  SKDE_OK = 0,
  SKDE_INVALID_ARGUMENT = 1,
  SKDE_INVALID_BANDWIDTH = 2,
  SKDE_INVALID_BRACKET = 3,
  SKDE_NON_CONVERGENCE = 4,
  SKDE_DIVERGENT = 5,
  SKDE_NOT_INTEGRABLE = 6,
  SKDE_NOT_APPLICABLE = 7,
  SKDE_NO_FLAT_REGION = 8,
  SKDE_EMPTY_GRID = 9,
  SKDE_DEGENERATE_SAMPLE = 10,
  SKDE_NO_ROOT = 11,
  SKDE_CONFIG_ERROR = 12,
  SKDE_IO_ERROR = 13,
  SKDE_INTERNAL_ERROR = 14
} skde_status;

typedef struct skde_kernel skde_kernel;
typedef struct skde_density skde_density;
typedef struct skde_sample skde_sample;
typedef struct skde_config skde_config;
typedef struct skde_results skde_results;

SKDE_API const char* skde_last_error(void);
SKDE_API const char* skde_status_name(skde_status status);

/* kernels: "trapezoidal", "gaussian", "epanechnikov", "natterer", "sinc" */
SKDE_API skde_status skde_kernel_create(const char* name, skde_kernel** out);
SKDE_API void skde_kernel_destroy(skde_kernel* kernel);
SKDE_API skde_status skde_kernel_eval(const skde_kernel* kernel, double x, double* out);
SKDE_API skde_status skde_kernel_cf(const skde_kernel* kernel, double t, double* out);
SKDE_API skde_status skde_kernel_roughness(const skde_kernel* kernel, double* out);
SKDE_API skde_status skde_kernel_moment(const skde_kernel* kernel, int j, double* out);
SKDE_API skde_status skde_kernel_admissible(const skde_kernel* kernel, int* out);

#define SKDE_MAX_MOMENTS 32

typedef struct skde_classification
{
  double s_k;
  double t_k;
  /* 0 when no nonzero moment was found up to j_max */
  int order;
  int is_superkernel;
  double roughness;
  int moment_count;
  double moments[SKDE_MAX_MOMENTS];
} skde_classification;

/* j_max <= SKDE_MAX_MOMENTS */
SKDE_API skde_status skde_kernel_classify(const skde_kernel* kernel,
                                          int j_max,
                                          double moment_eps,
                                          skde_classification* out);

/* densities: "fvp", "gaussian", "cauchy" */
SKDE_API skde_status skde_density_create(const char* name, skde_density** out);
SKDE_API void skde_density_destroy(skde_density* density);
SKDE_API skde_status skde_density_pdf(const skde_density* density, double x, double* out);
SKDE_API skde_status skde_density_cf(const skde_density* density, double t, double* out);
SKDE_API skde_status skde_density_cdf(const skde_density* density, double x, double* out);
SKDE_API skde_status skde_density_deriv_roughness(const skde_density* density,
                                                  int k,
                                                  double* out);

/* samples */
SKDE_API skde_status skde_sample_create(const double* points, size_t n, skde_sample** out);
SKDE_API skde_status skde_sample_draw(const skde_density* density,
                                      size_t n,
                                      uint64_t seed,
                                      uint64_t stream_id,
                                      skde_sample** out);
SKDE_API void skde_sample_destroy(skde_sample* sample);
SKDE_API size_t skde_sample_size(const skde_sample* sample);
/* copies min(capacity, n) points into buffer */
SKDE_API skde_status skde_sample_points(const skde_sample* sample,
                                        double* buffer,
                                        size_t capacity);

/* estimation */
SKDE_API skde_status skde_kde_eval(const skde_kernel* kernel,
                                   double h,
                                   const skde_sample* sample,
                                   double x,
                                   double* out);
SKDE_API skde_status skde_ecf(const skde_sample* sample, double t, double* re, double* im);

/* exact risk */
typedef struct skde_risk_report
{
  double h;
  double bias_term;
  double variance_term;
  double mise;
  uint64_t n;
} skde_risk_report;

SKDE_API skde_status skde_mise(const skde_kernel* kernel,
                               const skde_density* density,
                               uint64_t n,
                               double h,
                               skde_risk_report* out);
SKDE_API skde_status skde_variance_identity(const skde_kernel* kernel,
                                            const skde_density* density,
                                            uint64_t n,
                                            double h,
                                            double* out);
/* h_lo = h_hi = 0 selects the default bracket */
SKDE_API skde_status skde_optimal_bandwidth(const skde_kernel* kernel,
                                            const skde_density* density,
                                            uint64_t n,
                                            double h_lo,
                                            double h_hi,
                                            double* h0n,
                                            double* phi);

typedef enum skde_ise_route
{
  SKDE_ISE_FOURIER = 0,
  SKDE_ISE_PAIR_SUM = 1
} skde_ise_route;

SKDE_API skde_status skde_ise(const skde_kernel* kernel,
                              double h,
                              const skde_sample* sample,
                              const skde_density* density,
                              skde_ise_route route,
                              double* out);
SKDE_API skde_status skde_zero_bias_bandwidth(const skde_kernel* kernel,
                                              const skde_density* density,
                                              double* out);
SKDE_API skde_status skde_parametric_bound(const skde_kernel* kernel,
                                           const skde_density* density,
                                           double* out);
SKDE_API skde_status skde_smooth_rate_bound(const skde_kernel* kernel,
                                            const skde_density* density,
                                            int k,
                                            double* out);

/* bandwidth selectors; diagnostics are not exposed here */
SKDE_API skde_status skde_select_politis(const skde_sample* sample,
                                         double c,
                                         double ell,
                                         double* h,
                                         double* d_hat);
SKDE_API skde_status skde_select_lscv(const skde_sample* sample,
                                      const skde_kernel* kernel,
                                      const double* h_grid,
                                      size_t grid_size,
                                      double* h);
SKDE_API skde_status skde_lscv_score(const skde_sample* sample,
                                     const skde_kernel* kernel,
                                     double h,
                                     skde_ise_route route,
                                     double* out);
SKDE_API skde_status skde_select_sj(const skde_sample* sample, double* h);

/* Monte Carlo experiments. Keys: density, kernel, selectors, sizes, reps,
 * seed, out, workers, verbose, ise-scale. Setting a key validates its value
 * only; skde_config_validate checks the whole configuration. */
SKDE_API skde_status skde_config_create(skde_config** out);
SKDE_API void skde_config_destroy(skde_config* config);
SKDE_API skde_status skde_config_load_file(skde_config* config, const char* path);
SKDE_API skde_status skde_config_set(skde_config* config, const char* key, const char* value);
SKDE_API skde_status skde_config_validate(const skde_config* config);
/* returns a pointer owned by the config, valid until it is modified */
SKDE_API const char* skde_config_out_path(const skde_config* config);
SKDE_API int skde_config_verbose(const skde_config* config);

typedef void (*skde_progress_fn)(uint64_t n, uint64_t rep, void* user);

SKDE_API skde_status skde_run_experiment(const skde_config* config,
                                         skde_progress_fn progress,
                                         void* user,
                                         skde_results** out);
SKDE_API void skde_results_destroy(skde_results* results);
SKDE_API size_t skde_results_row_count(const skde_results* results);
SKDE_API size_t skde_results_failure_count(const skde_results* results);

typedef struct skde_result_row
{
  uint64_t n;
  const char* method; /* owned by the results handle */
  double mean_ise_scaled;
  double sd_ise_scaled;
  uint64_t reps;
  uint64_t seed;
  uint64_t fallback_count;
} skde_result_row;

SKDE_API skde_status skde_results_row(const skde_results* results,
                                      size_t index,
                                      skde_result_row* out);
SKDE_API skde_status skde_results_write_csv(const skde_results* results, const char* path);
SKDE_API skde_status skde_results_write_metadata(const skde_results* results,
                                                 const char* path);
/* per-replication log with sample hashes (needs verbose = true) */
SKDE_API skde_status skde_results_write_records(const skde_results* results,
                                                const char* path);

#ifdef __cplusplus
}
#endif

#endif
