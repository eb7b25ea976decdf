#ifndef KLCONC_KLCONC_H
#define KLCONC_KLCONC_H

/* C interface to the klconc library.
 *
 * Every call returns a klc_status. On failure the message of the last error
 * on the calling thread is available from klc_last_error() until the next
 * failing call on that thread. Objects behind opaque handles are owned by the
 * caller and released with the matching *_destroy function; passing NULL to a
 * destroy function is a no-op. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KLCONC_BUILDING)
#    define KLC_API __declspec(dllexport)
#  else
#    define KLC_API __declspec(dllimport)
#  endif
#else
#  define KLC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum klc_status {
  KLC_OK = 0,
  KLC_INVALID_ARGUMENT = 1, /* malformed input, out-of-range parameter */
  KLC_PRECONDITION = 2,     /* input valid but outside a result's hypothesis */
  KLC_IO = 3,
  KLC_INTERNAL = 4
} klc_status;

KLC_API const char* klc_last_error(void);
KLC_API const char* klc_version(void);

/* ---- distributions ---- */

typedef struct klc_pmf klc_pmf;

/* Weights must be finite and nonnegative and sum to 1 within 1e-9. */
KLC_API klc_status klc_pmf_from_weights(const double* weights, size_t k, klc_pmf** out);
KLC_API klc_status klc_pmf_uniform(uint64_t k, klc_pmf** out);
KLC_API klc_status klc_pmf_zipf(uint64_t k, double exponent, klc_pmf** out);
KLC_API klc_status klc_pmf_two_point(uint64_t k, double mass, klc_pmf** out);
/* One weight per line; blank lines and '#' comments skipped. */
KLC_API klc_status klc_pmf_from_file(const char* path, klc_pmf** out);
/* name: "uniform", "zipf", "twopoint" or "file:PATH". */
KLC_API klc_status klc_pmf_by_name(const char* name, uint64_t k, double exponent, double mass,
                                   klc_pmf** out);
KLC_API void klc_pmf_destroy(klc_pmf* p);
KLC_API size_t klc_pmf_size(const klc_pmf* p);
/* Copies min(cap, size) probabilities. */
KLC_API klc_status klc_pmf_copy_probs(const klc_pmf* p, double* out, size_t cap);

/* ---- estimators and losses (arrays of length k) ---- */

KLC_API klc_status klc_add_t_estimate(const uint64_t* counts, size_t k, double t, double* out);
KLC_API klc_status klc_kl_divergence(const klc_pmf* p, const double* q, size_t k, double* out);
KLC_API klc_status klc_kl_tilde(const klc_pmf* p, const double* q, size_t k, uint64_t n,
                                double* out);
KLC_API klc_status klc_lr_distance(const klc_pmf* p, const klc_pmf* q, double r, double* out);

/* ---- sampling ---- */

KLC_API klc_status klc_multinomial_counts(const klc_pmf* p, uint64_t n, uint64_t seed,
                                          uint64_t* out_counts);

/* ---- bounds ---- */

typedef struct klc_bounds_row {
  double thm_kl_bound;
  double bgpv_deviation;
  double variance_lb;
  double heuristic_std;
  double gamma;
  double alpha;
  int has_bgpv_deviation; /* 0 when n < 2 */
  int has_variance_lb;    /* 0 when n < 10k */
} klc_bounds_row;

KLC_API klc_status klc_bounds_compute(uint64_t k, uint64_t n, double delta, klc_bounds_row* out);

/* ---- experiments ---- */

typedef struct klc_trial_config {
  uint64_t n;
  uint64_t reps;
  uint64_t seed;
  double t;
  double delta;    /* used only when has_delta */
  int has_delta;
  int quantiles;   /* buffer losses and report q50/q90/q99 */
  unsigned threads; /* 0 = all cores */
} klc_trial_config;

typedef struct klc_trial_summary {
  uint64_t k, n, reps;
  double t;
  double mean_kl, var_kl, std_kl;
  double q50, q90, q99;
  int has_quantiles;
  double exceed_frac;
  double t_delta;
  int has_delta;
  double wall_seconds;
} klc_trial_summary;

KLC_API klc_status klc_run_kl_trials(const klc_pmf* p, const klc_trial_config* cfg,
                                     klc_trial_summary* out);

typedef struct klc_figure1_row {
  uint64_t k;
  double sample_std;
  double heuristic_std;
  double ratio;
  int has_ratio; /* 0 when sample_std == 0 */
} klc_figure1_row;

/* out must hold count rows. */
KLC_API klc_status klc_figure1(const uint64_t* ks, size_t count, uint64_t n, uint64_t reps,
                               uint64_t seed, unsigned threads, klc_figure1_row* out);

/* ---- verification suites ---- */

typedef struct klc_check_options {
  uint64_t seed;
  unsigned threads;
  uint64_t k, n, reps; /* 0 = suite default */
  double delta, lambda, prob; /* <= 0 = suite default */
} klc_check_options;

typedef struct klc_claim {
  const char* suite;
  const char* anchor;
  const char* claim;
  const char* detail;
  double measured;
  double bound;
  int pass;
} klc_claim;

typedef struct klc_report klc_report;

KLC_API void klc_check_options_init(klc_check_options* opts);
/* suite: "all", "facts", "variance", "thm", "poisson-tail", "coupling",
 * "marginals" or "expectation". Unknown names give KLC_INVALID_ARGUMENT. */
KLC_API klc_status klc_check_run(const char* suite, const klc_check_options* opts,
                                 klc_report** out);
KLC_API size_t klc_report_size(const klc_report* r);
/* Strings stay valid until the report is destroyed. */
KLC_API klc_status klc_report_get(const klc_report* r, size_t i, klc_claim* out);
KLC_API int klc_report_passed(const klc_report* r);
KLC_API void klc_report_destroy(klc_report* r);

#ifdef __cplusplus
}
#endif

#endif
