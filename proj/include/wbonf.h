/*
 * wbonf -- group-weighted Bonferroni multiple testing.
 *
 * C interface to the shared library: scalar probability kernels, the optimal
 * weight function and its budget solver, method-of-moments mixture
 * estimation, batch analysis of a test battery behind opaque handles, and
 * the Monte Carlo simulation harness.
 *
 * Conventions:
 *   - every function returns a wbonf_status_t; WBONF_OK is 0,
 *   - outputs are written through caller-supplied pointers/buffers,
 *   - on failure, wbonf_last_error_message() returns a thread-local detail
 *     string valid until the next failing call on the same thread.
 */

#ifndef WBONF_H
#define WBONF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wbonf_status {
    WBONF_OK = 0,
    WBONF_ERROR_NULL_POINTER = 1,
    WBONF_ERROR_INVALID_ARGUMENT = 2,
    WBONF_ERROR_DOMAIN = 3,
    WBONF_ERROR_GROUP_TOO_SMALL = 4,
    WBONF_ERROR_NO_SIGNAL = 5,
    WBONF_ERROR_SOLVER = 6,
    WBONF_ERROR_LENGTH_MISMATCH = 7,
    WBONF_ERROR_PARSE = 8,
    WBONF_ERROR_IO = 9,
    WBONF_ERROR_INTERNAL = 10
} wbonf_status_t;

typedef enum wbonf_model {
    WBONF_MODEL_NORMAL = 0,
    WBONF_MODEL_CHISQ = 1
} wbonf_model_t;

const char* wbonf_status_name(wbonf_status_t status);
const char* wbonf_last_error_message(void);
const char* wbonf_version(void);

/* ------------------------------------------------------------------ */
/* Scalar kernels                                                      */
/* ------------------------------------------------------------------ */

/* Upper tail P(Z >= t) of the standard normal. */
wbonf_status_t wbonf_upper_tail_normal(double t, double* out);

/* Inverse of the upper tail on (0,1). */
wbonf_status_t wbonf_upper_tail_normal_inv(double p, double* out);

/* Two-sided normal p-value 2*Phibar(|t|). */
wbonf_status_t wbonf_pvalue_normal_two_sided(double t, double* out);

/* Upper tail of a central chi-square with 1 df; equals the two-sided
 * normal p-value at sqrt(x) bit for bit. */
wbonf_status_t wbonf_pvalue_chisq_1df(double x, double* out);

/* Optimal weight w(xi) = (m/alpha) * Phibar(|xi|/2 + c/|xi|). */
wbonf_status_t wbonf_optimal_weight(double xi, double c, int64_t m, double alpha,
                                    double* out);

/* Power of one weighted two-sided test at signal xi. */
wbonf_status_t wbonf_per_hypothesis_power(double xi, double w, int64_t m,
                                          double alpha, double* out);

/* Mean per-hypothesis power over entries with xi != 0. */
wbonf_status_t wbonf_average_power(const double* xis, const double* weights,
                                   size_t n, int64_t m, double alpha, double* out);

/* b_m = (sum_k sqrt(r_k)) / (sum_k r_k). */
wbonf_status_t wbonf_fwer_inflation_bound(const int64_t* sizes, size_t n_groups,
                                          double* out);

/* ------------------------------------------------------------------ */
/* Budget solver and weight post-processing                            */
/* ------------------------------------------------------------------ */

typedef struct wbonf_budget {
    double c;
    double achieved_mean_weight;
    int32_t iterations;
    double bracket_lo;
    double bracket_hi;
} wbonf_budget_t;

/* Solves (1/m) sum_k r_k w(xi_k, c) = 1 for c; sizes must sum to m and at
 * least one |xi_k| must be positive. */
wbonf_status_t wbonf_solve_budget(const double* xi_by_group, const int64_t* sizes,
                                  size_t n_groups, int64_t m, double alpha,
                                  wbonf_budget_t* out);

/* Smoothing plus renormalization of per-group raw weights; writes the final
 * per-group weights into w_hat_out (length n_groups). */
wbonf_status_t wbonf_smooth_and_renorm(const double* raw, const int64_t* sizes,
                                       size_t n_groups, int64_t m, double alpha,
                                       double lambda, double* w_hat_out);

/* ------------------------------------------------------------------ */
/* Method-of-moments estimation                                        */
/* ------------------------------------------------------------------ */

typedef struct wbonf_mixture_estimate {
    double pi_hat;
    double xi_hat;      /* >= 0, magnitude used by the weight function */
    double xi_signed;   /* signed estimate (normal model) */
    int32_t degenerate; /* 1 when the guard forced xi_hat = 0 */
} wbonf_mixture_estimate_t;

wbonf_status_t wbonf_mom_normal(double mean, double variance, int64_t size,
                                wbonf_mixture_estimate_t* out);
wbonf_status_t wbonf_mom_chisq(double mean, double variance, int64_t size,
                               wbonf_mixture_estimate_t* out);

/* ------------------------------------------------------------------ */
/* Rejection                                                           */
/* ------------------------------------------------------------------ */

/* Weighted Bonferroni: reject j iff p_j <= alpha * w_j / m. rejected_out is
 * required (length m); thresholds_out may be NULL. */
wbonf_status_t wbonf_weighted_reject(const double* pvalues, const double* weights,
                                     size_t m, double alpha, uint8_t* rejected_out,
                                     double* thresholds_out, int64_t* n_rejected_out);

/* ------------------------------------------------------------------ */
/* Battery analysis (opaque handles)                                   */
/* ------------------------------------------------------------------ */

typedef struct wbonf_battery wbonf_battery_t;
typedef struct wbonf_analysis wbonf_analysis_t;

/* group_of holds dense 0-based group indices; every group must be occupied.
 * group_names may be NULL (groups are then named G1..GK) or hold n_groups
 * labels used in diagnostics. */
wbonf_status_t wbonf_battery_create(const double* stats, const int32_t* group_of,
                                    size_t m, size_t n_groups,
                                    const char* const* group_names,
                                    wbonf_model_t model, wbonf_battery_t** out);
void wbonf_battery_free(wbonf_battery_t* battery);
size_t wbonf_battery_size(const wbonf_battery_t* battery);
size_t wbonf_battery_group_count(const wbonf_battery_t* battery);

typedef struct wbonf_analysis_config {
    double alpha;           /* default 0.05 */
    int64_t min_group_size; /* default 10 */
    double lambda;          /* smoothing, default 0.95 */
} wbonf_analysis_config_t;

void wbonf_analysis_config_init(wbonf_analysis_config_t* config);

/* Runs the full pipeline: per-group summaries, mixture estimates, budget
 * solve, smoothing, weighted rejection. */
wbonf_status_t wbonf_analyze(const wbonf_battery_t* battery,
                             const wbonf_analysis_config_t* config,
                             wbonf_analysis_t** out);
void wbonf_analysis_free(wbonf_analysis_t* analysis);

typedef struct wbonf_analysis_summary {
    int64_t m;
    int64_t n_groups;
    double alpha;
    double c;               /* NaN under the unit-weight fallback */
    double bm;
    int64_t n_rejected;
    int32_t unit_fallback;  /* 1 when every group was degenerate */
} wbonf_analysis_summary_t;

typedef struct wbonf_group_row {
    int32_t group;
    int64_t size;
    double mean;
    double variance;
    double pi_hat;
    double xi_hat;
    int32_t degenerate;
    double w_raw;   /* w(xi_hat) at the solved c */
    double w_hat;   /* final smoothed, renormalized weight */
} wbonf_group_row_t;

wbonf_status_t wbonf_analysis_summary(const wbonf_analysis_t* analysis,
                                      wbonf_analysis_summary_t* out);

/* Per-test vectors, each buffer of length wbonf_battery_size(). */
wbonf_status_t wbonf_analysis_pvalues(const wbonf_analysis_t* analysis, double* out,
                                      size_t capacity);
wbonf_status_t wbonf_analysis_weights(const wbonf_analysis_t* analysis, double* out,
                                      size_t capacity);
wbonf_status_t wbonf_analysis_thresholds(const wbonf_analysis_t* analysis, double* out,
                                         size_t capacity);
wbonf_status_t wbonf_analysis_rejected(const wbonf_analysis_t* analysis, uint8_t* out,
                                       size_t capacity);

/* Per-group diagnostics, buffer of length wbonf_battery_group_count(). */
wbonf_status_t wbonf_analysis_group_table(const wbonf_analysis_t* analysis,
                                          wbonf_group_row_t* out, size_t capacity);

/* ------------------------------------------------------------------ */
/* Sampling and simulation                                             */
/* ------------------------------------------------------------------ */

uint64_t wbonf_derive_seed(uint64_t master_seed, uint64_t index);

/* Mixture draws: N(0,1) w.p. 1-pi, N(xi,1) w.p. pi, squared under the
 * chi-square model. The sequence is a pure function of the seed. */
wbonf_status_t wbonf_sample_mixture(uint64_t seed, size_t count, double pi,
                                    double xi, wbonf_model_t model, double* out);

typedef struct wbonf_scenario {
    int64_t m;              /* default 10000 */
    int64_t m1;             /* signals, divisible by 5; default 100 */
    double xi0;             /* ladder base, levels xi0*(1,1.5,2,2.5,3); default 2 */
    double p0;              /* nulls moved into signal groups; default 0 */
    double p1;              /* signals moved into null groups; default 0 */
    int32_t n_groups;       /* default 10 */
    wbonf_model_t model;    /* default normal */
    double alpha;           /* default 0.05 */
    int32_t replicates;     /* default 500 */
    uint64_t master_seed;   /* default 1 */
    int64_t min_group_size; /* default 10 */
    double lambda;          /* default 0.95 */
    int32_t mix_ladder;     /* default 0 */
    int32_t random_grouping;/* default 0 */
} wbonf_scenario_t;

void wbonf_scenario_init(wbonf_scenario_t* scenario);

typedef struct wbonf_power_estimate {
    double weighted_power;
    double unweighted_power;
    double diff_pct_points;
    double fwer_weighted;
    double fwer_unweighted;
    double mc_standard_error;
    double r_squared;
    int32_t replicates_run;
} wbonf_power_estimate_t;

wbonf_status_t wbonf_run_scenario(const wbonf_scenario_t* scenario,
                                  wbonf_power_estimate_t* out);

/* All-null run (m1 = 0) of the estimated-weights pipeline. */
wbonf_status_t wbonf_fwer_validation(int64_t m, int32_t n_groups, double alpha,
                                     int32_t replicates, wbonf_model_t model,
                                     uint64_t master_seed,
                                     wbonf_power_estimate_t* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* WBONF_H */
