/*
 * C interface to the saddlepoint sign-flip library.
 *
 * All objects are opaque handles created by a *_create / *_load / *_run call
 * and released with the matching *_free. Every fallible call returns a
 * spa_status; on failure spa_last_error() holds a message for the calling
 * thread until its next failing call. Strings returned by *_json / *_csv are
 * owned by the handle and stay valid until it is freed.
 *
 * Probabilities are reported as double. Values below DBL_MIN underflow in
 * the getters; the JSON renderings keep the full extended-precision value.
 */
#ifndef SPA_SPA_H
#define SPA_SPA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPA_BUILDING_LIBRARY)
#    define SPA_API __declspec(dllexport)
#  else
#    define SPA_API __declspec(dllimport)
#  endif
#else
#  define SPA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spa_status {
    SPA_OK = 0,
    SPA_ERR_INVALID_ARGUMENT = 1,
    SPA_ERR_IO = 2,
    SPA_ERR_PARSE = 3,
    SPA_ERR_DEGENERATE = 4, /* all observations are zero */
    SPA_ERR_TOO_LARGE = 5,  /* exact enumeration requested for n > 30 */
    SPA_ERR_DOMAIN = 6,     /* numerical precondition violated */
    SPA_ERR_INTERNAL = 7
} spa_status;

typedef enum spa_saddle_status {
    SPA_SADDLE_ZERO = 0,
    SPA_SADDLE_INTERIOR_UNIQUE = 1,
    SPA_SADDLE_BOUNDARY_FALLBACK = 2,
    SPA_SADDLE_FLAT_FALLBACK = 3
} spa_saddle_status;

typedef enum spa_oracle_kind { SPA_ORACLE_EXACT = 0, SPA_ORACLE_MC = 1 } spa_oracle_kind;

typedef struct spa_sample spa_sample;
typedef struct spa_report spa_report;
typedef struct spa_comparison spa_comparison;
typedef struct spa_experiment spa_experiment;
typedef struct spa_run spa_run;

typedef struct spa_saddle_config {
    double tol_residual;
    double tol_s;
    double eta_flat;
    size_t max_iter;
} spa_saddle_config;

typedef struct spa_report_view {
    size_t n;
    double w;
    double s_hat;
    double lambda;
    double r;
    double p_lr;
    double p_rob;
    double p_clt;
    spa_saddle_status saddle_status;
    int clamped;
    int converged;
    double m2;
    double m4;
    double nu_max;
} spa_report_view;

typedef struct spa_comparison_view {
    size_t n;
    double w;
    double p_lr;
    double p_rob;
    double p_oracle;
    double rel_err_lr;  /* NaN when p_oracle == 0 */
    double rel_err_rob;
    int oracle_noisy;
    int flagged;
} spa_comparison_view;

typedef struct spa_exact_view {
    uint64_t favorable;
    uint64_t total;
    uint64_t ties;
    double p;
} spa_exact_view;

typedef struct spa_mc_view {
    uint64_t favorable;
    uint64_t b;
    uint64_t seed;
    double p_hat;
    double ci_low;
    double ci_high;
} spa_mc_view;

SPA_API const char* spa_version(void);
SPA_API const char* spa_status_string(spa_status status);
SPA_API const char* spa_last_error(void);

SPA_API void spa_saddle_config_default(spa_saddle_config* cfg);

/* Samples */
SPA_API spa_status spa_sample_create(const double* x, size_t n, spa_sample** out);
SPA_API spa_status spa_sample_load_csv(const char* path, spa_sample** out);
SPA_API size_t spa_sample_size(const spa_sample* sample);
SPA_API void spa_sample_free(spa_sample* sample);

/* Saddlepoint p-value. cfg may be NULL for defaults. */
SPA_API spa_status spa_pvalue(const spa_sample* sample, const spa_saddle_config* cfg, spa_report** out);
SPA_API spa_status spa_report_get(const spa_report* report, spa_report_view* out);
SPA_API const char* spa_report_json(const spa_report* report);
SPA_API void spa_report_free(spa_report* report);

/* Oracles. threads = 0 uses all cores; results do not depend on it. */
SPA_API spa_status spa_exact_pvalue(const spa_sample* sample, unsigned threads, spa_exact_view* out);
SPA_API spa_status spa_mc_pvalue(const spa_sample* sample, uint64_t b, uint64_t seed, unsigned threads,
                                 spa_mc_view* out);

/* SPA against an oracle. b and seed are ignored for SPA_ORACLE_EXACT. */
SPA_API spa_status spa_compare(const spa_sample* sample, const spa_saddle_config* cfg, spa_oracle_kind oracle,
                               uint64_t b, uint64_t seed, unsigned threads, spa_comparison** out);
SPA_API spa_status spa_comparison_get(const spa_comparison* cmp, spa_comparison_view* out);
SPA_API const char* spa_comparison_json(const spa_comparison* cmp);
SPA_API void spa_comparison_free(spa_comparison* cmp);

/* Convergence experiments from a key=value config. */
SPA_API spa_status spa_experiment_load(const char* path, spa_experiment** out);
SPA_API spa_status spa_experiment_parse(const char* text, spa_experiment** out);
SPA_API void spa_experiment_free(spa_experiment* exp);
SPA_API spa_status spa_experiment_run(const spa_experiment* exp, unsigned threads, spa_run** out);
SPA_API size_t spa_run_row_count(const spa_run* run);
SPA_API const char* spa_run_csv(const spa_run* run);
SPA_API const char* spa_run_summary_json(const spa_run* run);
SPA_API void spa_run_free(spa_run* run);

/* Built-in sanity battery. *summary is one "PASS|FAIL name" line per check,
 * valid until the next call on this thread. */
SPA_API spa_status spa_selftest(int* failures, const char** summary);

#ifdef __cplusplus
}
#endif

#endif /* SPA_SPA_H */
