/* genbayes — simulation toolkit for loss-based posteriors over linear models
 * with heavy-tailed noise: data synthesis, random-walk Metropolis sampling,
 * least-squares and posterior-mean estimators, convergence-rate experiments,
 * and concentration diagnostics.
 *
 * All functions are thread-safe as long as each gb_config handle is used by
 * one thread at a time. Error details for the last failing call on the
 * current thread are available from gb_last_error().
 */
#ifndef GENBAYES_H
#define GENBAYES_H

#include <stddef.h>

#if defined(__GNUC__) || defined(__clang__)
#define GB_API __attribute__((visibility("default")))
#else
#define GB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gb_status {
  GB_OK = 0,
  GB_ERR_ARGUMENT = 1,     /* null pointer / unknown enum string */
  GB_ERR_CONFIG = 2,       /* malformed or incomplete configuration */
  GB_ERR_IO = 3,           /* unreadable input or unwritable output */
  GB_ERR_PRECONDITION = 4, /* an operation's stated precondition failed */
  GB_ERR_INTERNAL = 5      /* invariant breach or unexpected exception */
} gb_status;

/* Opaque configuration handle covering model, prior, chain protocol,
 * experiment grid, and diagnostics settings. */
typedef struct gb_config gb_config;

/* Library version, e.g. "0.1.0". Static storage. */
GB_API const char* gb_version(void);

/* Message for the current thread's most recent failure; empty string after
 * a success. Valid until the next gb_* call on this thread. */
GB_API const char* gb_last_error(void);

/* Fresh handle with default settings. Free with gb_config_free. */
GB_API gb_config* gb_config_create(void);

/* Replaces the handle's contents with the parsed file; on error the handle
 * is left unchanged. */
GB_API gb_status gb_config_load(gb_config* config, const char* path);

/* Key syntax "section.key" as in the config file, e.g. "experiment.dofs",
 * with the same value syntax ("5,10,20"). */
GB_API gb_status gb_config_set(gb_config* config, const char* key, const char* value);

/* Current value rendered as config-file text, NUL-terminated into buf
 * (silently truncated to cap - 1 characters). */
GB_API gb_status gb_config_get(const gb_config* config, const char* key, char* buf,
                        size_t cap);

GB_API void gb_config_free(gb_config* config);

/* Runs the full simulation grid and writes results.csv plus
 * manifest-run.json (and any requested per-replicate dumps) under out_dir.
 * If summary is non-null it receives a thread-local report string valid
 * until the next gb_* call on this thread. */
GB_API gb_status gb_run(const gb_config* config, const char* out_dir,
                 const char** summary);

/* Fits per-(dof, estimator) convergence rates from a results CSV and writes
 * rates.csv, per-fit plot series, and manifest-rates.json under out_dir.
 * statistic is "excess" or "raw"; mean_of_logs != 0 switches the replicate
 * aggregation to the geometric mean. */
GB_API gb_status gb_rates(const char* results_path, const char* out_dir,
                   const char* statistic, int mean_of_logs,
                   const char** summary);

/* probe is "bernstein", "envelope", "concentration", or "bounds"; writes the
 * probe's CSV and manifest under out_dir. */
GB_API gb_status gb_diagnose(const gb_config* config, const char* probe,
                      const char* out_dir, const char** summary);

/* Learning-rate bound min(1 - 2*sqrt(d/k), 1/(1+kappa)). A value <= 0 means
 * the bound certifies no positive rate; *vacuous (optional) is set to 0/1. */
GB_API gb_status gb_theorem3_bound(long d, long k, double kappa, double* value,
                            int* vacuous);

/* Learning-rate bound max((1 - 2*sqrt(c/r)) / (2 - min alpha), 1/(1+kappa)).
 * r may be INFINITY; requires c >= 1, r >= 4c, every alpha in (0,1]. */
GB_API gb_status gb_theorem2_bound(double c, double r, const double* alphas,
                            size_t n_alphas, double kappa, double* value);

#ifdef __cplusplus
}
#endif

#endif /* GENBAYES_H */
