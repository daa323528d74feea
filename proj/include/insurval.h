/* insurval — two-step generalised-regression valuation engine.
 *
 * C interface to the shared library: opaque handles, integer status
 * codes, thread-local error messages. Status codes match the CLI exit
 * codes so front-ends can pass them through.
 */
#ifndef INSURVAL_H
#define INSURVAL_H

#include <stddef.h>

#if defined(_WIN32)
#define IV_API __declspec(dllexport)
#else
#define IV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define IV_OK 0
#define IV_ERR_CONFIG 2         /* invalid config / parameters / IO */
#define IV_ERR_NONCONVERGENCE 3 /* a numerical solver failed */
#define IV_ERR_INVALID 4        /* null pointer or bad argument */

typedef struct iv_config iv_config;

IV_API const char* iv_version(void);

/* message of the last failing call on this thread; empty if none */
IV_API const char* iv_last_error(void);

/* ---- run configuration ---- */
IV_API int iv_config_load(const char* path, iv_config** out);
IV_API int iv_config_parse(const char* text, iv_config** out);
IV_API int iv_config_set_seed(iv_config* cfg, unsigned long long seed);
IV_API int iv_config_set_paths(iv_config* cfg, unsigned long long n_paths);
IV_API int iv_config_set_output_dir(iv_config* cfg, const char* dir);
IV_API void iv_config_free(iv_config* cfg);

/* ---- pipeline commands ----
 * Each writes CSV outputs plus summary.json under the configured output
 * directory. On success *summary receives a malloc'd human-readable
 * report; release it with iv_string_free. */
IV_API int iv_run_simulate(const iv_config* cfg, char** summary);
IV_API int iv_run_value_one_period(const iv_config* cfg, char** summary);
IV_API int iv_run_value_dynamic(const iv_config* cfg, char** summary);
IV_API int iv_report(const char* out_dir, char** text);
IV_API void iv_string_free(char* s);

/* ---- empirical risk statistics on plain arrays ---- */
IV_API int iv_var(const double* values, size_t n, double alpha, double* out);
IV_API int iv_tvar(const double* values, size_t n, double alpha, double* out);
IV_API int iv_dtvar(const double* values, size_t n, double alpha, double* out);
IV_API int iv_expectile(const double* values, size_t n, double tau, double* out);
IV_API int iv_kb_error(const double* values, size_t n, double alpha, double* out);

#ifdef __cplusplus
}
#endif

#endif /* INSURVAL_H */
