/* rmprod: products of independent Gaussian random matrices.
 *
 * C API over the C++ core: opaque handles, integer status codes, and a
 * thread-local error message. All functions return RMP_OK (0) on success;
 * on failure the output parameters are left untouched and
 * rmp_last_error() describes what went wrong.
 */

#ifndef RMPROD_H
#define RMPROD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define RMP_OK 0
#define RMP_EINVAL 2   /* invalid argument / configuration */
#define RMP_EFAIL 3    /* evaluation or verification failure */
#define RMP_ENOMEM 4

typedef int rmp_status;

const char* rmp_version(void);
/* Message for the last failing call on this thread ("" if none). */
const char* rmp_last_error(void);

/* ---- ensembles ---------------------------------------------------------- */

typedef struct rmp_ensemble rmp_ensemble;

/* beta in {1,2,4}; dim >= 1; charges ascending, >= 0, length nfactors. */
rmp_status rmp_ensemble_create(int beta, int dim, const double* charges,
                               size_t nfactors, rmp_ensemble** out);
void rmp_ensemble_destroy(rmp_ensemble* e);

/* ---- direct analytic evaluators ----------------------------------------- */

/* Fuss-Catalan moment (1/(ns+1)) C((n+1)s, s). */
rmp_status rmp_fc_moment(int nfactors, double s, double* out);
/* Fuss-Catalan density; form 0 = Meijer, 1 = trigonometric. */
rmp_status rmp_fc_density(int nfactors, double x, int form, double* out);
/* Upper edge of the Fuss-Catalan support. */
rmp_status rmp_fc_support_edge(int nfactors, double* out);

/* Squared-singular-value correlation kernel; form 0 = finite sum,
 * 1 = integral representation. Charges/dim come from the ensemble. */
rmp_status rmp_wishart_kernel(const rmp_ensemble* e, double x, double y,
                              int form, double* out);
/* s-th moment of the finite-N spectral density (s = 0 gives N). */
rmp_status rmp_wishart_density_moment(const rmp_ensemble* e, int s,
                                      double* out);

/* Probability that a beta=1 product spectrum is purely real. */
rmp_status rmp_prob_all_real(const rmp_ensemble* e, double* out);

/* Mutual information (bits) of the n-fold channel at the given SNR. */
rmp_status rmp_mutual_info(int nfactors, double snr, double* out);

/* Large-n exponent law: mean and the fluctuation standard deviation. */
rmp_status rmp_exponent_law(int beta, double nu_inf, int k, double* mu,
                            double* sigma);

/* Macroscopic radial eigenvalue density / CDF at |z| = r (beta = 2 class);
 * alphas may be NULL for all-zero scaled charges. */
rmp_status rmp_macro_radial(const rmp_ensemble* e, double r,
                            const double* alphas, size_t nalphas, double* out);
rmp_status rmp_macro_radial_cdf(const rmp_ensemble* e, double r,
                                const double* alphas, size_t nalphas,
                                double* out);

/* Triangular law density / CDF. */
rmp_status rmp_triangular_density(double x, double* out);
rmp_status rmp_triangular_cdf(double x, double* out);

/* Meijer G-function G^{m,n}_{p,q}(x | a; b) for x > 0 and real
 * parameters (a has length p, b length q). */
rmp_status rmp_meijer_g(int m, int n, const double* a, size_t p,
                        const double* b, size_t q, double x, double* out);

/* ---- Monte Carlo -------------------------------------------------------- */

/* Finite-time exponents of one realization. lyapunov/stability/phases are
 * caller buffers of length dim; real_count may be NULL. */
rmp_status rmp_finite_time_exponents(const rmp_ensemble* e, uint64_t seed,
                                     uint64_t realization, double* lyapunov,
                                     double* stability, double* phases,
                                     int* real_count);

/* ---- experiments -------------------------------------------------------- */

typedef struct rmp_config rmp_config;
typedef struct rmp_result rmp_result;

rmp_status rmp_config_create(rmp_config** out);
void rmp_config_destroy(rmp_config* c);
rmp_status rmp_config_set_ensemble(rmp_config* c, const rmp_ensemble* e);
/* spectra | density | kernel | fc | real-prob | lyapunov | mutual-info |
 * verify */
rmp_status rmp_config_set_experiment(rmp_config* c, const char* name);
/* kind: "eigen" or "sv" */
rmp_status rmp_config_set_kind(rmp_config* c, const char* kind);
rmp_status rmp_config_set_samples(rmp_config* c, long samples);
rmp_status rmp_config_set_seed(rmp_config* c, uint64_t seed);
rmp_status rmp_config_set_threads(rmp_config* c, int threads);
rmp_status rmp_config_set_grid(rmp_config* c, double min, double max,
                               int points, int log_scale);

rmp_status rmp_run(const rmp_config* c, rmp_result** out);
void rmp_result_destroy(rmp_result* r);

/* Rendered result; format "csv" or "json". The returned buffer belongs to
 * the result handle and lives until the next render/destroy. */
rmp_status rmp_result_render(const rmp_result* r, const char* format,
                             const char** text);
/* Write the rendered result to a file. */
rmp_status rmp_result_write(const rmp_result* r, const char* format,
                            const char* path);
/* Scalar summary by name (for example "prob_all_real"). */
rmp_status rmp_result_scalar(const rmp_result* r, const char* name,
                             double* out);
/* 1 when the result is a verify run with failures, else 0. */
int rmp_result_verify_failed(const rmp_result* r);

#ifdef __cplusplus
}
#endif

#endif /* RMPROD_H */
