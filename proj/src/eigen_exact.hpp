#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "specfun.hpp"

namespace rmp::eigenexact {

// Exact finite-N eigenvalue formulas for beta = 2, 4, 1 products.
struct EigenModel {
    int beta = 2;
    int dim = 1;                          // N
    std::vector<double> charges = {0.0};  // ascending, >= 0

    int factors() const { return static_cast<int>(charges.size()); }
    void validate() const;
};

// w_n^beta(r) = G^{n,0}_{0,n}((beta/2)^n r^2 | beta nu_1/2, ...).
double weight_beta(const EigenModel& model, double r);

// beta=2 kernel: w(|x|) sum_k (x y*)^k / (pi prod Gamma(nu+k+1)).
std::complex<double> kernel_complex(int n_points, std::complex<double> x,
                                    std::complex<double> y,
                                    const EigenModel& model);

// 2s-th absolute moment of the beta=2 spectral density.
double moments_complex(double s, const EigenModel& model);

// Macroscopic 2D density of z at |z| = r after N^{n/2} rescaling, for
// charges scaled as nu = alpha N; alpha empty means all zero.
double macro_radial(const EigenModel& model, double r,
                    const std::vector<double>& alphas = {});
double macro_radial_cdf(const EigenModel& model, double r,
                        const std::vector<double>& alphas = {});

// Microscopic kernel at the origin (beta=2, N -> infinity, no rescaling).
std::complex<double> kernel_origin(const EigenModel& model,
                                   std::complex<double> x,
                                   std::complex<double> y);

// beta=4 pre-kernel and one-point density.
std::complex<double> quaternion_prekernel(const EigenModel& model,
                                          std::complex<double> x,
                                          std::complex<double> y);
double quaternion_density(const EigenModel& model, std::complex<double> z);
// k-point correlation through the Pfaffian of the 2x2-block kernel.
double quaternion_correlation(const EigenModel& model,
                              const std::vector<std::complex<double>>& points);

// Density of the k-th independent radius (permanental factorization),
// k = 1..N; beta in {2, 4}.
double radial_factor(const EigenModel& model, int k, double r);
// Draw one radius per k by inverse-CDF tables; returns the (unsorted) set.
std::vector<double> sample_radii(const EigenModel& model, rng::Stream& st);

// Probability that the whole spectrum of a beta=1 product is real.
double prob_all_real(const EigenModel& model);

// Phase-averaged beta=4 one-point density at radius r; the inner series is
// truncated at N (pass 0 to keep the full N -> infinity form).
double phase_avg_quaternion_density(const EigenModel& model, double r,
                                    int truncate_at = 0);

// Bulk and edge comparison kernels for beta=2 (no product structure).
std::complex<double> kernel_bulk(std::complex<double> u,
                                 std::complex<double> v);
double kernel_edge_diag(std::complex<double> z_star, std::complex<double> u);

}  // namespace rmp::eigenexact
