#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "specfun.hpp"

namespace rmp::wishart {

// Squared singular values of a beta=2 Gaussian product: exact finite-N
// formulas and their large-N limits.
struct WishartModel {
    int dim = 1;                         // N
    std::vector<double> charges = {0.0};  // nu_1 <= ... <= nu_n, all > -1

    int factors() const { return static_cast<int>(charges.size()); }
    void validate() const;
};

// w_j(x) = G^{n,0}_{0,n}(x | nu_1 + j, nu_2, ..., nu_n)
double weight(int j, double x, const WishartModel& model);

// M_{i,j} = Gamma(i + j + nu_1 + 1) prod_{l>=2} Gamma(i + nu_l + 1)
double bimoment(int i, int j, const WishartModel& model);

struct BiorthoTriple {
    int degree = 0;
    std::function<double(double)> p;    // monic polynomial
    std::function<double(double)> phi;  // dual weight combination
    double log_h = 0.0;                 // log of the squared norm
    double h() const { return std::exp(log_h); }
};
BiorthoTriple biortho(int k, const WishartModel& model);

// Signed log value of p_k(x) and phi_k(y); building blocks of the kernel.
specfun::SignedLog log_poly_p(int k, double x, const WishartModel& model);
specfun::SignedLog log_phi(int k, double y, const WishartModel& model,
                           const specfun::EvalPolicy& policy = {});

enum class KernelForm { sum, integral };
double kernel(int n_points, double x, double y, const WishartModel& model,
              KernelForm form = KernelForm::sum);

// s-th moment of the spectral density (s = 0 gives N).
double density_moment(int s, const WishartModel& model);

// Fuss-Catalan moments and density.
double fc_moment(int n, double s);
enum class FcForm { meijer, trig };
double fc_density(int n, double x, FcForm form = FcForm::meijer);
double fc_support_edge(int n);  // (n+1)^{n+1} / n^n

// g(z) = z G_n(z) from the trinomial equation, tracked from g -> 1 at
// large |z|; green returns G_n(z) itself.
std::complex<double> green(int n, std::complex<double> z);

// Macroscopic density for charges scaled as nu_i = alpha_i N.
double macro_density_scaled(int n, const std::vector<double>& alphas, double x);

enum class LimitKernel { bessel, sine, airy, meijer_hard };
struct HardEdgeParams {
    std::vector<double> charges;  // fixed charges nu_1..nu_m
    double order = 0.0;           // order for the bessel kernel
};
double kernel_limit(LimitKernel kind, const HardEdgeParams& params, double x,
                    double y);

// Mutual information of the n-fold progressive-scattering channel at SNR
// gamma, in bits.
double mutual_info(int n, double snr);
double mutual_info_quadrature(int n, double snr);  // cross-check route

// Connected two-point wide correlator; closed forms exist for n = 1, 2.
double wide_correlator(int n, double x, double y);

}  // namespace rmp::wishart
