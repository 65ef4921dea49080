#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmp::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr double kPi = 3.14159265358979323846264338;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// log|Gamma(x)| plus the sign of Gamma(x), valid for any real x off the
// non-positive integers.
struct SignedLog {
    double log;
    int sign;
};
SignedLog log_gamma_signed(double x);

// Principal-branch log Gamma.
std::complex<double> log_gamma(std::complex<double> z);
double log_gamma(double x);  // x > 0

double digamma(double x);
// order 0 -> digamma, order k -> k-th derivative of digamma. x > 0.
double polygamma(int order, double x);

// Generalised hypergeometric series pFq(a; b; z).
double hyper_pfq(std::span<const double> a, std::span<const double> b,
                 double z, double abs_tol = 1e-14, int max_terms = 100000);
std::complex<double> hyper_pfq(std::span<const double> a,
                               std::span<const double> b,
                               std::complex<double> z, double abs_tol = 1e-14,
                               int max_terms = 100000);

struct EvalPolicy {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    // Imaginary-part cutoff for the Mellin-Barnes line; 0 means derive it
    // from the Stirling tail bound at evaluation time.
    double contour_truncation = 0.0;
    int max_series_terms = 100000;
};

// G^{m,n}_{p,q}(x | a; b) with real parameter lists (p = a.size(),
// q = b.size()).
struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;
    std::vector<double> b;

    MeijerGSpec() = default;
    MeijerGSpec(int m_, int n_, std::vector<double> a_, std::vector<double> b_);

    int p() const { return static_cast<int>(a.size()); }
    int q() const { return static_cast<int>(b.size()); }
    // 2(m+n) - p - q; positive iff the vertical contour converges for
    // positive arguments.
    int contour_margin() const { return 2 * (m + n) - p() - q(); }
    void validate() const;
};

// Convenience builder for the ubiquitous G^{k,0}_{0,k}(x | b1..bk) weights.
MeijerGSpec meijer_weight_spec(std::vector<double> b);

// Primary entry point: picks vertical-contour quadrature or the residue
// series, whichever is valid for (spec, x). x > 0.
double meijer_g(const MeijerGSpec& spec, double x, const EvalPolicy& policy = {});

// Same value as (log |G|, sign); usable when the value itself would
// over- or underflow a double (kernel prefactors at large charges).
SignedLog meijer_g_log(const MeijerGSpec& spec, double x,
                       const EvalPolicy& policy = {});

// Individual strategies, exposed for cross-checking.
bool meijer_contour_applicable(const MeijerGSpec& spec);
bool meijer_residue_applicable(const MeijerGSpec& spec, double x);
double meijer_g_contour(const MeijerGSpec& spec, double x,
                        const EvalPolicy& policy = {});
double meijer_g_residues(const MeijerGSpec& spec, double x,
                         const EvalPolicy& policy = {});
// Residue path for coincident b-parameters: symmetric eps-splitting with a
// two-point Richardson extrapolation. Cross-check use only.
double meijer_g_residues_perturbed(const MeijerGSpec& spec, double x,
                                   double eps = 1e-6,
                                   const EvalPolicy& policy = {});

// Mellin transform of the Meijer G-function: closed-form gamma product.
std::complex<double> meijer_mellin_moment(const MeijerGSpec& spec,
                                          std::complex<double> s);

enum class Classic {
    bessel_j,
    bessel_k,
    airy_ai,
    erfc,
    upper_incomplete_gamma,
};
double classic_special(Classic kind, double order, double x);

// Derivative of the Airy function, needed for the Airy kernel diagonal.
double airy_ai_prime(double x);

}  // namespace rmp::specfun
