#include "asymptotics.hpp"

#include <cmath>

#include "specfun.hpp"

namespace rmp::asymptotics {

namespace {
constexpr double kPi = 3.14159265358979323846264338;
}

ExponentLaw exponent_law(int beta, double nu_inf, int k) {
    if (beta != 1 && beta != 2 && beta != 4)
        throw std::invalid_argument("exponent_law: beta in {1, 2, 4}");
    if (k < 1) throw std::invalid_argument("exponent_law: k >= 1");
    if (nu_inf < 0.0) throw std::invalid_argument("exponent_law: nu_inf >= 0");
    ExponentLaw law;
    law.beta = beta;
    law.nu_inf = nu_inf;
    law.k = k;
    const double arg = beta * (nu_inf + k) / 2.0;
    law.mu = 0.5 * std::log(2.0 / beta) + 0.5 * specfun::polygamma(0, arg);
    law.sigma = std::sqrt(0.25 * specfun::polygamma(1, arg));
    return law;
}

double PhaseDensity::operator()(double theta) const {
    if (atomic)
        throw std::invalid_argument(
            "phase_density: beta=1 phase law is atomic; evaluate its atoms");
    if (beta == 2) return 1.0 / (2.0 * kPi);
    // beta = 4: (2/pi) sin^2(theta) on [0, pi]
    if (theta < 0.0 || theta > kPi) return 0.0;
    const double s = std::sin(theta);
    return 2.0 * s * s / kPi;
}

PhaseDensity phase_density(int beta) {
    if (beta != 1 && beta != 2 && beta != 4)
        throw std::invalid_argument("phase_density: beta in {1, 2, 4}");
    PhaseDensity d;
    d.beta = beta;
    if (beta == 1) {
        d.atomic = true;
        d.atom_locations = {0.0, kPi};
        d.atom_masses = {0.5, 0.5};
    }
    return d;
}

double triangular_density(double x) {
    return (x > 0.0 && x < 1.0) ? 2.0 * x : 0.0;
}

double triangular_cdf(double x) {
    const double c = std::min(std::max(x, 0.0), 1.0);
    return c * c;
}

std::vector<Peak> crystallized_peaks(int n_factors, double nu_inf, int k_max) {
    if (n_factors < 1)
        throw std::invalid_argument("crystallized_peaks: n >= 1");
    if (k_max < 1) throw std::invalid_argument("crystallized_peaks: k_max >= 1");
    std::vector<Peak> out;
    out.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) {
        const ExponentLaw law = exponent_law(2, nu_inf, k);
        out.push_back({std::exp(law.mu), law.sigma / std::sqrt(double(n_factors))});
    }
    return out;
}

}  // namespace rmp::asymptotics

