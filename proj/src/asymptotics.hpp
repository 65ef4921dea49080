#pragma once

#include <stdexcept>
#include <vector>

namespace rmp::asymptotics {

// Large-n law of the k-th stability/Lyapunov exponent:
// mu = (1/2) log(2/beta) + (1/2) psi(beta (nu + k)/2),
// sigma^2 = (1/4) psi'(beta (nu + k)/2).
struct ExponentLaw {
    int beta = 2;
    double nu_inf = 0.0;
    int k = 1;
    double mu = 0.0;
    double sigma = 0.0;  // standard deviation (sqrt of the paper's sigma^2)
};

ExponentLaw exponent_law(int beta, double nu_inf, int k);

// Limiting phase distribution of the eigenvalues. beta=1 is atomic
// (masses 1/2 at 0 and pi), so it is described, not evaluated pointwise.
struct PhaseDensity {
    int beta = 2;
    bool atomic = false;
    std::vector<double> atom_locations;
    std::vector<double> atom_masses;
    // Density value at theta; throws for the atomic (beta=1) case.
    double operator()(double theta) const;
};
PhaseDensity phase_density(int beta);

// Triangular law: density 2x on (0,1).
double triangular_density(double x);
double triangular_cdf(double x);

// Crystallized-radii prediction for the beta=2 origin density at factor
// count n: peak radii exp(mu_k) with widths sigma_k / sqrt(n).
struct Peak {
    double radius;
    double width;
};
std::vector<Peak> crystallized_peaks(int n_factors, double nu_inf, int k_max);

}  // namespace rmp::asymptotics
