#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace rmp::quadrature {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_intervals = 4096;
};

struct QuadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Gauss(7)/Kronrod(15) on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

// Same rule for complex-valued integrands over a real interval.
std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const Options& opt = {});

// Semi-infinite [a, inf) via the substitution x = a + t/(1-t).
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        const Options& opt = {});

}  // namespace rmp::quadrature
