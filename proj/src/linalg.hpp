#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace rmp::linalg {

// Singular values of a matrix given as unit-norm columns with per-column
// natural-log scales (true matrix = cols * diag(exp(logs))). One-sided
// Jacobi keeps full relative accuracy for every singular value even when
// the scales span thousands of e-folds, which plain SVD cannot do.
// Returns log(sigma) sorted descending.
std::vector<double> graded_log_singular_values(Eigen::MatrixXd cols,
                                               std::vector<double> logs);
std::vector<double> graded_log_singular_values(Eigen::MatrixXcd cols,
                                               std::vector<double> logs);

// Pfaffian of a skew-symmetric matrix (Parlett-Reid tridiagonalization with
// partial pivoting). Intended for dimensions up to a few dozen.
std::complex<double> pfaffian(Eigen::MatrixXcd a);

// QR-accumulated chain: X_n ... X_1 V0 = Q * diag(exp(c)) * V with Q an
// isometry and V bounded (rows renormalized in flight). The accumulated
// triangular factor is exact up to roundoff; no full product is formed.
template <typename Mat>
struct GradedChain {
    Mat q;                  // isometry, rows(last factor) x width
    Mat v;                  // width x width, row-bounded
    std::vector<double> c;  // row log-scales
    double spread() const;
};

GradedChain<Eigen::MatrixXd> accumulate_graded(
    const std::function<Eigen::MatrixXd(int)>& factor, int nfac,
    const Eigen::MatrixXd* v0 = nullptr);
GradedChain<Eigen::MatrixXcd> accumulate_graded(
    const std::function<Eigen::MatrixXcd(int)>& factor, int nfac,
    const Eigen::MatrixXcd* v0 = nullptr);

struct LogEigenvalue {
    double log_mod;
    double phase;
    // True eigenvalue when representable.
    std::complex<double> value() const {
        return std::polar(std::exp(log_mod), phase);
    }
};

// Eigenvalues of X_n ... X_1 through orthogonal (staircase) iteration on
// the factor stream, with the quasi-triangular form assembled from the
// graded accumulation so every modulus scale stays accurate. Factors are
// regenerated via `factor(i)` per sweep, so long chains never need to be
// stored. Converges in very few sweeps once the eigenvalue moduli are
// exponentially separated; short mildly-graded chains should use a dense
// solve instead.
std::vector<LogEigenvalue> product_eigenvalues_staircase(
    const std::function<Eigen::MatrixXd(int)>& factor, int nfac, int dim,
    int max_sweeps = 40);
std::vector<LogEigenvalue> product_eigenvalues_staircase(
    const std::function<Eigen::MatrixXcd(int)>& factor, int nfac, int dim,
    int max_sweeps = 40);

}  // namespace rmp::linalg
