#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace rmp::sampling {

namespace {

using Cplx = std::complex<double>;

bool charge_is_integer(double nu) {
    return std::abs(nu - std::round(nu)) < 1e-12;
}

}  // namespace

bool EnsembleSpec::integer_charges() const {
    for (double nu : charges)
        if (!charge_is_integer(nu)) return false;
    return true;
}

void EnsembleSpec::validate() const {
    if (beta != 1 && beta != 2 && beta != 4)
        throw std::invalid_argument("EnsembleSpec: beta must be 1, 2 or 4");
    if (dim < 1) throw std::invalid_argument("EnsembleSpec: dim >= 1");
    if (charges.empty())
        throw std::invalid_argument("EnsembleSpec: at least one factor");
    for (size_t i = 0; i < charges.size(); ++i) {
        if (charges[i] < 0.0)
            throw std::invalid_argument("EnsembleSpec: charges must be >= 0");
        if (i > 0 && charges[i] < charges[i - 1])
            throw std::invalid_argument("EnsembleSpec: charges must ascend");
    }
}

rng::Stream factor_stream(std::uint64_t seed, std::uint64_t realization,
                          std::uint32_t factor) {
    return rng::Stream(seed, (realization << 32) | factor);
}

Eigen::MatrixXd ginibre_real(int rows, int cols, rng::Stream& st) {
    Eigen::MatrixXd x(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) x(i, j) = st.next_gaussian();
    return x;
}

Eigen::MatrixXcd ginibre_complex(int rows, int cols, rng::Stream& st) {
    Eigen::MatrixXcd x(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) x(i, j) = st.next_complex_gaussian();
    return x;
}

Eigen::MatrixXcd ginibre_quaternion(int rows, int cols, rng::Stream& st) {
    // E[q^dagger q] = 1 normalization: u, v have E|u|^2 = 1/2.
    Eigen::MatrixXcd x(2 * rows, 2 * cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const Cplx u = 0.5 * Cplx(st.next_gaussian(), st.next_gaussian());
            const Cplx v = 0.5 * Cplx(st.next_gaussian(), st.next_gaussian());
            x(2 * i, 2 * j) = u;
            x(2 * i, 2 * j + 1) = v;
            x(2 * i + 1, 2 * j) = -std::conj(v);
            x(2 * i + 1, 2 * j + 1) = std::conj(u);
        }
    return x;
}

Eigen::MatrixXcd ginibre(int beta, int rows, int cols, rng::Stream& st) {
    switch (beta) {
        case 1:
            return ginibre_real(rows, cols, st).cast<Cplx>();
        case 2:
            return ginibre_complex(rows, cols, st);
        case 4:
            return ginibre_quaternion(rows, cols, st);
    }
    throw std::invalid_argument("ginibre: beta must be 1, 2 or 4");
}

namespace {

// QR with the R-diagonal phases absorbed into Q, so R has positive
// diagonal and Q is Haar when the input is Ginibre.
template <typename Mat>
Mat haar_from_qr(const Mat& g) {
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(g.rows(), g.cols());
    Mat r = q.adjoint() * g;
    for (int j = 0; j < q.cols(); ++j) {
        const auto d = r(j, j);
        const double ad = std::abs(d);
        if (ad > 0.0) q.col(j) *= d / ad;
    }
    return q;
}

}  // namespace

Eigen::MatrixXd haar_orthogonal(int n, rng::Stream& st) {
    return haar_from_qr<Eigen::MatrixXd>(ginibre_real(n, n, st));
}

Eigen::MatrixXcd haar_unitary(int n, rng::Stream& st) {
    return haar_from_qr<Eigen::MatrixXcd>(ginibre_complex(n, n, st));
}

Eigen::MatrixXcd haar_symplectic(int n, rng::Stream& st) {
    // Modified Gram-Schmidt in quaternion arithmetic on the 2x2 embedding;
    // the R diagonal comes out positive real, so Q is Haar on USp(2n).
    Eigen::MatrixXcd a = ginibre_quaternion(n, n, st);
    for (int j = 0; j < n; ++j) {
        auto cj = a.middleCols(2 * j, 2);
        for (int i = 0; i < j; ++i) {
            const auto ci = a.middleCols(2 * i, 2);
            const Eigen::Matrix2cd qij = ci.adjoint() * cj;  // quaternion
            cj -= ci * qij;
        }
        const double nrm = cj.norm() / std::sqrt(2.0);  // |column| over H
        if (nrm == 0.0) throw std::runtime_error("haar_symplectic: rank loss");
        cj /= nrm;
    }
    return a;
}

Eigen::MatrixXcd haar(int beta, int n, rng::Stream& st) {
    switch (beta) {
        case 1:
            return haar_orthogonal(n, st).cast<Cplx>();
        case 2:
            return haar_unitary(n, st);
        case 4:
            return haar_symplectic(n, st);
    }
    throw std::invalid_argument("haar: beta must be 1, 2 or 4");
}

namespace {

template <typename Mat>
Mat induced_from_svd(const Mat& rect, const Mat& u, const Mat& v, int n,
                     int pair) {
    Eigen::BDCSVD<Mat> svd(rect);
    Eigen::VectorXd sv = svd.singularValues();
    Mat sigma = Mat::Zero(n * pair, n * pair);
    if (pair == 1) {
        for (int i = 0; i < n; ++i) sigma(i, i) = sv(i);
    } else {
        // Kramers pairs: symmetrize numerically-degenerate neighbours.
        for (int i = 0; i < n; ++i) {
            const double s = 0.5 * (sv(2 * i) + sv(2 * i + 1));
            sigma(2 * i, 2 * i) = s;
            sigma(2 * i + 1, 2 * i + 1) = s;
        }
    }
    return u * sigma * v.adjoint();
}

}  // namespace

Eigen::MatrixXd induced_square_real(int n, int nu, rng::Stream& st) {
    if (nu < 0) throw std::invalid_argument("induced_square: nu >= 0");
    if (nu == 0) return ginibre_real(n, n, st);
    const Eigen::MatrixXd rect = ginibre_real(n + nu, n, st);
    const Eigen::MatrixXd u = haar_orthogonal(n, st);
    const Eigen::MatrixXd v = haar_orthogonal(n, st);
    return induced_from_svd<Eigen::MatrixXd>(rect, u, v, n, 1);
}

Eigen::MatrixXcd induced_square(int beta, int n, int nu, rng::Stream& st) {
    if (nu < 0) throw std::invalid_argument("induced_square: nu >= 0");
    switch (beta) {
        case 1:
            return induced_square_real(n, nu, st).cast<Cplx>();
        case 2: {
            if (nu == 0) return ginibre_complex(n, n, st);
            const Eigen::MatrixXcd rect = ginibre_complex(n + nu, n, st);
            const Eigen::MatrixXcd u = haar_unitary(n, st);
            const Eigen::MatrixXcd v = haar_unitary(n, st);
            return induced_from_svd<Eigen::MatrixXcd>(rect, u, v, n, 1);
        }
        case 4: {
            if (nu == 0) return ginibre_quaternion(n, n, st);
            const Eigen::MatrixXcd rect = ginibre_quaternion(n + nu, n, st);
            const Eigen::MatrixXcd u = haar_symplectic(n, st);
            const Eigen::MatrixXcd v = haar_symplectic(n, st);
            return induced_from_svd<Eigen::MatrixXcd>(rect, u, v, n, 2);
        }
    }
    throw std::invalid_argument("induced_square: beta must be 1, 2 or 4");
}

Eigen::MatrixXcd elliptic(int n, double tau, rng::Stream& st) {
    if (tau < -1.0 || tau > 1.0)
        throw std::invalid_argument("elliptic: tau in [-1, 1]");
    const Eigen::MatrixXcd x = ginibre_complex(n, n, st);
    const Eigen::MatrixXcd h = 0.5 * (x + x.adjoint());
    const Eigen::MatrixXcd a = 0.5 * (x - x.adjoint());
    // Normalized so tau = 0 reproduces the plain Ginibre entry variance.
    return std::sqrt(1.0 + tau) * h + std::sqrt(1.0 - tau) * a;
}

namespace {

std::vector<std::pair<int, int>> chain_dims(const EnsembleSpec& spec,
                                            ChainMode mode) {
    spec.validate();
    std::vector<std::pair<int, int>> dims(spec.factors());
    if (mode == ChainMode::square_induced) {
        for (auto& d : dims) d = {spec.dim, spec.dim};
        return dims;
    }
    if (!spec.integer_charges())
        throw std::invalid_argument(
            "product_chain: rectangular mode requires integer charges");
    double prev = 0.0;
    for (int i = 0; i < spec.factors(); ++i) {
        dims[i] = {spec.dim + int(std::round(spec.charges[i])),
                   spec.dim + int(std::round(prev))};
        prev = spec.charges[i];
    }
    return dims;
}

}  // namespace

std::vector<Eigen::MatrixXcd> product_chain(const EnsembleSpec& spec,
                                            ChainMode mode, std::uint64_t seed,
                                            std::uint64_t realization) {
    const auto dims = chain_dims(spec, mode);
    std::vector<Eigen::MatrixXcd> out(spec.factors());
    for (int i = 0; i < spec.factors(); ++i) {
        rng::Stream st = factor_stream(seed, realization, i);
        if (mode == ChainMode::rectangular) {
            out[i] = ginibre(spec.beta, dims[i].first, dims[i].second, st);
        } else {
            out[i] = induced_square(spec.beta, spec.dim,
                                    int(std::round(spec.charges[i])), st);
        }
    }
    return out;
}

std::vector<Eigen::MatrixXd> product_chain_real(const EnsembleSpec& spec,
                                                ChainMode mode,
                                                std::uint64_t seed,
                                                std::uint64_t realization) {
    if (spec.beta != 1)
        throw std::invalid_argument("product_chain_real: beta = 1 only");
    const auto dims = chain_dims(spec, mode);
    std::vector<Eigen::MatrixXd> out(spec.factors());
    for (int i = 0; i < spec.factors(); ++i) {
        rng::Stream st = factor_stream(seed, realization, i);
        if (mode == ChainMode::rectangular)
            out[i] = ginibre_real(dims[i].first, dims[i].second, st);
        else
            out[i] = induced_square_real(spec.dim,
                                         int(std::round(spec.charges[i])), st);
    }
    return out;
}

// ---- graded triangular accumulation ---------------------------------------

namespace {

template <typename Mat>
std::vector<double> log_sq_sv_impl(const std::function<Mat(int)>& factor,
                                   int n) {
    linalg::GradedChain<Mat> g = linalg::accumulate_graded(factor, n);
    const int width = static_cast<int>(g.v.rows());
    // Columns of T^T are the rows of V scaled by e^{c}.
    Mat cols(width, width);
    for (int k = 0; k < width; ++k) cols.col(k) = g.v.row(k).transpose();
    std::vector<double> ls = linalg::graded_log_singular_values(cols, g.c);
    std::vector<double> out(ls.size());
    for (size_t i = 0; i < ls.size(); ++i)
        out[out.size() - 1 - i] = 2.0 * ls[i];  // ascending log(sigma^2)
    return out;
}

// Scale grading (singular-value log range) below which a dense solve of the
// rescaled product keeps every eigenvalue accurate. The eigenvalue moduli
// span about half the singular spread, leaving ~10 safety digits against
// eps * |z_max| noise on the smallest ones.
constexpr double kDenseEigenSpread = 56.0;

// Dense product with a running log rescale every 10 multiplications.
template <typename Mat>
std::pair<Mat, double> dense_product(const std::function<Mat(int)>& factor,
                                     int n) {
    Mat p = factor(0);
    double logscale = 0.0;
    for (int i = 1; i < n; ++i) {
        p = (factor(i) * p).eval();
        if (i % 10 == 9) {
            const double mx = p.cwiseAbs().maxCoeff();
            if (mx > 0.0) {
                p /= mx;
                logscale += std::log(mx);
            }
        }
    }
    const double mx = p.cwiseAbs().maxCoeff();
    if (mx > 0.0) {
        p /= mx;
        logscale += std::log(mx);
    }
    return {p, logscale};
}

std::vector<linalg::LogEigenvalue> dense_eigenvalues(
    const Eigen::MatrixXcd& p, double logscale) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(p, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues: solver did not converge");
    std::vector<linalg::LogEigenvalue> out;
    out.reserve(p.rows());
    for (int i = 0; i < p.rows(); ++i) {
        const Cplx z = es.eigenvalues()(i);
        out.push_back({std::log(std::abs(z)) + logscale, std::arg(z)});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.log_mod > b.log_mod; });
    return out;
}

std::vector<linalg::LogEigenvalue> dense_eigenvalues(const Eigen::MatrixXd& p,
                                                     double logscale) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(p, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues: solver did not converge");
    std::vector<linalg::LogEigenvalue> out;
    out.reserve(p.rows());
    for (int i = 0; i < p.rows(); ++i) {
        const Cplx z = es.eigenvalues()(i);
        out.push_back({std::log(std::abs(z)) + logscale, std::arg(z)});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.log_mod > b.log_mod; });
    return out;
}

template <typename Mat>
std::vector<linalg::LogEigenvalue> eigenvalues_log_impl(
    const std::function<Mat(int)>& factor, int n) {
    if (n == 0) throw std::invalid_argument("eigenvalues: empty chain");
    {
        Mat first = factor(0);
        if (first.rows() != first.cols())
            throw std::invalid_argument("eigenvalues: product must be square");
    }
    const linalg::GradedChain<Mat> g = linalg::accumulate_graded(factor, n);
    if (g.q.rows() != g.v.rows())
        throw std::invalid_argument(
            "eigenvalues: the chained product is not square");
    if (g.spread() <= kDenseEigenSpread) {
        auto [p, logscale] = dense_product<Mat>(factor, n);
        return dense_eigenvalues(p, logscale);
    }
    return linalg::product_eigenvalues_staircase(factor, n,
                                                 int(g.v.rows()), 40);
}

template <typename Mat>
std::function<Mat(int)> from_vector(const std::vector<Mat>& factors) {
    return [&factors](int i) { return factors[i]; };
}

}  // namespace

std::vector<linalg::LogEigenvalue> eigenvalues_log(
    const std::vector<Eigen::MatrixXcd>& factors) {
    return eigenvalues_log_impl<Eigen::MatrixXcd>(
        from_vector(factors), static_cast<int>(factors.size()));
}

std::vector<linalg::LogEigenvalue> eigenvalues_log(
    const std::vector<Eigen::MatrixXd>& factors) {
    return eigenvalues_log_impl<Eigen::MatrixXd>(
        from_vector(factors), static_cast<int>(factors.size()));
}

std::vector<std::complex<double>> eigenvalues(
    const std::vector<Eigen::MatrixXcd>& factors) {
    std::vector<std::complex<double>> out;
    for (const auto& e : eigenvalues_log(factors)) out.push_back(e.value());
    return out;
}

std::vector<std::complex<double>> eigenvalues(
    const std::vector<Eigen::MatrixXd>& factors) {
    std::vector<std::complex<double>> out;
    for (const auto& e : eigenvalues_log(factors)) out.push_back(e.value());
    return out;
}

std::vector<double> log_squared_singular_values(
    const std::vector<Eigen::MatrixXcd>& factors) {
    return log_sq_sv_impl<Eigen::MatrixXcd>(from_vector(factors),
                                            static_cast<int>(factors.size()));
}

std::vector<double> log_squared_singular_values(
    const std::vector<Eigen::MatrixXd>& factors) {
    return log_sq_sv_impl<Eigen::MatrixXd>(from_vector(factors),
                                           static_cast<int>(factors.size()));
}

std::vector<double> squared_singular_values(
    const std::vector<Eigen::MatrixXcd>& factors) {
    std::vector<double> out = log_squared_singular_values(factors);
    for (double& v : out) v = std::exp(v);
    return out;
}

std::vector<double> squared_singular_values(
    const std::vector<Eigen::MatrixXd>& factors) {
    std::vector<double> out = log_squared_singular_values(factors);
    for (double& v : out) v = std::exp(v);
    return out;
}

// ---- finite-time exponents -------------------------------------------------

namespace {

// Classify eigenvalues of a real chain: exact conjugate pairing first, then
// a relative imaginary-part threshold; parity of the real count is enforced
// by re-pairing with a widened tolerance.
int count_real(const std::vector<linalg::LogEigenvalue>& ev, int dim) {
    auto count_at = [&](double tol) {
        int k = 0;
        for (const auto& e : ev)
            if (std::abs(std::sin(e.phase)) <= tol) ++k;
        return k;
    };
    int real_count = count_at(1e-6);
    if (real_count % 2 != dim % 2) {
        const int widened = count_at(1e-4);
        if (widened % 2 == dim % 2) {
            real_count = widened;
            std::cerr << "[sampling] real-eigenvalue parity fixed by widened "
                         "tolerance\n";
        } else {
            real_count = widened - ((widened % 2 + 2 - dim % 2) % 2);
            std::cerr << "[sampling] real-eigenvalue parity forced\n";
        }
    }
    return real_count;
}

}  // namespace

std::vector<double> lyapunov_exponents(const EnsembleSpec& spec,
                                       std::uint64_t seed,
                                       std::uint64_t realization) {
    spec.validate();
    if (!spec.integer_charges())
        throw std::invalid_argument(
            "sampling requires integer charges (rectangular construction)");
    const int n = spec.factors();
    const auto mode = ChainMode::rectangular;
    const auto dims = chain_dims(spec, mode);
    std::vector<double> logs;
    if (spec.beta == 1) {
        auto gen = [&](int i) {
            rng::Stream st = factor_stream(seed, realization, i);
            return ginibre_real(dims[i].first, dims[i].second, st);
        };
        logs = log_sq_sv_impl<Eigen::MatrixXd>(gen, n);
    } else {
        auto gen = [&](int i) {
            rng::Stream st = factor_stream(seed, realization, i);
            return ginibre(spec.beta, dims[i].first, dims[i].second, st);
        };
        logs = log_sq_sv_impl<Eigen::MatrixXcd>(gen, n);
    }
    // beta = 4: Kramers-degenerate pairs, deduplicated to dim values.
    if (spec.beta == 4) {
        std::vector<double> dedup;
        for (size_t i = 0; i + 1 < logs.size(); i += 2)
            dedup.push_back(0.5 * (logs[i] + logs[i + 1]));
        logs.swap(dedup);
    }
    for (double& v : logs) v /= 2.0 * n;
    return logs;  // ascending already
}

FiniteTimeExponents finite_time_exponents(const EnsembleSpec& spec,
                                          std::uint64_t seed,
                                          std::uint64_t realization) {
    spec.validate();
    if (!spec.integer_charges())
        throw std::invalid_argument(
            "sampling requires integer charges (rectangular construction)");
    FiniteTimeExponents out;
    out.n = spec.factors();
    out.lyapunov = lyapunov_exponents(spec, seed, realization);

    const int n = spec.factors();
    std::vector<linalg::LogEigenvalue> ev;
    if (spec.beta == 1) {
        auto gen = [&](int i) {
            rng::Stream st = factor_stream(seed, realization, i);
            return induced_square_real(spec.dim,
                                       int(std::round(spec.charges[i])), st);
        };
        ev = eigenvalues_log_impl<Eigen::MatrixXd>(gen, n);
        out.real_count = count_real(ev, spec.dim);
    } else {
        auto gen = [&](int i) {
            rng::Stream st = factor_stream(seed, realization, i);
            return induced_square(spec.beta, spec.dim,
                                  int(std::round(spec.charges[i])), st);
        };
        ev = eigenvalues_log_impl<Eigen::MatrixXcd>(gen, n);
        out.real_count = 0;
        if (spec.beta == 4) {
            // keep upper-half-plane representatives of the exact pairs
            std::vector<linalg::LogEigenvalue> dedup;
            for (size_t i = 0; i + 1 < ev.size(); i += 2) {
                const auto& a = ev[i];
                const auto& b = ev[i + 1];
                dedup.push_back(a.phase >= 0.0 ? a : b);
            }
            ev.swap(dedup);
        }
    }
    std::vector<std::pair<double, double>> zs;
    for (const auto& e : ev) zs.push_back({e.log_mod / n, e.phase});
    std::sort(zs.begin(), zs.end());
    for (const auto& [z, th] : zs) {
        out.stability.push_back(z);
        out.phases.push_back(th);
    }
    return out;
}

}  // namespace rmp::sampling

