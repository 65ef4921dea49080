#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rmp::linalg {

namespace {

using Cplx = std::complex<double>;

template <typename Scalar>
std::vector<double> jacobi_impl(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v,
    std::vector<double> s) {
    const int n = static_cast<int>(v.cols());
    if (static_cast<int>(s.size()) != n)
        throw std::invalid_argument("graded svd: scale/column mismatch");
    for (int j = 0; j < n; ++j) {
        const double nrm = v.col(j).norm();
        if (nrm == 0.0) {
            s[j] = -std::numeric_limits<double>::infinity();
            continue;
        }
        v.col(j) /= nrm;
        s[j] += std::log(nrm);
    }
    // de Rijk ordering: largest scale first.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return s[a] > s[b]; });
    {
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vv(v.rows(), n);
        std::vector<double> ss(n);
        for (int j = 0; j < n; ++j) {
            vv.col(j) = v.col(order[j]);
            ss[j] = s[order[j]];
        }
        v.swap(vv);
        s.swap(ss);
    }

    const double tol = 1e-15;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (!std::isfinite(s[p]) || !std::isfinite(s[q])) continue;
                // Keep the larger scale in the p role.
                int P = p, Q = q;
                if (s[Q] > s[P]) std::swap(P, Q);
                const Scalar d = v.col(P).dot(v.col(Q));  // <v_P, v_Q>
                const double ad = std::abs(d);
                off = std::max(off, ad);
                if (ad < tol) continue;
                const double delta = s[Q] - s[P];  // <= 0
                if (delta < -36.0) {
                    // Graded limit: Gram-Schmidt step on the smaller column.
                    v.col(Q) -= d * v.col(P);
                    const double nq = v.col(Q).norm();
                    if (nq == 0.0) {
                        s[Q] = -std::numeric_limits<double>::infinity();
                        continue;
                    }
                    v.col(Q) /= nq;
                    s[Q] += std::log(nq);
                    continue;
                }
                // True columns u = e^{s} v; rotate the pair (P, Q) so they
                // become orthogonal, with the phase of d absorbed into Q.
                const Scalar phase = d / ad;
                const double tau = std::sinh(delta) / ad;
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double sn = c * t;
                const Scalar alpha = Scalar(sn * std::exp(delta)) / phase;
                const Scalar beta = Scalar(sn * std::exp(-delta)) * phase;
                Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vp = v.col(P);
                v.col(P) = c * vp - alpha * v.col(Q);
                v.col(Q) = beta * vp + c * v.col(Q);
                for (int col : {P, Q}) {
                    const double nrm = v.col(col).norm();
                    if (nrm == 0.0) {
                        s[col] = -std::numeric_limits<double>::infinity();
                        continue;
                    }
                    v.col(col) /= nrm;
                    s[col] += std::log(nrm);
                }
            }
        }
        if (off < tol) break;
    }
    std::sort(s.begin(), s.end(), std::greater<double>());
    return s;
}

template <typename Scalar>
GradedChain<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>
accumulate_impl(
    const std::function<
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(int)>& factor,
    int nfac,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>* v0) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    GradedChain<Mat> g;
    int width = 0;
    for (int i = 0; i < nfac; ++i) {
        Mat x = factor(i);
        Mat m;
        if (i == 0) {
            m = (v0 != nullptr) ? Mat(x * (*v0)) : x;
            width = static_cast<int>(m.cols());
            g.v = Mat::Identity(width, width);
            g.c.assign(width, 0.0);
        } else {
            if (x.cols() != g.q.rows())
                throw std::invalid_argument("factor dimensions do not chain");
            m = x * g.q;
        }
        if (m.rows() < width)
            throw std::invalid_argument(
                "accumulate_graded: factor shrinks the chain width");
        Eigen::HouseholderQR<Mat> qr(m);
        g.q = qr.householderQ() * Mat::Identity(m.rows(), width);
        Mat r = g.q.adjoint() * m;
        // T <- R T: split R row-wise by |R_kk| and push the conjugated,
        // phase-carrying unit-triangular part into V. The upper-triangular
        // conjugation by the (a.s. ordered) scales contracts, so V stays
        // bounded; row rescaling mops up the rest.
        Mat w = Mat::Zero(width, width);
        for (int k = 0; k < width; ++k) {
            const double dk = std::abs(r(k, k));
            if (!(dk > 0.0))
                throw std::runtime_error("accumulate_graded: rank deficiency");
            for (int l = k; l < width; ++l) {
                const double e = g.c[l] - g.c[k];
                if (e > 600.0)
                    throw std::overflow_error(
                        "accumulate_graded: scale inversion overflow");
                w(k, l) = (r(k, l) / dk) * std::exp(std::min(e, 600.0));
            }
            g.c[k] += std::log(dk);
        }
        g.v = (w * g.v).eval();
        for (int k = 0; k < width; ++k) {
            const double mx = g.v.row(k).cwiseAbs().maxCoeff();
            if (mx > 0.0) {
                g.v.row(k) /= mx;
                g.c[k] += std::log(mx);
            }
        }
    }
    return g;
}

// Block-read eigenvalues of S = M diag(e^c) Vt when M = V^dagger Q has
// settled into block-diagonal form (unsplit modulus clusters stay together
// as blocks of any size). Returns false when the structure has not formed.
template <typename Mat>
bool extract_block_eigen(const Mat& m, const GradedChain<Mat>& g,
                         std::vector<LogEigenvalue>& out) {
    const int dim = static_cast<int>(m.rows());
    // Block boundaries where the first subdiagonal of M is negligible.
    std::vector<int> starts{0};
    for (int j = 0; j + 1 < dim; ++j)
        if (std::abs(m(j + 1, j)) <= 1e-8) starts.push_back(j + 1);
    starts.push_back(dim);
    // Entries of M below the first subdiagonal must vanish across block
    // boundaries; inside a block anything goes.
    for (int col = 0; col < dim; ++col) {
        const auto blk_end =
            *std::upper_bound(starts.begin(), starts.end(), col);
        for (int row = blk_end; row < dim; ++row)
            if (row > col + 1 && std::abs(m(row, col)) > 1e-6) return false;
    }
    out.clear();
    out.reserve(dim);
    for (size_t bi = 0; bi + 1 < starts.size(); ++bi) {
        const int j0 = starts[bi];
        const int bsz = starts[bi + 1] - j0;
        if (bsz == 1) {
            const Cplx lam = Cplx(m(j0, j0)) * Cplx(g.v(j0, j0));
            out.push_back({g.c[j0] + std::log(std::abs(lam)), std::arg(lam)});
            continue;
        }
        // Unsplit cluster: scales inside stay comparable, so rebase by the
        // block mean and solve the small dense block.
        double mid = 0.0;
        double lo = g.c[j0], hi = g.c[j0];
        for (int k = 0; k < bsz; ++k) {
            mid += g.c[j0 + k];
            lo = std::min(lo, g.c[j0 + k]);
            hi = std::max(hi, g.c[j0 + k]);
        }
        mid /= bsz;
        if (hi - lo > 300.0) return false;  // not actually a cluster yet
        Eigen::MatrixXcd sb = Eigen::MatrixXcd::Zero(bsz, bsz);
        for (int i = 0; i < bsz; ++i)
            for (int l = 0; l < bsz; ++l) {
                Cplx acc = 0.0;
                for (int k = 0; k <= l; ++k)  // Vt upper triangular
                    acc += Cplx(m(j0 + i, j0 + k)) *
                           std::exp(g.c[j0 + k] - mid) *
                           Cplx(g.v(j0 + k, j0 + l));
                sb(i, l) = acc;
            }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sb, false);
        if (es.info() != Eigen::Success) return false;
        for (int i = 0; i < bsz; ++i) {
            const Cplx lam = es.eigenvalues()(i);
            out.push_back({mid + std::log(std::abs(lam)), std::arg(lam)});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const LogEigenvalue& x, const LogEigenvalue& y) {
                  if (x.log_mod != y.log_mod) return x.log_mod > y.log_mod;
                  return x.phase > y.phase;  // stable order within pairs
              });
    return true;
}

template <typename Scalar>
std::vector<LogEigenvalue> staircase_impl(
    const std::function<
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(int)>& factor,
    int nfac, int dim, int max_sweeps) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat v = Mat::Identity(dim, dim);
    std::vector<LogEigenvalue> prev, best;
    bool have_prev = false;
    double best_delta = 1e300;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        GradedChain<Mat> g = accumulate_impl<Scalar>(factor, nfac, &v);
        if (g.q.rows() != dim)
            throw std::invalid_argument(
                "product_eigenvalues_staircase: product must be square");
        // Y V = Q diag(e^c) Vt; at convergence M = V^dagger Q is block
        // diagonal and S = M diag(e^c) Vt is a Schur form of Y assembled
        // without mixing modulus scales. Off-block residue contaminates
        // small scales, so the stopping rule is stability of the
        // block-read eigenvalues between successive sweeps.
        const Mat m = v.adjoint() * g.q;
        std::vector<LogEigenvalue> cur;
        if (extract_block_eigen(m, g, cur)) {
            if (have_prev && prev.size() == cur.size()) {
                double delta = 0.0;
                for (size_t k = 0; k < cur.size(); ++k) {
                    delta = std::max(
                        delta, std::abs(cur[k].log_mod - prev[k].log_mod) /
                                   std::max(1.0, std::abs(cur[k].log_mod)));
                    delta = std::max(
                        delta, std::abs(std::remainder(
                                   cur[k].phase - prev[k].phase, 2.0 * M_PI)));
                }
                if (delta < 1e-10) return cur;
                if (delta < best_delta) {
                    best_delta = delta;
                    best = cur;
                }
            }
            prev = cur;
            have_prev = true;
        } else {
            have_prev = false;
        }
        v = g.q;  // next orthogonal iterate
    }
    // Near-continuum modulus spectra contract slowly between neighbouring
    // clusters; accept the best cross-sweep agreement when it is tight
    // enough for statistical use.
    if (best_delta < 1e-5) return best;
    throw std::runtime_error("product_eigenvalues_staircase: no convergence");
}

}  // namespace

template <typename Mat>
double GradedChain<Mat>::spread() const {
    double lo = c.empty() ? 0.0 : c[0], hi = lo;
    for (double x : c) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return hi - lo;
}
template struct GradedChain<Eigen::MatrixXd>;
template struct GradedChain<Eigen::MatrixXcd>;

std::vector<double> graded_log_singular_values(Eigen::MatrixXd cols,
                                               std::vector<double> logs) {
    return jacobi_impl<double>(std::move(cols), std::move(logs));
}

std::vector<double> graded_log_singular_values(Eigen::MatrixXcd cols,
                                               std::vector<double> logs) {
    return jacobi_impl<Cplx>(std::move(cols), std::move(logs));
}

GradedChain<Eigen::MatrixXd> accumulate_graded(
    const std::function<Eigen::MatrixXd(int)>& factor, int nfac,
    const Eigen::MatrixXd* v0) {
    return accumulate_impl<double>(factor, nfac, v0);
}

GradedChain<Eigen::MatrixXcd> accumulate_graded(
    const std::function<Eigen::MatrixXcd(int)>& factor, int nfac,
    const Eigen::MatrixXcd* v0) {
    return accumulate_impl<Cplx>(factor, nfac, v0);
}

std::complex<double> pfaffian(Eigen::MatrixXcd a) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("pfaffian: square input");
    if (n % 2 != 0) return 0.0;
    if ((a + a.transpose()).norm() > 1e-10 * std::max(1.0, a.norm()))
        throw std::invalid_argument("pfaffian: input not skew-symmetric");
    std::complex<double> pf = 1.0;
    for (int k = 0; k + 1 < n; k += 2) {
        // Pivot the largest entry of column k below the diagonal into k+1.
        int kp = k + 1;
        double best = std::abs(a(k + 1, k));
        for (int j = k + 2; j < n; ++j)
            if (std::abs(a(j, k)) > best) {
                best = std::abs(a(j, k));
                kp = j;
            }
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf = -pf;
        }
        if (a(k + 1, k) == std::complex<double>(0.0)) return 0.0;
        pf *= a(k, k + 1);
        if (k + 2 < n) {
            const int len = n - k - 2;
            const Eigen::VectorXcd tau =
                a.col(k).segment(k + 2, len) / a(k, k + 1);
            const Eigen::VectorXcd r =
                a.row(k + 1).segment(k + 2, len).transpose();
            a.block(k + 2, k + 2, len, len) +=
                tau * r.transpose() - r * tau.transpose();
        }
    }
    return pf;
}

std::vector<LogEigenvalue> product_eigenvalues_staircase(
    const std::function<Eigen::MatrixXd(int)>& factor, int nfac, int dim,
    int max_sweeps) {
    return staircase_impl<double>(factor, nfac, dim, max_sweeps);
}

std::vector<LogEigenvalue> product_eigenvalues_staircase(
    const std::function<Eigen::MatrixXcd(int)>& factor, int nfac, int dim,
    int max_sweeps) {
    return staircase_impl<Cplx>(factor, nfac, dim, max_sweeps);
}

}  // namespace rmp::linalg
