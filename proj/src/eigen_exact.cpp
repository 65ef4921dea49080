#include "eigen_exact.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>

#include "linalg.hpp"
#include "quadrature.hpp"

namespace rmp::eigenexact {

namespace {

namespace sf = rmp::specfun;
namespace quad = rmp::quadrature;
using Cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846264338;
constexpr double kInf = std::numeric_limits<double>::infinity();

double beta_arg_scale(const EigenModel& m) {
    return std::pow(m.beta / 2.0, double(m.factors()));
}

std::vector<double> beta_charges(const EigenModel& m) {
    std::vector<double> b = m.charges;
    for (double& nu : b) nu *= m.beta / 2.0;
    return b;
}

}  // namespace

void EigenModel::validate() const {
    if (beta != 1 && beta != 2 && beta != 4)
        throw std::invalid_argument("EigenModel: beta must be 1, 2 or 4");
    if (dim < 1) throw std::invalid_argument("EigenModel: dim >= 1");
    if (charges.empty())
        throw std::invalid_argument("EigenModel: at least one factor");
    for (size_t i = 0; i < charges.size(); ++i) {
        if (charges[i] < 0.0)
            throw std::invalid_argument("EigenModel: charges >= 0");
        if (i > 0 && charges[i] < charges[i - 1])
            throw std::invalid_argument("EigenModel: charges must ascend");
    }
}

double weight_beta(const EigenModel& model, double r) {
    model.validate();
    if (r < 0.0) throw std::invalid_argument("weight_beta: r >= 0");
    const int n = model.factors();
    if (r == 0.0) {
        if (n >= 2) return kInf;  // logarithmic divergence at the origin
        return (model.charges[0] == 0.0) ? 1.0 : 0.0;
    }
    const double x = beta_arg_scale(model) * r * r;
    return sf::meijer_g(sf::meijer_weight_spec(beta_charges(model)), x);
}

namespace {

// log of h-type norm: prod_l Gamma(nu_l + k + 1) (beta = 2 convention,
// without the overall pi).
double log_gamma_prod(const std::vector<double>& charges, double k) {
    double lg = 0.0;
    for (double nu : charges) lg += std::lgamma(nu + k + 1.0);
    return lg;
}

}  // namespace

std::complex<double> kernel_complex(int n_points, std::complex<double> x,
                                    std::complex<double> y,
                                    const EigenModel& model) {
    model.validate();
    if (model.beta != 2)
        throw std::invalid_argument("kernel_complex: beta = 2 only");
    const double w = weight_beta(model, std::abs(x));
    const Cplx xy = x * std::conj(y);
    Cplx sum = 0.0;
    const double l0 = log_gamma_prod(model.charges, 0.0);
    for (int k = 0; k < n_points; ++k) {
        const double lg = log_gamma_prod(model.charges, double(k)) - l0;
        Cplx pw = (k == 0) ? Cplx(1.0)
                           : std::exp(double(k) * std::log(xy) - lg);
        if (xy == Cplx(0.0)) pw = (k == 0) ? Cplx(1.0) : Cplx(0.0);
        sum += pw;
    }
    return w * sum * std::exp(-l0) / kPi;
}

double moments_complex(double s, const EigenModel& model) {
    model.validate();
    if (model.beta != 2)
        throw std::invalid_argument("moments_complex: beta = 2 only");
    if (s <= -model.charges[0] - 1.0)
        throw sf::DomainError("moments_complex: gamma pole, need s > -nu_1 - 1");
    double acc = 0.0;
    for (int k = 0; k < model.dim; ++k) {
        double lt = 0.0;
        for (double nu : model.charges)
            lt += std::lgamma(nu + k + s + 1.0) - std::lgamma(nu + k + 1.0);
        acc += std::exp(lt);
    }
    return acc;
}

namespace {

double poly_alpha(const std::vector<double>& alphas, int n, double t) {
    double p = 1.0;
    for (int l = 0; l < n; ++l)
        p *= t + (l < int(alphas.size()) ? alphas[l] : 0.0);
    return p;
}

}  // namespace

double macro_radial(const EigenModel& model, double r,
                    const std::vector<double>& alphas) {
    model.validate();
    if (r < 0.0) throw std::invalid_argument("macro_radial: r >= 0");
    const int n = model.factors();
    if (alphas.empty()) {
        if (r > 1.0) return 0.0;
        if (r == 0.0) return (n == 1) ? 1.0 / kPi : kInf;
        return std::pow(r, 2.0 * (1.0 - n) / n) / (kPi * n);
    }
    const double r2 = r * r;
    if (r2 <= poly_alpha(alphas, n, 0.0) || r2 >= poly_alpha(alphas, n, 1.0))
        return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (poly_alpha(alphas, n, mid) < r2) lo = mid;
        else hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    double dp = 0.0;  // p'(t)
    for (int l = 0; l < n; ++l) {
        double term = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == l) continue;
            term *= t + (j < int(alphas.size()) ? alphas[j] : 0.0);
        }
        dp += term;
    }
    return 1.0 / (kPi * dp);
}

double macro_radial_cdf(const EigenModel& model, double r,
                        const std::vector<double>& alphas) {
    model.validate();
    if (r < 0.0) return 0.0;
    const int n = model.factors();
    const double r2 = r * r;
    if (r2 <= poly_alpha(alphas, n, 0.0)) return 0.0;
    if (r2 >= poly_alpha(alphas, n, 1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (poly_alpha(alphas, n, mid) < r2) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::complex<double> kernel_origin(const EigenModel& model,
                                   std::complex<double> x,
                                   std::complex<double> y) {
    model.validate();
    if (model.beta != 2)
        throw std::invalid_argument("kernel_origin: beta = 2 only");
    const int n = model.factors();
    const double r = std::abs(x);
    if (r == 0.0 && n >= 2)
        return kInf;  // divergence of the weight at the origin
    sf::SignedLog lw;
    if (r == 0.0) {
        // n = 1: w(0) = 1 for nu = 0, 0 otherwise
        if (model.charges[0] > 0.0) return 0.0;
        lw = {0.0, 1};
    } else {
        lw = sf::meijer_g_log(sf::meijer_weight_spec(beta_charges(model)),
                              beta_arg_scale(model) * r * r);
    }
    // sum_k (x y*)^k / prod Gamma(nu_l + k + 1), carried with a running
    // log scale so the weight's underflow cancels the series growth.
    const Cplx xy = x * std::conj(y);
    Cplx sum = 0.0;
    double scale = -log_gamma_prod(model.charges, 0.0);
    Cplx term = 1.0;  // = exp(log term - scale)
    for (int k = 0; k < 100000; ++k) {
        sum += term;
        Cplx factor = xy;
        for (double nu : model.charges) factor /= (nu + k + 1.0);
        term *= factor;
        const double at = std::abs(term);
        if (at < 1e-17 * std::max(1.0, std::abs(sum)) && k > 2) break;
        if (at > 1e200) {
            sum /= at;
            term /= at;
            scale += std::log(at);
        }
    }
    if (lw.sign == 0 || sum == Cplx(0.0)) return 0.0;
    const double lv = lw.log + scale + std::log(std::abs(sum)) - std::log(kPi);
    if (lv > 700.0) return kInf;
    return double(lw.sign) * std::exp(lv) * (sum / std::abs(sum));
}

std::complex<double> quaternion_prekernel(const EigenModel& model,
                                          std::complex<double> x,
                                          std::complex<double> y) {
    model.validate();
    if (model.beta != 4)
        throw std::invalid_argument("quaternion_prekernel: beta = 4 only");
    const int n = model.factors();
    const int N = model.dim;
    Cplx acc = 0.0;
    for (int k = 0; k < N; ++k) {
        for (int j = 0; j <= k; ++j) {
            double ld = 0.0;
            for (double nu : model.charges)
                ld += nu * std::log(4.0) + std::lgamma(nu + j + 1.0) +
                      std::lgamma(nu + k + 1.5);
            const Cplx num = std::pow(x, 2 * k + 1) * std::pow(y, 2 * j) -
                             std::pow(y, 2 * k + 1) * std::pow(x, 2 * j);
            acc += num * std::exp(-ld);
        }
    }
    // Prefactor 2^n pi^{n/2-1}: fixed against the R1 normalization
    // (1/2) int R1 = N, which the printed 2 pi^{n/2-1} misses by 2^{n-1}
    // for n >= 2; both agree at n = 1.
    return std::pow(2.0, double(n)) * std::pow(kPi, n / 2.0 - 1.0) * acc;
}

double quaternion_density(const EigenModel& model, std::complex<double> z) {
    const double w = weight_beta(model, std::abs(z));
    const Cplx pre = quaternion_prekernel(model, z, std::conj(z));
    const Cplx r1 = (std::conj(z) - z) * w * pre;
    return r1.real();
}

double quaternion_correlation(const EigenModel& model,
                              const std::vector<std::complex<double>>& points) {
    model.validate();
    if (model.beta != 4)
        throw std::invalid_argument("quaternion_correlation: beta = 4 only");
    const int k = static_cast<int>(points.size());
    if (2 * k > 20)
        throw std::invalid_argument("quaternion_correlation: dimension > 20");
    // pf over the doubled point set (z_1, z_1*, ..., z_k, z_k*), weighted
    // by (z_i* - z_i) w(z_i) per pair.
    std::vector<Cplx> w2(2 * k);
    for (int i = 0; i < k; ++i) {
        w2[2 * i] = points[i];
        w2[2 * i + 1] = std::conj(points[i]);
    }
    Eigen::MatrixXcd m1(2 * k, 2 * k);
    for (int r = 0; r < 2 * k; ++r) {
        m1(r, r) = 0.0;
        for (int c = r + 1; c < 2 * k; ++c) {
            const Cplx v = quaternion_prekernel(model, w2[r], w2[c]);
            m1(r, c) = v;
            m1(c, r) = -v;
        }
    }
    Cplx pf = linalg::pfaffian(m1);
    for (int i = 0; i < k; ++i)
        pf *= (std::conj(points[i]) - points[i]) *
              weight_beta(model, std::abs(points[i]));
    return pf.real();
}

namespace {

double log_h_radial(const EigenModel& model, int j) {
    // beta=2: h_j = pi prod Gamma(nu+j+1)
    // beta=4: h_j = (pi/2) prod Gamma(2 nu + j + 1) / 2^{j+1}
    if (model.beta == 2)
        return std::log(kPi) + log_gamma_prod(model.charges, double(j));
    double lg = std::log(kPi / 2.0);
    for (double nu : model.charges)
        lg += std::lgamma(2.0 * nu + j + 1.0) - (j + 1.0) * std::log(2.0);
    return lg;
}

}  // namespace

double radial_factor(const EigenModel& model, int k, double r) {
    model.validate();
    if (model.beta != 2 && model.beta != 4)
        throw std::invalid_argument("radial_factor: beta in {2, 4}");
    if (k < 1 || k > model.dim)
        throw std::invalid_argument("radial_factor: k in 1..N");
    if (r < 0.0) return 0.0;
    if (r == 0.0) return 0.0;
    const sf::SignedLog lw = sf::meijer_g_log(
        sf::meijer_weight_spec(beta_charges(model)),
        beta_arg_scale(model) * r * r);
    if (lw.sign <= 0) return 0.0;
    double lf;
    if (model.beta == 2) {
        lf = std::log(2.0 * kPi) + (2.0 * k - 1.0) * std::log(r) + lw.log -
             log_h_radial(model, k - 1);
    } else {
        lf = std::log(kPi) + (4.0 * k - 1.0) * std::log(r) + lw.log -
             log_h_radial(model, 2 * k - 1);
    }
    return std::exp(lf);
}

namespace {

struct RadiusTable {
    std::vector<double> u;  // CDF knots, increasing
    std::vector<double> r;  // radii
    std::vector<double> slope;  // monotone-cubic tangents dr/du
};

// Fritsch-Carlson monotone cubic tangents.
void build_tangents(RadiusTable& t) {
    const size_t n = t.u.size();
    t.slope.assign(n, 0.0);
    std::vector<double> d(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        const double du = t.u[i + 1] - t.u[i];
        d[i] = (du > 0.0) ? (t.r[i + 1] - t.r[i]) / du : 0.0;
    }
    t.slope[0] = d.front();
    t.slope[n - 1] = d.back();
    for (size_t i = 1; i + 1 < n; ++i)
        t.slope[i] = (d[i - 1] * d[i] > 0.0)
                         ? 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i])
                         : 0.0;
}

double eval_table(const RadiusTable& t, double u) {
    const auto it = std::upper_bound(t.u.begin(), t.u.end(), u);
    if (it == t.u.begin()) return t.r.front();
    if (it == t.u.end()) return t.r.back();
    const size_t i = size_t(it - t.u.begin()) - 1;
    const double h = t.u[i + 1] - t.u[i];
    if (h <= 0.0) return t.r[i];
    const double s = (u - t.u[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * t.r[i] + h10 * h * t.slope[i] + h01 * t.r[i + 1] +
           h11 * h * t.slope[i + 1];
}

std::string table_key(const EigenModel& m, int k) {
    std::ostringstream os;
    os << "radii_b" << m.beta << "_N" << m.dim << "_k" << k << "_nu";
    for (double nu : m.charges) os << "_" << nu;
    return os.str();
}

std::shared_mutex g_cache_mutex;
std::map<std::string, RadiusTable> g_cache;

bool load_table_file(const std::string& key, RadiusTable& t) {
    const char* dir = std::getenv("RMT_PRODUCTS_CACHE");
    if (dir == nullptr) return false;
    std::ifstream in(std::string(dir) + "/" + key + ".tab");
    if (!in) return false;
    size_t n = 0;
    in >> n;
    if (!in || n == 0 || n > (1u << 20)) return false;
    t.u.resize(n);
    t.r.resize(n);
    for (size_t i = 0; i < n && in; ++i) in >> t.u[i] >> t.r[i];
    if (!in) return false;
    build_tangents(t);
    return true;
}

void store_table_file(const std::string& key, const RadiusTable& t) {
    const char* dir = std::getenv("RMT_PRODUCTS_CACHE");
    if (dir == nullptr) return;
    std::ofstream out(std::string(dir) + "/" + key + ".tab");
    if (!out) return;
    out.precision(17);
    out << t.u.size() << "\n";
    for (size_t i = 0; i < t.u.size(); ++i)
        out << t.u[i] << " " << t.r[i] << "\n";
}

const RadiusTable& radius_table(const EigenModel& model, int k) {
    const std::string key = table_key(model, k);
    {
        std::shared_lock lock(g_cache_mutex);
        const auto it = g_cache.find(key);
        if (it != g_cache.end()) return it->second;
    }
    RadiusTable t;
    if (!load_table_file(key, t)) {
        // Upper bound: double until the density tail is negligible.
        double hi = 1.0;
        while (radial_factor(model, k, hi) > 1e-18 && hi < 1e6) hi *= 2.0;
        hi *= 1.5;
        const int grid = 4096;
        const double lo = hi * 1e-7;
        std::vector<double> rs(grid), pdf(grid);
        for (int i = 0; i < grid; ++i) {
            rs[i] = lo * std::pow(hi / lo, double(i) / (grid - 1));
            pdf[i] = radial_factor(model, k, rs[i]);
        }
        std::vector<double> cdf(grid, 0.0);
        for (int i = 1; i < grid; ++i)
            cdf[i] = cdf[i - 1] +
                     0.5 * (pdf[i] + pdf[i - 1]) * (rs[i] - rs[i - 1]);
        const double total = cdf.back();
        // Keep strictly increasing knots only.
        t.u.push_back(0.0);
        t.r.push_back(0.0);
        for (int i = 1; i < grid; ++i) {
            const double u = cdf[i] / total;
            if (u > t.u.back() + 1e-12 && u < 1.0) {
                t.u.push_back(u);
                t.r.push_back(rs[i]);
            }
        }
        t.u.push_back(1.0);
        t.r.push_back(hi);
        build_tangents(t);
        store_table_file(key, t);
    }
    std::unique_lock lock(g_cache_mutex);
    return g_cache.emplace(key, std::move(t)).first->second;
}

}  // namespace

std::vector<double> sample_radii(const EigenModel& model, rng::Stream& st) {
    model.validate();
    std::vector<double> out;
    out.reserve(model.dim);
    for (int k = 1; k <= model.dim; ++k) {
        const RadiusTable& t = radius_table(model, k);
        out.push_back(eval_table(t, st.next_double()));
    }
    return out;
}

double prob_all_real(const EigenModel& model) {
    model.validate();
    if (model.beta != 1)
        throw std::invalid_argument("prob_all_real: beta = 1 only");
    const int N = model.dim;
    const int n = model.factors();
    const bool even = (N % 2 == 0);
    const int rows = even ? N / 2 : (N + 1) / 2;
    const int cols_m = even ? N / 2 : (N - 1) / 2;

    auto entry = [&](int i, int j) {
        std::vector<double> a;
        for (double nu : model.charges) a.push_back(1.5 - 0.5 * nu - i);
        a.push_back(1.0);
        std::vector<double> b;
        for (double nu : model.charges) b.push_back(0.5 * nu + j);
        b.push_back(0.0);
        const sf::MeijerGSpec spec(n + 1, n, std::move(a), std::move(b));
        sf::EvalPolicy pol;
        pol.abs_tol = 1e-14;
        pol.rel_tol = 1e-12;
        const sf::SignedLog g = sf::meijer_g_log(spec, 1.0, pol);
        double ld = 0.0;
        for (double nu : model.charges)
            ld += std::lgamma((nu + 2.0 * j - 1.0) / 2.0) +
                  std::lgamma((nu + 2.0 * j) / 2.0);
        return (g.sign == 0) ? 0.0 : g.sign * std::exp(g.log - ld);
    };

    Eigen::MatrixXd mat(rows, rows);
    for (int i = 1; i <= rows; ++i) {
        for (int j = 1; j <= cols_m; ++j) mat(i - 1, j - 1) = entry(i, j);
        if (!even) {
            double lm = 0.0;
            for (double nu : model.charges)
                lm += std::lgamma((nu + 2.0 * i - 1.0) / 2.0) -
                      std::lgamma((nu + N) / 2.0);
            mat(i - 1, rows - 1) = std::exp(lm);
        }
    }
    return mat.determinant();
}

double phase_avg_quaternion_density(const EigenModel& model, double r,
                                    int truncate_at) {
    model.validate();
    if (model.beta != 4)
        throw std::invalid_argument(
            "phase_avg_quaternion_density: beta = 4 only");
    if (!(r > 0.0))
        throw std::invalid_argument("phase_avg_quaternion_density: r > 0");
    const int n = model.factors();
    const double w = weight_beta(model, r);
    const double z4 = std::pow(2.0, 2.0 * n) * std::pow(r, 4.0);
    double sum = 0.0;
    const int kmax = (truncate_at > 0) ? truncate_at : 100000;
    double lterm0 = 0.0;
    for (double nu : model.charges) lterm0 -= std::lgamma(2.0 * (nu + 1.0));
    double scale = lterm0;
    double acc = 1.0;
    for (int k = 1; k < kmax; ++k) {
        double lt = k * std::log(z4);
        for (double nu : model.charges) lt -= std::lgamma(2.0 * (nu + k + 1.0));
        const double rel = std::exp(lt - scale);
        acc += rel;
        if (rel < 1e-18 * acc && k > 2) break;
    }
    sum = acc * std::exp(scale);
    // Prefactor 2^{2n+2} r^2: fixed against the permanental route
    // sum_k f_k(r) and the angular integral of R1.
    return std::pow(2.0, 2.0 * n + 2.0) * r * r * w * sum;
}

std::complex<double> kernel_bulk(std::complex<double> u,
                                 std::complex<double> v) {
    return std::exp(-0.5 * std::norm(u) - 0.5 * std::norm(v) +
                    u * std::conj(v)) /
           kPi;
}

double kernel_edge_diag(std::complex<double> z_star, std::complex<double> u) {
    const double arg =
        2.0 * std::sqrt(2.0) * (z_star * std::conj(u)).real();
    return kernel_bulk(u, u).real() * 0.5 * std::erfc(arg);
}

}  // namespace rmp::eigenexact

