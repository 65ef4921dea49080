#include "wishart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "quadrature.hpp"

namespace rmp::wishart {

namespace {

namespace sf = rmp::specfun;
namespace quad = rmp::quadrature;
using Cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846264338;

// Signed scaled accumulator for alternating gamma-ratio sums.
struct SignedAccum {
    double scale = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    double peak = -std::numeric_limits<double>::infinity();
    void add(double log_term, int sign) {
        if (sign == 0 || log_term == -std::numeric_limits<double>::infinity())
            return;
        peak = std::max(peak, log_term);
        if (log_term > scale) {
            sum *= std::exp(scale - log_term);
            scale = log_term;
        }
        sum += sign * std::exp(log_term - scale);
    }
    sf::SignedLog signed_log() const {
        if (scale == -std::numeric_limits<double>::infinity() || sum == 0.0)
            return {-std::numeric_limits<double>::infinity(), 0};
        return {scale + std::log(std::abs(sum)), sum > 0 ? 1 : -1};
    }
    double value() const {
        const sf::SignedLog s = signed_log();
        if (s.sign == 0) return 0.0;
        return s.sign * std::exp(s.log);
    }
};

}  // namespace

void WishartModel::validate() const {
    if (dim < 1) throw std::invalid_argument("WishartModel: dim >= 1");
    if (charges.empty())
        throw std::invalid_argument("WishartModel: at least one factor");
    for (size_t i = 0; i < charges.size(); ++i) {
        if (charges[i] <= -1.0)
            throw std::invalid_argument("WishartModel: charges > -1");
        if (i > 0 && charges[i] < charges[i - 1])
            throw std::invalid_argument("WishartModel: charges must ascend");
    }
}

double weight(int j, double x, const WishartModel& model) {
    model.validate();
    if (j < 0) throw std::invalid_argument("weight: j >= 0");
    std::vector<double> b = model.charges;
    b[0] += j;
    return sf::meijer_g(sf::meijer_weight_spec(std::move(b)), x);
}

double bimoment(int i, int j, const WishartModel& model) {
    model.validate();
    if (i < 0 || j < 0) throw std::invalid_argument("bimoment: i, j >= 0");
    double lg = std::lgamma(i + j + model.charges[0] + 1.0);
    for (int l = 1; l < model.factors(); ++l)
        lg += std::lgamma(i + model.charges[l] + 1.0);
    return std::exp(lg);
}

specfun::SignedLog log_poly_p(int k, double x, const WishartModel& model) {
    // p_k(x) = sum_j (-1)^{k+j} k!/(k-j)! prod_l Gamma(k+nu_l+1)/
    //          Gamma(j+nu_l+1) x^j / j!
    if (x == 0.0) {
        // only the j = 0 term survives
        double lt = 0.0;
        for (double nu : model.charges)
            lt += std::lgamma(k + nu + 1.0) - std::lgamma(nu + 1.0);
        return {lt, (k % 2 == 0) ? 1 : -1};
    }
    const double lx = std::log(std::abs(x));
    const int sx = (x > 0.0) ? 1 : -1;
    SignedAccum acc;
    for (int j = 0; j <= k; ++j) {
        double lt = std::lgamma(k + 1.0) - std::lgamma(k - j + 1.0) -
                    std::lgamma(j + 1.0) + j * lx;
        for (double nu : model.charges)
            lt += std::lgamma(k + nu + 1.0) - std::lgamma(j + nu + 1.0);
        int sgn = ((k + j) % 2 == 0) ? 1 : -1;
        if (sx < 0 && j % 2 == 1) sgn = -sgn;
        acc.add(lt, sgn);
    }
    return acc.signed_log();
}

specfun::SignedLog log_phi(int k, double y, const WishartModel& model,
                           const specfun::EvalPolicy& policy) {
    const int n = model.factors();
    std::vector<double> b = model.charges;
    b.push_back(0.0);
    const sf::MeijerGSpec spec(n, 1, {double(-k)}, std::move(b));
    sf::SignedLog g = sf::meijer_g_log(spec, y, policy);
    if (k % 2 == 1) g.sign = -g.sign;
    return g;
}

BiorthoTriple biortho(int k, const WishartModel& model) {
    model.validate();
    if (k < 0) throw std::invalid_argument("biortho: k >= 0");
    BiorthoTriple t;
    t.degree = k;
    double lh = std::lgamma(k + 1.0);
    for (double nu : model.charges) lh += std::lgamma(k + nu + 1.0);
    t.log_h = lh;
    t.p = [k, model](double x) {
        const sf::SignedLog s = log_poly_p(k, x, model);
        return s.sign * std::exp(s.log);
    };
    t.phi = [k, model](double y) {
        const sf::SignedLog s = log_phi(k, y, model);
        return s.sign * std::exp(s.log);
    };
    return t;
}

double kernel(int n_points, double x, double y, const WishartModel& model,
              KernelForm form) {
    model.validate();
    if (!(x > 0.0) || !(y > 0.0))
        throw std::invalid_argument("kernel: x, y > 0");
    const int N = n_points;
    if (form == KernelForm::sum) {
        double acc = 0.0;
        for (int k = 0; k < N; ++k) {
            const sf::SignedLog lp = log_poly_p(k, x, model);
            const sf::SignedLog lphi = log_phi(k, y, model);
            if (lp.sign == 0 || lphi.sign == 0) continue;
            double lh = std::lgamma(k + 1.0);
            for (double nu : model.charges) lh += std::lgamma(k + nu + 1.0);
            acc += lp.sign * lphi.sign * std::exp(lp.log + lphi.log - lh);
        }
        return acc;
    }
    // Kuijlaars-Zhang integral form.
    const int n = model.factors();
    std::vector<double> b1{0.0};
    for (double nu : model.charges) b1.push_back(-nu);
    const sf::MeijerGSpec s1(1, 0, {double(N)}, std::move(b1));
    std::vector<double> b2 = model.charges;
    b2.push_back(0.0);
    const sf::MeijerGSpec s2(n, 1, {double(-N)}, std::move(b2));
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const sf::SignedLog g1 = sf::meijer_g_log(s1, u * x);
        const sf::SignedLog g2 = sf::meijer_g_log(s2, u * y);
        if (g1.sign == 0 || g2.sign == 0) return 0.0;
        return g1.sign * g2.sign * std::exp(g1.log + g2.log);
    };
    quad::Options opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-9;
    return quad::integrate(f, 0.0, 1.0, opt);
}

double density_moment(int s, const WishartModel& model) {
    model.validate();
    if (s < 0) throw std::invalid_argument("density_moment: s >= 0");
    if (s == 0) return double(model.dim);
    if (model.dim > 200)
        throw std::invalid_argument(
            "density_moment: alternating sum loses all digits above N = 200");
    const int N = model.dim;
    SignedAccum acc;
    for (int j = 0; j < s; ++j) {
        double lt = -std::lgamma(s + 1.0) + std::lgamma(double(s)) -
                    std::lgamma(j + 1.0) - std::lgamma(double(s - j)) +
                    std::lgamma(double(N - j + s)) - std::lgamma(double(N - j));
        for (double nu : model.charges)
            lt += std::lgamma(N + nu - j + s) - std::lgamma(N + nu - j);
        acc.add(lt, (j % 2 == 0) ? 1 : -1);
    }
    if (acc.peak - acc.signed_log().log > 34.0)
        throw std::runtime_error("density_moment: catastrophic cancellation");
    return acc.value();
}

double fc_moment(int n, double s) {
    if (n < 1) throw std::invalid_argument("fc_moment: n >= 1");
    if (s < 0.0) throw std::invalid_argument("fc_moment: s >= 0");
    if (s == 0.0) return 1.0;
    const double lv = std::lgamma((n + 1.0) * s + 1.0) -
                      std::lgamma(s + 1.0) - std::lgamma(n * s + 1.0) -
                      std::log(n * s + 1.0);
    double v = std::exp(lv);
    if (std::abs(s - std::round(s)) < 1e-12) {
        const double r = std::round(v);
        if (std::abs(v - r) < 1e-9 * std::max(1.0, r)) v = r;
    }
    return v;
}

double fc_support_edge(int n) {
    return std::pow(n + 1.0, n + 1.0) / std::pow(double(n), double(n));
}

namespace {

// x(alpha) = sin^{n+1}((n+1)a) / (sin a sin^n(n a)), decreasing from the
// soft edge (a -> 0) to the hard edge (a -> pi/(n+1)).
double trig_arg(int n, double a) {
    return std::pow(std::sin((n + 1.0) * a), n + 1.0) /
           (std::sin(a) * std::pow(std::sin(n * a), double(n)));
}

}  // namespace

double fc_density(int n, double x, FcForm form) {
    if (n < 1) throw std::invalid_argument("fc_density: n >= 1");
    const double edge = fc_support_edge(n);
    if (form == FcForm::trig) {
        if (!(x > 0.0) || !(x < edge))
            throw std::invalid_argument(
                "fc_density: trig form defined on the open support only");
        double lo = 1e-15, hi = kPi / (n + 1.0) - 1e-15;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (trig_arg(n, mid) > x) lo = mid;
            else hi = mid;
            if (hi - lo < 1e-12 * kPi) break;
        }
        const double a = 0.5 * (lo + hi);
        return std::sin(a) * std::sin(a) *
               std::pow(std::sin(n * a), n - 1.0) /
               (kPi * std::pow(std::sin((n + 1.0) * a), double(n)));
    }
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    if (x < 0.0 || x >= edge) return 0.0;
    std::vector<double> a{1.0 / n};
    for (int k = 0; k <= n - 2; ++k) a.push_back(-double(k) / n);
    std::vector<double> b;
    for (int k = 1; k <= n; ++k) b.push_back(-double(k) / (n + 1.0));
    const sf::MeijerGSpec spec(n, 0, std::move(a), std::move(b));
    const double pref = 1.0 / std::sqrt(2.0 * kPi) *
                        std::pow(double(n), n - 1.5) /
                        std::pow(n + 1.0, n + 0.5);
    return pref * sf::meijer_g(spec, x / edge);
}

namespace {

// All roots of g prod_l (g + alpha_l) - K z (g - 1) = 0 with
// K = prod (1 + alpha_l): companion-matrix eigenvalues.
std::vector<Cplx> all_roots_g(int n, const std::vector<double>& alphas,
                              Cplx z) {
    std::vector<double> alpha(n, 0.0);
    for (size_t i = 0; i < alphas.size(); ++i) alpha[i] = alphas[i];
    double K = 1.0;
    for (double al : alpha) K *= (1.0 + al);
    // g * prod(g + alpha): expand the elementary symmetric coefficients.
    std::vector<Cplx> coeff(n + 2, 0.0);  // coeff[j] multiplies g^j
    {
        std::vector<double> poly{1.0};  // prod (g + alpha)
        for (double al : alpha) {
            std::vector<double> next(poly.size() + 1, 0.0);
            for (size_t j = 0; j < poly.size(); ++j) {
                next[j + 1] += poly[j];
                next[j] += poly[j] * al;
            }
            poly.swap(next);
        }
        for (size_t j = 0; j < poly.size(); ++j) coeff[j + 1] = poly[j];
    }
    coeff[1] -= K * z;
    coeff[0] += K * z;
    const int deg = n + 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeff[i] / coeff[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<Cplx> roots;
    for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
    return roots;
}

// Homotopy continuation of the physical branch (g -> 1 at large |z|):
// every step picks the root closest to the tracked value, halving the step
// whenever another root comes too close for an unambiguous match.
Cplx track_segment(int n, const std::vector<double>& alphas, Cplx z0, Cplx z1,
                   Cplx g) {
    double t = 0.0, dt = 1.0 / 64.0;
    int halvings = 0;
    while (t < 1.0) {
        const double tn = std::min(1.0, t + dt);
        const Cplx zt = z0 + (z1 - z0) * tn;
        const auto roots = all_roots_g(n, alphas, zt);
        double best = 1e300, second = 1e300;
        Cplx pick = g;
        for (const Cplx r : roots) {
            const double d = std::abs(r - g);
            if (d < best) {
                second = best;
                best = d;
                pick = r;
            } else {
                second = std::min(second, d);
            }
        }
        if (best > 0.45 * second && tn - t > 1e-12) {
            dt *= 0.5;
            if (++halvings > 200)
                throw std::runtime_error("green: branch tracking failed");
            continue;
        }
        g = pick;
        t = tn;
        dt = std::min(dt * 1.9, 1.0 / 64.0);
    }
    return g;
}

Cplx track_g(int n, const std::vector<double>& alphas, Cplx z) {
    double scale = fc_support_edge(n);
    for (double al : alphas) scale = std::max(scale, 4.0 * (1.0 + al));
    const double big = 10.0 * scale;
    Cplx z0;
    if (z.imag() == 0.0 && (z.real() > scale || z.real() < 0.0)) {
        z0 = (z.real() > 0.0) ? Cplx(big, 0.0) : Cplx(-big, 0.0);
        if (std::abs(z.real()) >= big) z0 = 2.0 * z;
    } else {
        // Descend perpendicular to the cut.
        const double s = (z.imag() < 0.0) ? -1.0 : 1.0;
        z0 = Cplx(z.real(), s * big);
    }
    // Start on the g -> 1 branch.
    const auto roots0 = all_roots_g(n, alphas, z0);
    Cplx g = roots0.front();
    for (const Cplx r : roots0)
        if (std::abs(r - 1.0) < std::abs(g - 1.0)) g = r;
    return track_segment(n, alphas, z0, z, g);
}

}  // namespace

std::complex<double> green(int n, std::complex<double> z) {
    if (n < 1) throw std::invalid_argument("green: n >= 1");
    if (z.imag() == 0.0 && z.real() >= 0.0 &&
        z.real() <= fc_support_edge(n))
        throw std::invalid_argument("green: z on the support cut");
    return track_g(n, {}, z) / z;
}

double macro_density_scaled(int n, const std::vector<double>& alphas,
                            double x) {
    if (n < 1) throw std::invalid_argument("macro_density_scaled: n >= 1");
    if (!(x > 0.0))
        throw std::invalid_argument("macro_density_scaled: x > 0");
    if (int(alphas.size()) > n)
        throw std::invalid_argument("macro_density_scaled: too many alphas");
    // Small offset: the hard-edge mass error of the Sokhotski limit scales
    // like sqrt(eps), while the companion-matrix continuation still
    // resolves the near-collision of roots at eps far above solver noise.
    const Cplx z(x, -1e-12);
    const Cplx g = track_g(n, alphas, z);
    return std::max(0.0, (g / z).imag() / kPi);
}

double kernel_limit(LimitKernel kind, const HardEdgeParams& params, double x,
                    double y) {
    switch (kind) {
        case LimitKernel::sine: {
            const double d = x - y;
            if (std::abs(d) < 1e-12) return 1.0;
            return std::sin(kPi * d) / (kPi * d);
        }
        case LimitKernel::airy: {
            auto ai = [](double t) {
                return sf::classic_special(sf::Classic::airy_ai, 0.0, t);
            };
            if (std::abs(x - y) < 1e-9) {
                const double ap = sf::airy_ai_prime(x);
                return ap * ap - x * ai(x) * ai(x);
            }
            return (ai(x) * sf::airy_ai_prime(y) -
                    sf::airy_ai_prime(x) * ai(y)) /
                   (x - y);
        }
        case LimitKernel::bessel: {
            const double nu = params.order;
            auto J = [](double o, double t) {
                return sf::classic_special(sf::Classic::bessel_j, o, t);
            };
            const double sx = std::sqrt(x), sy = std::sqrt(y);
            if (std::abs(x - y) < 1e-9) {
                return 0.25 * (J(nu, sx) * J(nu, sx) -
                               J(nu + 1.0, sx) * J(nu - 1.0, sx));
            }
            const double jpx = 0.5 * (J(nu - 1.0, sx) - J(nu + 1.0, sx));
            const double jpy = 0.5 * (J(nu - 1.0, sy) - J(nu + 1.0, sy));
            return (J(nu, sx) * sy * jpy - sx * jpx * J(nu, sy)) /
                   (2.0 * (x - y));
        }
        case LimitKernel::meijer_hard: {
            const int m = static_cast<int>(params.charges.size());
            if (m < 1)
                throw std::invalid_argument(
                    "kernel_limit: meijer_hard needs charges");
            std::vector<double> b1{0.0};
            for (double nu : params.charges) b1.push_back(-nu);
            const sf::MeijerGSpec s1(1, 0, {}, std::move(b1));
            std::vector<double> b2 = params.charges;
            b2.push_back(0.0);
            const sf::MeijerGSpec s2(m, 0, {}, std::move(b2));
            // The two factors carry huge opposite gamma scales at large
            // charges; combine them in log space.
            auto f = [&](double u) {
                if (u <= 0.0) return 0.0;
                const sf::SignedLog g1 = sf::meijer_g_log(s1, u * x);
                const sf::SignedLog g2 = sf::meijer_g_log(s2, u * y);
                if (g1.sign == 0 || g2.sign == 0) return 0.0;
                return g1.sign * g2.sign * std::exp(g1.log + g2.log);
            };
            quad::Options opt;
            opt.abs_tol = 1e-12;
            opt.rel_tol = 1e-9;
            return quad::integrate(f, 0.0, 1.0, opt);
        }
    }
    throw std::invalid_argument("kernel_limit: unknown kind");
}

double mutual_info_quadrature(int n, double snr) {
    if (snr < 0.0) throw std::invalid_argument("mutual_info: snr >= 0");
    if (snr == 0.0) return 0.0;
    const double edge = fc_support_edge(n);
    // Substitute x = t^{n+1} to kill the hard-edge singularity.
    auto f = [&](double t) {
        const double x = std::pow(t, n + 1.0);
        if (x <= 0.0 || x >= edge) return 0.0;
        return fc_density(n, x, FcForm::trig) * std::log2(1.0 + snr * x) *
               (n + 1.0) * std::pow(t, double(n));
    };
    quad::Options opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-10;
    return quad::integrate(f, 0.0, std::pow(edge, 1.0 / (n + 1.0)), opt);
}

double mutual_info(int n, double snr) {
    if (n < 1) throw std::invalid_argument("mutual_info: n >= 1");
    if (snr < 0.0) throw std::invalid_argument("mutual_info: snr >= 0");
    if (snr == 0.0) return 0.0;
    std::vector<double> a;
    for (int j = 1; j <= n; ++j) a.push_back(double(j) / (n + 1.0));
    a.push_back(1.0);
    a.push_back(1.0);
    std::vector<double> b{1.0, 0.0};
    for (int k = -1; k <= n - 2; ++k) b.push_back(double(k) / n);
    const sf::MeijerGSpec spec(1, n + 2, std::move(a), std::move(b));
    const double pref =
        std::sqrt((n + 1.0) / (2.0 * kPi * n * n * n)) / std::log(2.0);
    return pref * sf::meijer_g(spec, fc_support_edge(n) * snr);
}

double wide_correlator(int n, double x, double y) {
    if (!(x > 0.0) || !(y > 0.0) || x == y)
        throw std::invalid_argument("wide_correlator: distinct positive x, y");
    const double d2 = (x - y) * (x - y);
    if (n == 1) {
        return -(std::sqrt(x / y) + std::sqrt(y / x)) /
               (4.0 * kPi * kPi * d2);
    }
    if (n == 2) {
        const double r = std::cbrt(x / y);
        return -(1.0 + r + 1.0 / r) / (6.0 * kPi * kPi * d2);
    }
    throw std::invalid_argument("wide_correlator: closed form only for n = 1, 2");
}

}  // namespace rmp::wishart

