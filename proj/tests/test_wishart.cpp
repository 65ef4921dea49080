#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"
#include "specfun.hpp"
#include "wishart.hpp"

using namespace rmp;
using namespace rmp::wishart;
namespace quadr = rmp::quadrature;

namespace {
constexpr double kPiT = 3.14159265358979323846;
const quadr::Options kTight{1e-13, 1e-11, 8192};
}  // namespace

TEST_CASE("weights") {
    WishartModel m1{1, {0.0}};
    CHECK(weight(0, 1.0, m1) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-11));
    // n=2 equal charges: w_0(1) = 2 K_0(2), Bessel quadrature oracle.
    WishartModel m2{1, {0.0, 0.0}};
    const double oracle = 2.0 * oracles::bessel_k_quad(0.0, 2.0);
    CHECK(weight(0, 1.0, m2) == doctest::Approx(oracle).epsilon(1e-9));
    // normalization: int w_j = Gamma(nu1+j+1) prod Gamma(nu_l+1) at j=1
    auto f = [&](double x) { return weight(1, x, m2); };
    const double mass = quadr::integrate_to_inf(f, 0.0, kTight);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("weight equals the (n-1)-fold gamma convolution") {
    // n = 2, charges (0.0, 0.5), j = 1:
    // w_j(x) = x^{nu2} int dl/l l^{nu1+j-nu2} e^{-x/l} e^{-l}
    const WishartModel m{1, {0.0, 0.5}};
    for (double x : {0.4, 1.0, 3.0}) {
        auto f = [&](double l) {
            return std::pow(l, 0.0 + 1.0 - 0.5) * std::exp(-x / l) *
                   std::exp(-l) / l;
        };
        const double conv =
            std::pow(x, 0.5) * quadr::integrate_to_inf(f, 0.0, kTight);
        CHECK(weight(1, x, m) == doctest::Approx(conv).epsilon(1e-6));
    }
    // n = 3 nested convolution, charges (0, 0.5, 1), j = 0.
    const WishartModel m3{1, {0.0, 0.5, 1.0}};
    const double x3 = 1.3;
    auto inner = [&](double l2) {
        auto g = [&](double l1) {
            return std::pow(l1, 0.0 - 0.5) * std::exp(-l2 / l1) *
                   std::exp(-l1) / l1;
        };
        return quadr::integrate_to_inf(g, 0.0, kTight);
    };
    auto outer = [&](double l2) {
        return std::pow(l2, 0.5 - 1.0) * std::exp(-x3 / l2) * inner(l2) / l2;
    };
    const double conv3 =
        std::pow(x3, 1.0) * quadr::integrate_to_inf(outer, 0.0, kTight);
    CHECK(weight(0, x3, m3) == doctest::Approx(conv3).epsilon(1e-6));
}

TEST_CASE("bimoments") {
    WishartModel m1{1, {0.0}};
    CHECK(bimoment(0, 0, m1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(bimoment(1, 0, m1) == doctest::Approx(1.0).epsilon(1e-13));
    // quadrature cross-check at n=2, i=1, j=1
    WishartModel m2{1, {0.0, 0.0}};
    auto f = [&](double x) { return x * weight(1, x, m2); };
    const double q = quadr::integrate_to_inf(f, 0.0, kTight);
    CHECK(q == doctest::Approx(bimoment(1, 1, m2)).epsilon(1e-7));
}

TEST_CASE("bi-orthogonal system") {
    // n=1, nu=0: monic Laguerre; p_2(x) = x^2 - 4x + 2.
    WishartModel m1{1, {0.0}};
    auto t2 = biortho(2, m1);
    CHECK(t2.p(0.0) == doctest::Approx(2.0).epsilon(1e-12));
    for (double x : {0.5, 1.0, 3.0})
        CHECK(t2.p(x) ==
              doctest::Approx(oracles::monic_laguerre(2, 0.0, x)).epsilon(1e-11));
    CHECK(t2.h() == doctest::Approx(4.0).epsilon(1e-12));
    // phi_0 = w_0
    WishartModel m2{1, {0.0, 0.0}};
    auto t0 = biortho(0, m2);
    CHECK(t0.phi(1.0) ==
          doctest::Approx(2.0 * oracles::bessel_k_quad(0.0, 2.0)).epsilon(1e-9));
}

TEST_CASE("bi-orthogonality Gram matrix") {
    WishartModel m{6, {0.0, 1.0, 2.0}};
    for (int i = 0; i < 6; ++i) {
        const auto ti = biortho(i, m);
        for (int j = 0; j < 6; ++j) {
            const auto tj = biortho(j, m);
            auto f = [&](double x) { return ti.p(x) * tj.phi(x); };
            quadr::Options opt{1e-12, 1e-9, 8192};
            const double inner = quadr::integrate_to_inf(f, 0.0, opt);
            const double expect = (i == j) ? 1.0 : 0.0;
            CHECK(inner / ti.h() == doctest::Approx(expect).epsilon(1e-7));
        }
    }
}

TEST_CASE("kernel forms agree and normalize") {
    // sum vs integral on a grid (N=5, n=3, charges (0,1,2))
    WishartModel m{5, {0.0, 1.0, 2.0}};
    const double grid[5] = {0.5, 2.0, 5.0, 9.0, 14.0};
    for (double x : grid)
        for (double y : grid) {
            const double a = kernel(5, x, y, m, KernelForm::sum);
            const double b = kernel(5, x, y, m, KernelForm::integral);
            CHECK(a == doctest::Approx(b).epsilon(1e-7));
        }
    // int K(x,x) dx = N (N=3, n=2, nu=0)
    WishartModel m2{3, {0.0, 0.0}};
    auto f = [&](double x) { return kernel(3, x, x, m2, KernelForm::sum); };
    quadr::Options opt{1e-10, 1e-8, 8192};
    const double mass = quadr::integrate_to_inf(f, 1e-12, opt);
    CHECK(mass == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("kernel reduces to Christoffel-Darboux at n=1") {
    // Gauge-invariant comparisons with the Laguerre CD kernel.
    const int N = 3;
    const double nu = 0.0;
    WishartModel m{N, {nu}};
    auto cd = [&](double x, double y) {
        const double lead = std::exp(-(x + y) / 2.0) *
                            std::pow(x * y, nu / 2.0) /
                            (std::tgamma(double(N)) * std::tgamma(N + nu));
        const double num =
            oracles::monic_laguerre(N, nu, x) *
                oracles::monic_laguerre(N - 1, nu, y) -
            oracles::monic_laguerre(N - 1, nu, x) *
                oracles::monic_laguerre(N, nu, y);
        return lead * num / (x - y);
    };
    const double x = 1.0, y = 2.0;
    const double kxy = kernel(N, x, y, m);
    const double kyx = kernel(N, y, x, m);
    CHECK(kxy * kyx ==
          doctest::Approx(cd(x, y) * cd(y, x)).epsilon(1e-9));
    // Diagonal (gauge cancels): compare with a tiny off-diagonal CD value.
    const double diag = kernel(N, x, x, m);
    CHECK(diag == doctest::Approx(cd(x, x + 1e-7)).epsilon(1e-5));
}

TEST_CASE("kernel reproducing property") {
    WishartModel m{3, {0.0, 0.0}};
    // Tail mass of the degree-2 components drops below 1e-8 near A = 300.
    const double x = 1.0, y = 2.5, A = 300.0;
    // u = s^2 softens the logarithmic weight singularity at the origin.
    auto f = [&](double s) {
        const double u = s * s;
        if (u <= 0.0) return 0.0;
        return kernel(3, x, u, m) * kernel(3, u, y, m) * 2.0 * s;
    };
    quadr::Options opt{1e-9, 1e-8, 4096};
    const double conv = quadr::integrate(f, 0.0, std::sqrt(A), opt);
    CHECK(std::abs(conv - kernel(3, x, y, m)) < 1e-5);
}

TEST_CASE("density moments") {
    WishartModel m1{2, {0.0}};
    CHECK(density_moment(0, m1) == 2.0);
    CHECK(density_moment(1, m1) == doctest::Approx(4.0).epsilon(1e-12));
    WishartModel m2{1, {0.0, 0.0}};
    CHECK(density_moment(1, m2) == doctest::Approx(1.0).epsilon(1e-12));
    // moment consistency with the kernel diagonal (N=3, n=2)
    WishartModel m3{3, {0.0, 0.5}};
    for (int s : {1, 2, 3}) {
        auto f = [&](double x) {
            return std::pow(x, double(s)) * kernel(3, x, x, m3);
        };
        quadr::Options opt{1e-10, 1e-8, 8192};
        const double q = quadr::integrate_to_inf(f, 1e-12, opt);
        CHECK(q == doctest::Approx(density_moment(s, m3)).epsilon(1e-5));
    }
}

TEST_CASE("Heine formula against Monte Carlo") {
    const int N = 3;
    WishartModel m{N, {0.0, 0.0}};
    sampling::EnsembleSpec spec{2, N, {0.0, 0.0}};
    const int draws = 10000;
    const double zs[3] = {-1.0, 2.5, 7.0};
    for (const double z : zs) {
        double mean = 0.0, m2 = 0.0;
        for (int r = 0; r < draws; ++r) {
            const auto sv = sampling::squared_singular_values(
                sampling::product_chain(spec, sampling::ChainMode::rectangular,
                                        4242, r));
            double prod = 1.0;
            for (double x : sv) prod *= (z - x);
            mean += prod;
            m2 += prod * prod;
        }
        mean /= draws;
        m2 = m2 / draws - mean * mean;
        const double se = std::sqrt(std::max(m2, 0.0) / draws);
        const auto pN = biortho(N, m);
        CHECK(std::abs(mean - pN.p(z)) <= 3.0 * se + 1e-9);
    }
}

TEST_CASE("Fuss-Catalan moments") {
    const double catalan[7] = {1, 1, 2, 5, 14, 42, 132};
    for (int s = 0; s <= 6; ++s)
        CHECK(fc_moment(1, s) == doctest::Approx(catalan[s]).epsilon(1e-12));
    CHECK(fc_moment(2, 2) == doctest::Approx(3.0).epsilon(1e-12));
    for (int n = 1; n <= 4; ++n) CHECK(fc_moment(n, 0) == 1.0);
    // integrality for s <= 6, n <= 4
    for (int n = 1; n <= 4; ++n)
        for (int s = 0; s <= 6; ++s) {
            const double v = fc_moment(n, s);
            CHECK(v == std::round(v));
        }
}

TEST_CASE("Fuss-Catalan density") {
    // n=1 is Marchenko-Pastur: rho(2) = 1/(2 pi)
    CHECK(fc_density(1, 2.0) ==
          doctest::Approx(1.0 / (2.0 * kPiT)).epsilon(1e-9));
    CHECK(fc_density(1, 2.0, FcForm::trig) ==
          doctest::Approx(1.0 / (2.0 * kPiT)).epsilon(1e-10));
    // outside the support
    CHECK(fc_support_edge(2) == doctest::Approx(6.75).epsilon(1e-14));
    CHECK(fc_density(2, 6.76) == 0.0);
    CHECK(fc_density(2, 1e9) == 0.0);
    CHECK_THROWS(fc_density(2, 6.76, FcForm::trig));
    // meijer vs trig at 10 interior points, n = 3
    const double edge3 = fc_support_edge(3);
    for (int i = 1; i <= 10; ++i) {
        const double x = edge3 * i / 11.0;
        CHECK(fc_density(3, x, FcForm::meijer) ==
              doctest::Approx(fc_density(3, x, FcForm::trig)).epsilon(1e-7));
    }
    // mass and first moments by quadrature (n=2); the x = t^3 substitution
    // absorbs the hard-edge divergence.
    for (int s : {0, 1, 2}) {
        auto f = [&](double t) {
            const double x = std::pow(t, 3.0);
            if (x <= 0.0 || x >= 6.75) return 0.0;
            return fc_density(2, x, FcForm::trig) * std::pow(x, double(s)) *
                   3.0 * t * t;
        };
        const double q =
            quadr::integrate(f, 0.0, std::pow(6.75, 1.0 / 3.0), kTight);
        CHECK(q == doctest::Approx(fc_moment(2, s)).epsilon(1e-6));
    }
}

TEST_CASE("Green function") {
    // large |z|: z G -> 1
    const auto g6 = green(2, {1e6, 0.0});
    CHECK(std::abs(g6 * 1e6 - 1.0) < 1e-5);
    // n=1, z=5: quadratic-formula oracle g = (5 - sqrt(5))/2
    const auto g = green(1, {5.0, 0.0});
    CHECK(g.real() == doctest::Approx((5.0 - std::sqrt(5.0)) / 10.0)
                          .epsilon(1e-10));
    CHECK(std::abs(g.imag()) < 1e-12);
    // Sokhotski: (1/pi) Im G(x - i eps) reproduces the density
    const auto gs = green(1, {2.0, -1e-6});
    CHECK(gs.imag() / kPiT ==
          doctest::Approx(fc_density(1, 2.0)).epsilon(1e-5));
}

TEST_CASE("macroscopic density with scaled charges") {
    // alphas = 0 reduces to the Fuss-Catalan density
    for (double x : {0.5, 2.0, 5.0}) {
        CHECK(macro_density_scaled(2, {}, x) ==
              doctest::Approx(fc_density(2, x)).epsilon(2e-5));
    }
    // alphas all 1, n = 2: gap between the origin and the spectrum. The
    // inner edge sits at the stationary point of z(g), numerically 0.02835.
    double glo = 0.0, ghi = -0.9999;
    for (int it = 0; it < 200; ++it) {
        // maximize z(g) = g (g+1)^2 / (4 (g-1)) over g in (-1, 0)
        const double m1 = glo + (ghi - glo) / 3.0, m2 = ghi - (ghi - glo) / 3.0;
        auto zg = [](double g) { return g * (g + 1) * (g + 1) / (4 * (g - 1)); };
        if (zg(m1) < zg(m2)) glo = m1;
        else ghi = m2;
    }
    const double gedge = 0.5 * (glo + ghi);
    const double edge = gedge * (gedge + 1) * (gedge + 1) / (4 * (gedge - 1));
    CHECK(edge == doctest::Approx(0.02835014).epsilon(1e-5));
    CHECK(macro_density_scaled(2, {1.0, 1.0}, 0.8 * edge) < 1e-6);
    CHECK(macro_density_scaled(2, {1.0, 1.0}, 0.2 * edge) < 1e-6);
    CHECK(macro_density_scaled(2, {1.0, 1.0}, 2.0 * edge) > 0.1);
    // total mass 1 (n=2, alpha=(0,1)); x = s^2 softens the x^{-1/2}
    // hard-edge divergence.
    auto f = [&](double s) {
        return macro_density_scaled(2, {0.0, 1.0}, s * s) * 2.0 * s;
    };
    quadr::Options opt{1e-9, 1e-8, 4096};
    const double mass = quadr::integrate(f, 1e-7, std::sqrt(12.0), opt);
    CHECK(std::abs(mass - 1.0) < 1e-6);
}

TEST_CASE("limit kernels") {
    HardEdgeParams none;
    CHECK(kernel_limit(LimitKernel::sine, none, 0.3, 0.3) == 1.0);
    CHECK(kernel_limit(LimitKernel::airy, none, 0.0, 0.0) ==
          doctest::Approx(0.06698748377966397).epsilon(1e-10));
    // meijer_hard with m=1, nu=0: (1/4) K(x/4, y/4) = K_bessel(x, y)
    HardEdgeParams m1;
    m1.charges = {0.0};
    HardEdgeParams b0;
    b0.order = 0.0;
    const double lhs =
        0.25 * kernel_limit(LimitKernel::meijer_hard, m1, 0.25, 0.25);
    const double rhs = kernel_limit(LimitKernel::bessel, b0, 1.0, 1.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    // reduction: nu_m K^{m,nu}(nu_m x, nu_m y) -> K^{m-1}(x, y)
    HardEdgeParams base;
    base.charges = {0.0};
    const double target =
        kernel_limit(LimitKernel::meijer_hard, base, 1.0, 2.0);
    double prev_err = 1e300;
    for (double num : {10.0, 100.0, 1000.0}) {
        HardEdgeParams two;
        two.charges = {0.0, num};
        const double v = num * kernel_limit(LimitKernel::meijer_hard, two,
                                            num * 1.0, num * 2.0);
        const double err = std::abs(v - target);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 2e-3 * std::abs(target));
}

TEST_CASE("hard-edge convergence of the finite-N kernel (trend)") {
    // (1/N) K_N(x/N, y/N) approaches the Meijer kernel as N grows.
    HardEdgeParams hp;
    hp.charges = {0.0, 0.0};
    const double x = 1.0, y = 2.0;
    const double target = kernel_limit(LimitKernel::meijer_hard, hp, x, y);
    double prev_err = 1e300;
    for (int N : {10, 20, 40}) {
        WishartModel m{N, {0.0, 0.0}};
        const double v = kernel(N, x / N, y / N, m) / N;
        const double err = std::abs(v - target);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("finite-N moments approach Fuss-Catalan (trend)") {
    // s = 1 is exact at every N for square factors, so probe s = 2, 3.
    const int n = 2;
    WishartModel exact{20, {0.0, 0.0}};
    CHECK(density_moment(1, exact) / std::pow(20.0, 3.0) ==
          doctest::Approx(fc_moment(2, 1)).epsilon(1e-12));
    for (int s : {2, 3}) {
        double prev_err = 1e300;
        for (int N : {20, 40, 80}) {
            WishartModel m{N, {0.0, 0.0}};
            const double scaled =
                density_moment(s, m) / std::pow(double(N), n * s + 1.0);
            const double err = std::abs(scaled - fc_moment(n, s));
            CHECK(err < prev_err);
            prev_err = err;
        }
    }
}

TEST_CASE("mutual information") {
    CHECK(mutual_info(1, 0.0) == 0.0);
    for (int n : {1, 2, 4}) {
        CHECK(mutual_info(n, 2.0) > mutual_info(n, 1.0));
        CHECK(mutual_info(n, 1.0) ==
              doctest::Approx(mutual_info_quadrature(n, 1.0)).epsilon(1e-6));
    }
}

TEST_CASE("wide correlator") {
    CHECK(wide_correlator(2, 1.0, 2.0) ==
          doctest::Approx(wide_correlator(2, 2.0, 1.0)).epsilon(1e-13));
    // direct evaluation of the printed closed form
    CHECK(wide_correlator(2, 1.0, 2.0) ==
          doctest::Approx(-0.051566048).epsilon(1e-6));
    for (double x : {0.5, 1.0, 3.0})
        for (double y : {0.9, 2.0, 7.0})
            if (x != y) {
                CHECK(wide_correlator(1, x, y) < 0.0);
                CHECK(wide_correlator(2, x, y) < 0.0);
            }
    CHECK_THROWS(wide_correlator(3, 1.0, 2.0));
}
