// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "eigen_exact.hpp"
#include "harness.hpp"
#include "oracles.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"
#include "specfun.hpp"
#include "verify.hpp"
#include "wishart.hpp"

using namespace rmp;
using Cplx = std::complex<double>;
namespace quadr = rmp::quadrature;

namespace {

constexpr double kPiA = 3.14159265358979323846;
int g_failures = 0;
constexpr std::uint64_t kSeed = 987654321;
constexpr int kThreads = 4;

void report(int idx, const std::string& label, bool pass,
            const std::string& detail, double seconds) {
    std::printf("%s  criterion %2d: %s (%s) [%.1fs]\n", pass ? "PASS" : "FAIL",
                idx, label.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run(int idx, const std::string& label,
         const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report(idx, label, pass, detail, secs);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

int main() {
    // 1. real-spectrum probability table
    run(1, "real-spectrum probability table (+-0.0005)", [](std::string& d) {
        struct Row {
            int N, n;
            double nu, expect;
        };
        const Row rows[] = {{2, 2, 0.0, 0.785}, {2, 4, 0.0, 0.872},
                            {4, 2, 0.0, 0.242}, {4, 4, 0.0, 0.418},
                            {2, 2, 1.0, 0.705}};
        double worst = 0.0;
        for (const Row& r : rows) {
            eigenexact::EigenModel m{1, r.N, std::vector<double>(r.n, r.nu)};
            const double p = eigenexact::prob_all_real(m);
            worst = std::max(worst, std::abs(p - r.expect));
            if (std::abs(p - r.expect) > 5e-4) {
                d = "N=" + std::to_string(r.N) + " n=" + std::to_string(r.n) +
                    " nu=" + num(r.nu) + ": " + num(p) + " vs " + num(r.expect);
                return false;
            }
        }
        d = "max |dev| = " + num(worst);
        return true;
    });

    // 2. n=1 closed form
    run(2, "n=1 closed form 2^{-N(N-1)/4} (rel 1e-8, N<=6)",
        [](std::string& d) {
            double worst = 0.0;
            for (int N = 1; N <= 6; ++N) {
                eigenexact::EigenModel m{1, N, {0.0}};
                const double p = eigenexact::prob_all_real(m);
                const double expect = std::pow(2.0, -N * (N - 1) / 4.0);
                worst = std::max(worst, std::abs(p / expect - 1.0));
            }
            d = "max rel = " + num(worst);
            return worst < 1e-8;
        });

    // 3. Monte Carlo cross-check of the table
    run(3, "MC all-real fraction (beta=1, N=4, n=2, 2e4 samples, 3 sigma)",
        [](std::string& d) {
            eigenexact::EigenModel m{1, 4, {0.0, 0.0}};
            const double p = eigenexact::prob_all_real(m);
            sampling::EnsembleSpec spec{1, 4, {0.0, 0.0}};
            const long draws = 20000;
            std::vector<int> hit(draws, 0);
            harness::parallel_for(draws, kThreads, [&](long r) {
                const auto ft =
                    sampling::finite_time_exponents(spec, kSeed, r);
                hit[r] = (ft.real_count == 4) ? 1 : 0;
            });
            long total = 0;
            for (int h : hit) total += h;
            const double frac = double(total) / draws;
            const double sigma = std::sqrt(p * (1.0 - p) / draws);
            d = "analytic " + num(p) + ", MC " + num(frac) + " (" +
                num(std::abs(frac - p) / sigma) + " sigma)";
            return std::abs(frac - p) <= 3.0 * sigma;
        });

    // 4. Fuss-Catalan
    run(4, "Fuss-Catalan moments, mass, meijer vs trig", [](std::string& d) {
        const double catalan[7] = {1, 1, 2, 5, 14, 42, 132};
        for (int s = 0; s <= 6; ++s)
            if (wishart::fc_moment(1, s) != catalan[s]) {
                d = "catalan s=" + std::to_string(s);
                return false;
            }
        for (int n = 1; n <= 4; ++n)
            for (int s = 0; s <= 6; ++s) {
                const double v = wishart::fc_moment(n, s);
                if (v != std::round(v)) {
                    d = "non-integer moment n=" + std::to_string(n);
                    return false;
                }
            }
        // quadrature mass and s=1,2 moments (n=2), x = t^3 substitution
        quadr::Options opt{1e-13, 1e-11, 8192};
        for (int s : {0, 1, 2}) {
            auto f = [&](double t) {
                const double x = std::pow(t, 3.0);
                if (x <= 0.0 || x >= 6.75) return 0.0;
                return wishart::fc_density(2, x, wishart::FcForm::trig) *
                       std::pow(x, double(s)) * 3.0 * t * t;
            };
            const double q =
                quadr::integrate(f, 0.0, std::pow(6.75, 1.0 / 3.0), opt);
            const double tol = (s == 0) ? 1e-7 : 1e-6 * wishart::fc_moment(2, s);
            if (std::abs(q - wishart::fc_moment(2, s)) > tol) {
                d = "moment s=" + std::to_string(s) + " dev " +
                    num(std::abs(q - wishart::fc_moment(2, s)));
                return false;
            }
        }
        double worst = 0.0;
        const double edge3 = wishart::fc_support_edge(3);
        for (int i = 1; i <= 10; ++i) {
            const double x = edge3 * i / 11.0;
            const double a = wishart::fc_density(3, x, wishart::FcForm::meijer);
            const double b = wishart::fc_density(3, x, wishart::FcForm::trig);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
        d = "meijer-trig max rel = " + num(worst);
        return worst < 1e-7;
    });

    // 5. kernel consistency
    run(5, "Wishart kernel: sum vs integral (rel 1e-7), normalization",
        [](std::string& d) {
            double worst = 0.0;
            for (int n = 1; n <= 3; ++n) {
                std::vector<double> charges;
                for (int i = 0; i < n; ++i) charges.push_back(double(i));
                for (int N : {3, 8}) {
                    wishart::WishartModel m{N, charges};
                    const double grid[5] = {0.5, 2.0, 5.0, 9.0, 14.0};
                    for (double x : grid)
                        for (double y : grid) {
                            const double a = wishart::kernel(
                                N, x, y, m, wishart::KernelForm::sum);
                            const double b = wishart::kernel(
                                N, x, y, m, wishart::KernelForm::integral);
                            worst = std::max(worst,
                                             std::abs(a - b) / std::abs(b));
                        }
                }
            }
            if (worst >= 1e-7) {
                d = "sum vs integral rel = " + num(worst);
                return false;
            }
            wishart::WishartModel m{3, {0.0, 0.0}};
            auto f = [&](double x) { return wishart::kernel(3, x, x, m); };
            quadr::Options opt{1e-10, 1e-8, 8192};
            const double mass = quadr::integrate_to_inf(f, 1e-12, opt);
            d = "max rel " + num(worst) + ", |intK - N| = " +
                num(std::abs(mass - 3.0));
            return std::abs(mass - 3.0) < 1e-5;
        });

    // 6. bi-orthogonality
    run(6, "bi-orthogonality Gram = identity (+-1e-7, i,j<6, n<=3)",
        [](std::string& d) {
            double worst = 0.0;
            for (int n = 1; n <= 3; ++n) {
                std::vector<double> charges;
                for (int i = 0; i < n; ++i) charges.push_back(double(i));
                wishart::WishartModel m{6, charges};
                for (int i = 0; i < 6; ++i) {
                    const auto ti = wishart::biortho(i, m);
                    for (int j = 0; j < 6; ++j) {
                        const auto tj = wishart::biortho(j, m);
                        auto f = [&](double x) { return ti.p(x) * tj.phi(x); };
                        quadr::Options opt{1e-12, 1e-9, 8192};
                        const double g =
                            quadr::integrate_to_inf(f, 0.0, opt) / ti.h();
                        worst = std::max(worst,
                                         std::abs(g - (i == j ? 1.0 : 0.0)));
                    }
                }
            }
            d = "max Gram defect = " + num(worst);
            return worst < 1e-7;
        });

    // 7. macroscopic Wishart vs Fuss-Catalan
    run(7, "macroscopic sv histogram vs fc_density (sup < 0.05)",
        [](std::string& d) {
            const int N = 100, n = 2;
            const long draws = 200;
            sampling::EnsembleSpec spec{2, N, std::vector<double>(n, 0.0)};
            std::vector<std::vector<double>> per(draws);
            harness::parallel_for(draws, kThreads, [&](long r) {
                for (double lv : sampling::log_squared_singular_values(
                         sampling::product_chain(
                             spec, sampling::ChainMode::rectangular, kSeed, r)))
                    per[r].push_back(std::exp(lv - n * std::log(double(N))));
            });
            std::vector<double> vals;
            for (const auto& p : per)
                vals.insert(vals.end(), p.begin(), p.end());
            std::vector<double> edges;
            for (int b = 0; b <= 30; ++b) edges.push_back(6.75 * b / 30.0);
            const auto h = harness::histogram(vals, edges);
            const auto st = harness::compare_histogram(h, [](double x) {
                return x > 0.0 && x < 6.75 ? wishart::fc_density(2, x) : 0.0;
            });
            d = "sup norm = " + num(st.sup_norm) + ", dropped " +
                std::to_string(h.dropped);
            return st.sup_norm < 0.05;
        });

    // 8. complex-eigenvalue macroscopics
    run(8, "radial eigenvalue CDF vs r^{2/n} (KS < 0.02)", [](std::string& d) {
        const int N = 100, n = 2;
        const long draws = 50;
        sampling::EnsembleSpec spec{2, N, std::vector<double>(n, 0.0)};
        std::vector<std::vector<double>> per(draws);
        harness::parallel_for(draws, kThreads, [&](long r) {
            for (const Cplx z : sampling::eigenvalues(sampling::product_chain(
                     spec, sampling::ChainMode::rectangular, kSeed, r)))
                per[r].push_back(std::abs(z) / double(N));  // N^{n/2} = N
        });
        std::vector<double> mods;
        for (const auto& p : per) mods.insert(mods.end(), p.begin(), p.end());
        const auto ks = oracles::ks_test(mods, [](double r) {
            if (r <= 0.0) return 0.0;
            if (r >= 1.0) return 1.0;
            return r;  // F(r) = r^{2/n} = r for n = 2
        });
        d = "KS = " + num(ks.statistic);
        return ks.statistic < 0.02;
    });

    // 9. Lyapunov fluctuations of the smallest exponent
    run(9, "smallest Lyapunov exponent law (beta=1, N=4, n=400)",
        [](std::string& d) {
            const int n = 400;
            const long draws = 2000;
            sampling::EnsembleSpec spec{1, 4, std::vector<double>(n, 0.0)};
            std::vector<double> smallest(draws);
            harness::parallel_for(draws, kThreads, [&](long r) {
                smallest[r] =
                    sampling::lyapunov_exponents(spec, kSeed, r)[0];
            });
            const auto law = asymptotics::exponent_law(1, 0.0, 1);
            const double se = law.sigma / std::sqrt(double(n));
            double mean = 0.0;
            for (double v : smallest) mean += v;
            mean /= draws;
            if (std::abs(law.mu - (-0.6352)) > 1e-4) {
                d = "mu1 mismatch with -0.6352";
                return false;
            }
            std::vector<double> std_samples;
            for (double v : smallest) std_samples.push_back((v - law.mu) / se);
            const auto ks = oracles::ks_test(std_samples, [](double x) {
                return 0.5 * std::erfc(-x / std::sqrt(2.0));
            });
            d = "mean dev " + num(std::abs(mean - law.mu)) + " (tol " +
                num(3.0 * se / std::sqrt(double(draws))) + "), KS p = " +
                num(ks.p_value);
            return std::abs(mean - law.mu) <=
                       3.0 * se / std::sqrt(double(draws)) &&
                   ks.p_value > 0.01;
        });

    // 10. triangular law
    run(10, "triangular law (beta=2, N=100, n=100, KS < 0.03)",
        [](std::string& d) {
            const int N = 100, n = 100;
            const long draws = 100;
            sampling::EnsembleSpec spec{2, N, std::vector<double>(n, 0.0)};
            std::vector<std::vector<double>> per(draws);
            harness::parallel_for(draws, kThreads, [&](long r) {
                for (double lam :
                     sampling::lyapunov_exponents(spec, kSeed + 1, r))
                    per[r].push_back(std::exp(lam) / std::sqrt(double(N)));
            });
            std::vector<double> vals;
            for (const auto& p : per)
                vals.insert(vals.end(), p.begin(), p.end());
            const auto ks = oracles::ks_test(vals, asymptotics::triangular_cdf);
            d = "KS = " + num(ks.statistic);
            return ks.statistic < 0.03;
        });

    // 11. origin microscopic density
    run(11, "origin microscopic density vs Meijer kernel (beta=2, N=50, n=8)",
        [](std::string& d) {
            const int N = 50, n = 8;
            const long draws = 2000;
            sampling::EnsembleSpec spec{2, N, std::vector<double>(n, 0.0)};
            std::vector<std::vector<double>> per(draws);
            harness::parallel_for(draws, kThreads, [&](long r) {
                for (const auto& e :
                     sampling::eigenvalues_log(sampling::product_chain(
                         spec, sampling::ChainMode::rectangular, kSeed + 2,
                         r)))
                    per[r].push_back(e.log_mod / n);  // zeta variable
            });
            std::vector<double> zetas;
            for (const auto& p : per)
                zetas.insert(zetas.end(), p.begin(), p.end());
            const auto law = asymptotics::exponent_law(2, 0.0, 1);
            const double width = law.sigma / std::sqrt(double(n));
            // bins across the first-peak window
            const double lo = law.mu - 2.5 * width, hi = law.mu + 2.5 * width;
            const int nb = 10;
            std::vector<double> edges;
            for (int b = 0; b <= nb; ++b)
                edges.push_back(lo + (hi - lo) * b / nb);
            std::vector<double> counts(nb, 0.0);
            for (double z : zetas) {
                if (z < lo || z >= hi) continue;
                counts[int((z - lo) / (hi - lo) * nb)] += 1.0;
            }
            eigenexact::EigenModel m{2, N, std::vector<double>(n, 0.0)};
            quadr::Options opt{1e-9, 1e-7, 512};
            double rel_sum = 0.0;
            double peak_emp = lo, best = -1.0;
            double peak_ana = lo, best_ana = -1.0;
            for (int b = 0; b < nb; ++b) {
                const double emp =
                    counts[b] / (draws * (edges[b + 1] - edges[b]));
                // expected count density dN/dzeta per realization
                const double ana = quadr::integrate(
                                       [&](double z) {
                                           const double r = std::exp(n * z);
                                           return 2.0 * kPiA * n *
                                                  std::exp(2.0 * n * z) *
                                                  eigenexact::kernel_origin(
                                                      m, r, r)
                                                      .real();
                                       },
                                       edges[b], edges[b + 1], opt) /
                                   (edges[b + 1] - edges[b]);
                rel_sum += std::abs(emp - ana) / ana;
                if (emp > best) {
                    best = emp;
                    peak_emp = 0.5 * (edges[b] + edges[b + 1]);
                }
                if (ana > best_ana) {
                    best_ana = ana;
                    peak_ana = 0.5 * (edges[b] + edges[b + 1]);
                }
            }
            const double rel_avg = rel_sum / nb;
            d = "avg rel err " + num(rel_avg) + ", |peak - mu1| = " +
                num(std::abs(peak_emp - law.mu)) + " (tol " +
                num(2.0 * width) + ")";
            (void)peak_ana;
            return rel_avg < 0.10 &&
                   std::abs(peak_emp - law.mu) < 2.0 * width;
        });

    // 12. special-function golden identities
    run(12, "Meijer G golden identities (rel 1e-9) and Mellin moments",
        [](std::string& d) {
            double worst = 0.0;
            for (double nu : {0.0, 1.0, 2.5}) {
                for (double x : {0.1, 0.5, 2.0, 7.0, 20.0}) {
                    const double g1 = specfun::meijer_g(
                        specfun::meijer_weight_spec({nu}), x);
                    const double e1 = std::pow(x, nu) * std::exp(-x);
                    worst = std::max(worst, std::abs(g1 / e1 - 1.0));
                    const double g2 = specfun::meijer_g(
                        specfun::meijer_weight_spec({nu, 0.0}), x);
                    const double e2 =
                        2.0 * std::pow(x, nu / 2.0) *
                        specfun::classic_special(specfun::Classic::bessel_k,
                                                 nu, 2.0 * std::sqrt(x));
                    worst = std::max(worst, std::abs(g2 / e2 - 1.0));
                }
            }
            if (worst >= 1e-9) {
                d = "golden identity rel = " + num(worst);
                return false;
            }
            double mworst = 0.0;
            const auto spec = specfun::meijer_weight_spec({0.0, 0.5});
            for (double s : {1.0, 2.0, 3.0}) {
                auto f = [&](double x) {
                    return std::pow(x, s - 1.0) * specfun::meijer_g(spec, x);
                };
                quadr::Options opt{1e-13, 1e-11, 8192};
                const double q = quadr::integrate_to_inf(f, 0.0, opt);
                const double a =
                    specfun::meijer_mellin_moment(spec, s).real();
                mworst = std::max(mworst, std::abs(q / a - 1.0));
            }
            d = "golden rel " + num(worst) + ", Mellin rel " + num(mworst);
            return mworst < 1e-8;
        });

    // 13. full property suite
    run(13, "property suite (verify subcommand)", [](std::string& d) {
        const auto checks = verify::run_all(20260809);
        int failed = 0;
        for (const auto& c : checks) {
            std::printf("   %s %s%s\n", c.pass ? "ok  " : "FAIL",
                        c.name.c_str(),
                        c.detail.empty() ? "" : (" (" + c.detail + ")").c_str());
            if (!c.pass) ++failed;
        }
        d = std::to_string(checks.size()) + " checks, " +
            std::to_string(failed) + " failed";
        return failed == 0;
    });

    if (g_failures == 0) {
        std::printf("acceptance: all %d criteria passed\n", 13);
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
