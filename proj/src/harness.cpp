#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "asymptotics.hpp"
#include "eigen_exact.hpp"
#include "quadrature.hpp"
#include "verify.hpp"
#include "wishart.hpp"

namespace rmp::harness {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = 3.14159265358979323846264338;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<double> Grid::values() const {
    std::vector<double> out;
    out.reserve(points);
    if (points == 1) {
        out.push_back(min);
        return out;
    }
    for (int i = 0; i < points; ++i) {
        const double t = double(i) / (points - 1);
        if (log_scale) {
            out.push_back(min * std::pow(max / min, t));
        } else {
            out.push_back(min + (max - min) * t);
        }
    }
    return out;
}

void ExperimentConfig::validate() const {
    ensemble.validate();
    if (samples < 0) throw std::invalid_argument("config: samples >= 0");
    if (experiment != Experiment::real_prob && experiment != Experiment::fc &&
        experiment != Experiment::mutual_info &&
        experiment != Experiment::verify && samples < 1)
        throw std::invalid_argument("config: samples >= 1 for this experiment");
    if (parallel_width < 1)
        throw std::invalid_argument("config: parallel width >= 1");
    if (grid) {
        if (grid->points < 1 || !(grid->min < grid->max))
            throw std::invalid_argument("config: grid must be ascending");
        if (grid->log_scale && grid->min <= 0.0)
            throw std::invalid_argument("config: log grid needs min > 0");
    }
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream os;
    os << "experiment=" << experiment_name(experiment) << ";beta="
       << ensemble.beta << ";dim=" << ensemble.dim << ";charges=";
    for (size_t i = 0; i < ensemble.charges.size(); ++i) {
        if (i) os << ",";
        os << fmt17(ensemble.charges[i]);
    }
    os << ";kind="
       << (kind == SpectrumKind::eigenvalues ? "eigen" : "sv")
       << ";samples=" << samples << ";seed=" << seed;
    if (grid) {
        os << ";grid=" << fmt17(grid->min) << ":" << fmt17(grid->max) << ":"
           << grid->points << (grid->log_scale ? ":log" : "");
    }
    return os.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
    const std::string s = canonical_string();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Experiment experiment_from_name(const std::string& name) {
    if (name == "spectra") return Experiment::spectra;
    if (name == "density" || name == "density-curve")
        return Experiment::density_curve;
    if (name == "kernel" || name == "kernel-grid") return Experiment::kernel_grid;
    if (name == "real-prob") return Experiment::real_prob;
    if (name == "lyapunov") return Experiment::lyapunov;
    if (name == "fc") return Experiment::fc;
    if (name == "mutual-info") return Experiment::mutual_info;
    if (name == "verify") return Experiment::verify;
    throw std::invalid_argument("unknown experiment: " + name);
}

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::spectra: return "spectra";
        case Experiment::density_curve: return "density-curve";
        case Experiment::kernel_grid: return "kernel-grid";
        case Experiment::real_prob: return "real-prob";
        case Experiment::lyapunov: return "lyapunov";
        case Experiment::fc: return "fc";
        case Experiment::mutual_info: return "mutual-info";
        case Experiment::verify: return "verify";
    }
    return "unknown";
}

Histogram histogram(const std::vector<double>& data,
                    const std::vector<double>& edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
        throw std::invalid_argument("histogram: edges must ascend");
    Histogram h;
    h.bin_edges = edges;
    h.counts.assign(edges.size() - 1, 0.0);
    for (double x : data) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), x);
        if (it == edges.begin() || it == edges.end()) {
            // half-open bins [e_i, e_{i+1}): the left edge belongs in
            if (x == edges.front()) {
                h.counts.front() += 1.0;
                continue;
            }
            ++h.dropped;
            continue;
        }
        h.counts[size_t(it - edges.begin()) - 1] += 1.0;
    }
    double kept = 0.0;
    for (double c : h.counts) kept += c;
    h.empty = (kept == 0.0);
    h.density.assign(h.counts.size(), 0.0);
    if (!h.empty) {
        for (size_t i = 0; i < h.counts.size(); ++i)
            h.density[i] = h.counts[i] / (kept * (edges[i + 1] - edges[i]));
    }
    return h;
}

ComparisonStat compare(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
    ComparisonStat st;
    if (samples.empty()) return st;
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        st.ks = std::max(st.ks, std::abs(F - double(i) / n));
        st.ks = std::max(st.ks, std::abs(double(i + 1) / n - F));
    }
    return st;
}

ComparisonStat compare_histogram(const Histogram& hist,
                                 const std::function<double(double)>& density) {
    ComparisonStat st;
    quadrature::Options opt{1e-10, 1e-8, 256};
    for (size_t i = 0; i < hist.counts.size(); ++i) {
        const double a = hist.bin_edges[i], b = hist.bin_edges[i + 1];
        const double avg = quadrature::integrate(density, a, b, opt) / (b - a);
        st.sup_norm = std::max(st.sup_norm, std::abs(hist.density[i] - avg));
    }
    return st;
}

void parallel_for(long count, int width, const std::function<void(long)>& task) {
    if (width <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min<long>(width, count);
    std::atomic<bool> failed{false};
    std::string what;
    std::mutex what_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    task(i);
                } catch (const std::exception& e) {
                    std::lock_guard lock(what_mutex);
                    what = e.what();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("parallel task failed: " + what);
}

namespace {

void run_spectra(const ExperimentConfig& cfg, ResultBundle& out) {
    const bool eigen = (cfg.kind == SpectrumKind::eigenvalues);
    if (eigen) {
        out.column_names = {"realization", "re", "im", "log_mod", "phase"};
    } else {
        out.column_names = {"realization", "value", "log_value"};
    }
    std::vector<std::vector<std::vector<double>>> rows(cfg.samples);
    parallel_for(cfg.samples, cfg.parallel_width, [&](long r) {
        std::vector<std::vector<double>>& mine = rows[r];
        if (eigen) {
            std::vector<linalg::LogEigenvalue> ev;
            if (cfg.ensemble.beta == 1) {
                ev = sampling::eigenvalues_log(sampling::product_chain_real(
                    cfg.ensemble, sampling::ChainMode::square_induced,
                    cfg.seed, r));
            } else {
                ev = sampling::eigenvalues_log(sampling::product_chain(
                    cfg.ensemble, sampling::ChainMode::square_induced,
                    cfg.seed, r));
            }
            for (const auto& e : ev) {
                const auto z = e.value();
                mine.push_back({double(r), z.real(), z.imag(), e.log_mod,
                                e.phase});
            }
        } else {
            const auto logs =
                sampling::log_squared_singular_values(sampling::product_chain(
                    cfg.ensemble, sampling::ChainMode::rectangular, cfg.seed,
                    r));
            for (double lv : logs)
                mine.push_back({double(r), std::exp(lv), lv});
        }
    });
    out.columns.assign(out.column_names.size(), {});
    for (const auto& realization : rows)
        for (const auto& row : realization)
            for (size_t c = 0; c < row.size(); ++c)
                out.columns[c].push_back(row[c]);
}

void run_density(const ExperimentConfig& cfg, ResultBundle& out) {
    Grid grid = cfg.grid.value_or(Grid{1e-3, 10.0, 200, false});
    const auto xs = grid.values();
    const bool eigen = (cfg.kind == SpectrumKind::eigenvalues);
    std::function<double(double)> analytic;
    if (eigen) {
        if (cfg.ensemble.beta == 2) {
            eigenexact::EigenModel m{2, cfg.ensemble.dim,
                                     cfg.ensemble.charges};
            analytic = [m](double r) {
                return 2.0 * kPi * r *
                       eigenexact::kernel_complex(m.dim, r, r, m).real();
            };
        } else if (cfg.ensemble.beta == 4) {
            eigenexact::EigenModel m{4, cfg.ensemble.dim,
                                     cfg.ensemble.charges};
            analytic = [m](double r) {
                // radial marginal per the upper-half-plane convention
                return 0.5 * r *
                       eigenexact::phase_avg_quaternion_density(m, r, m.dim);
            };
        } else {
            throw std::invalid_argument(
                "density-curve: beta=1 eigenvalue density is not available "
                "(all-real sector only)");
        }
    } else {
        wishart::WishartModel m{cfg.ensemble.dim, cfg.ensemble.charges};
        if (cfg.ensemble.beta != 2)
            throw std::invalid_argument(
                "density-curve: singular values need beta = 2");
        analytic = [m](double x) {
            return wishart::kernel(m.dim, x, x, m);
        };
    }
    const auto analytic_safe = [analytic](double x) {
        return x > 0.0 ? analytic(x) : 0.0;
    };
    out.column_names = {"x", "analytic"};
    out.columns.assign(2, {});
    for (double x : xs) {
        out.columns[0].push_back(x);
        out.columns[1].push_back(analytic_safe(x));
    }
    if (cfg.samples > 0) {
        std::vector<std::vector<double>> per(cfg.samples);
        parallel_for(cfg.samples, cfg.parallel_width, [&](long r) {
            if (eigen) {
                const auto ev = sampling::eigenvalues(sampling::product_chain(
                    cfg.ensemble, sampling::ChainMode::square_induced,
                    cfg.seed, r));
                for (const auto z : ev) {
                    if (cfg.ensemble.beta == 4 && z.imag() < 0.0) continue;
                    per[r].push_back(std::abs(z));
                }
            } else {
                for (double v :
                     sampling::squared_singular_values(sampling::product_chain(
                         cfg.ensemble, sampling::ChainMode::rectangular,
                         cfg.seed, r)))
                    per[r].push_back(v);
            }
        });
        std::vector<double> values;
        for (const auto& p : per) values.insert(values.end(), p.begin(), p.end());
        std::vector<double> edges(xs.begin(), xs.end());
        const Histogram h = histogram(values, edges);
        out.columns.push_back({});
        out.column_names.push_back("empirical");
        for (size_t i = 0; i < xs.size(); ++i)
            out.columns[2].push_back(i < h.density.size() ? h.density[i] : 0.0);
        // normalize the analytic curve to a probability density for the stats
        const double total =
            eigen ? double(cfg.ensemble.dim) : double(cfg.ensemble.dim);
        const ComparisonStat st = compare_histogram(
            h, [&](double x) { return analytic_safe(x) / total; });
        out.scalars.push_back({"sup_norm", st.sup_norm});
        out.scalars.push_back({"dropped", double(h.dropped)});
    }
}

void run_kernel(const ExperimentConfig& cfg, ResultBundle& out) {
    Grid grid = cfg.grid.value_or(Grid{0.5, 5.0, 5, false});
    const auto xs = grid.values();
    out.column_names = {"x", "y", "kernel_sum", "kernel_integral"};
    out.columns.assign(4, {});
    wishart::WishartModel m{cfg.ensemble.dim, cfg.ensemble.charges};
    for (double x : xs)
        for (double y : xs) {
            out.columns[0].push_back(x);
            out.columns[1].push_back(y);
            out.columns[2].push_back(
                wishart::kernel(m.dim, x, y, m, wishart::KernelForm::sum));
            out.columns[3].push_back(
                wishart::kernel(m.dim, x, y, m, wishart::KernelForm::integral));
        }
}

void run_real_prob(const ExperimentConfig& cfg, ResultBundle& out) {
    eigenexact::EigenModel m{1, cfg.ensemble.dim, cfg.ensemble.charges};
    const double p = eigenexact::prob_all_real(m);
    out.scalars.push_back({"prob_all_real", p});
    if (cfg.samples > 0) {
        std::vector<int> hits(cfg.samples, 0);
        parallel_for(cfg.samples, cfg.parallel_width, [&](long r) {
            const auto ft =
                sampling::finite_time_exponents(cfg.ensemble, cfg.seed, r);
            hits[r] = (ft.real_count == cfg.ensemble.dim) ? 1 : 0;
        });
        long total = 0;
        for (int h : hits) total += h;
        const double frac = double(total) / double(cfg.samples);
        const double z = (frac - p) /
                         std::sqrt(p * (1.0 - p) / double(cfg.samples));
        out.scalars.push_back({"mc_fraction", frac});
        out.scalars.push_back({"binomial_z", z});
    }
}

void run_lyapunov(const ExperimentConfig& cfg, ResultBundle& out) {
    const int N = cfg.ensemble.dim;
    const int n = cfg.ensemble.factors();
    out.column_names = {"realization", "k", "lyapunov", "stability", "phase"};
    out.columns.assign(5, {});
    std::vector<sampling::FiniteTimeExponents> fts(cfg.samples);
    parallel_for(cfg.samples, cfg.parallel_width, [&](long r) {
        fts[r] = sampling::finite_time_exponents(cfg.ensemble, cfg.seed, r);
    });
    for (long r = 0; r < cfg.samples; ++r) {
        for (int k = 0; k < N; ++k) {
            out.columns[0].push_back(double(r));
            out.columns[1].push_back(double(k + 1));
            out.columns[2].push_back(fts[r].lyapunov[k]);
            out.columns[3].push_back(fts[r].stability[k]);
            out.columns[4].push_back(fts[r].phases[k]);
        }
    }
    const double nu_inf = cfg.ensemble.charges.back();
    for (int k = 1; k <= N; ++k) {
        const auto law =
            asymptotics::exponent_law(cfg.ensemble.beta, nu_inf, k);
        std::vector<double> std_samples;
        double mean = 0.0;
        for (long r = 0; r < cfg.samples; ++r) {
            const double v = fts[r].lyapunov[k - 1];
            mean += v;
            std_samples.push_back((v - law.mu) /
                                  (law.sigma / std::sqrt(double(n))));
        }
        mean /= double(cfg.samples);
        const auto st = compare(std_samples, [](double x) {
            return 0.5 * std::erfc(-x / std::sqrt(2.0));
        });
        const std::string suffix = "_k" + std::to_string(k);
        out.scalars.push_back({"mu" + suffix, law.mu});
        out.scalars.push_back({"sigma_scaled" + suffix,
                               law.sigma / std::sqrt(double(n))});
        out.scalars.push_back({"mean" + suffix, mean});
        out.scalars.push_back({"ks" + suffix, st.ks});
    }
}

void run_fc(const ExperimentConfig& cfg, ResultBundle& out) {
    const int n = cfg.ensemble.factors();
    const double edge = wishart::fc_support_edge(n);
    Grid grid = cfg.grid.value_or(Grid{edge * 1e-3, edge * 0.999, 200, false});
    const auto xs = grid.values();
    out.column_names = {"x", "density"};
    out.columns.assign(2, {});
    for (double x : xs) {
        out.columns[0].push_back(x);
        out.columns[1].push_back(wishart::fc_density(n, x));
    }
    for (int s = 0; s <= 4; ++s)
        out.scalars.push_back(
            {"moment_s" + std::to_string(s), wishart::fc_moment(n, s)});
    if (cfg.samples > 0) {
        const int N = cfg.ensemble.dim;
        std::vector<std::vector<double>> per(cfg.samples);
        parallel_for(cfg.samples, cfg.parallel_width, [&](long r) {
            const auto logs =
                sampling::log_squared_singular_values(sampling::product_chain(
                    cfg.ensemble, sampling::ChainMode::rectangular, cfg.seed,
                    r));
            for (double lv : logs)
                per[r].push_back(std::exp(lv - n * std::log(double(N))));
        });
        std::vector<double> vals;
        for (const auto& p : per) vals.insert(vals.end(), p.begin(), p.end());
        const auto st = compare(vals, [&](double x) {
            if (x <= 0.0) return 0.0;
            if (x >= edge) return 1.0;
            quadrature::Options opt{1e-9, 1e-7, 2048};
            // integrate in t = x^{1/3}-style variable to absorb the edge
            return quadrature::integrate(
                [&](double t) {
                    const double u = std::pow(t, n + 1.0);
                    if (u <= 0.0 || u >= edge) return 0.0;
                    return wishart::fc_density(n, u, wishart::FcForm::trig) *
                           (n + 1.0) * std::pow(t, double(n));
                },
                0.0, std::pow(x, 1.0 / (n + 1.0)), opt);
        });
        out.scalars.push_back({"ks", st.ks});
    }
}

void run_mutual_info(const ExperimentConfig& cfg, ResultBundle& out) {
    const int n = cfg.ensemble.factors();
    Grid grid = cfg.grid.value_or(Grid{0.1, 100.0, 40, true});
    out.column_names = {"snr", "info", "info_quadrature"};
    out.columns.assign(3, {});
    for (double g : grid.values()) {
        out.columns[0].push_back(g);
        out.columns[1].push_back(wishart::mutual_info(n, g));
        out.columns[2].push_back(wishart::mutual_info_quadrature(n, g));
    }
}

}  // namespace

ResultBundle run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    ResultBundle out;
    out.config = config;
    switch (config.experiment) {
        case Experiment::spectra:
            run_spectra(config, out);
            break;
        case Experiment::density_curve:
            run_density(config, out);
            break;
        case Experiment::kernel_grid:
            run_kernel(config, out);
            break;
        case Experiment::real_prob:
            run_real_prob(config, out);
            break;
        case Experiment::lyapunov:
            run_lyapunov(config, out);
            break;
        case Experiment::fc:
            run_fc(config, out);
            break;
        case Experiment::mutual_info:
            run_mutual_info(config, out);
            break;
        case Experiment::verify: {
            const auto checks = verify::run_all(config.seed);
            int failed = 0;
            for (const auto& c : checks) {
                out.notes.push_back((c.pass ? "PASS " : "FAIL ") + c.name +
                                    (c.detail.empty() ? "" : " (" + c.detail + ")"));
                if (!c.pass) ++failed;
            }
            out.scalars.push_back({"checks", double(checks.size())});
            out.scalars.push_back({"failed", double(failed)});
            out.verify_failed = failed > 0;
            break;
        }
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
}

std::string to_csv(const ResultBundle& bundle) {
    std::ostringstream os;
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(bundle.config.config_hash()));
    os << "# experiment=" << experiment_name(bundle.config.experiment) << "\n";
    os << "# config=" << bundle.config.canonical_string() << "\n";
    os << "# hash=" << hex << "\n";
    for (const auto& [k, v] : bundle.scalars)
        os << "# " << k << "=" << fmt17(v) << "\n";
    for (const auto& note : bundle.notes) os << "# " << note << "\n";
    if (!bundle.column_names.empty()) {
        for (size_t c = 0; c < bundle.column_names.size(); ++c)
            os << (c ? "," : "") << bundle.column_names[c];
        os << "\n";
        const size_t rows = bundle.columns.empty() ? 0 : bundle.columns[0].size();
        for (size_t r = 0; r < rows; ++r) {
            for (size_t c = 0; c < bundle.columns.size(); ++c)
                os << (c ? "," : "") << fmt17(bundle.columns[c][r]);
            os << "\n";
        }
    }
    return os.str();
}

std::string to_json(const ResultBundle& bundle) {
    json j;
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(bundle.config.config_hash()));
    j["experiment"] = experiment_name(bundle.config.experiment);
    j["config"] = {
        {"beta", bundle.config.ensemble.beta},
        {"dim", bundle.config.ensemble.dim},
        {"charges", bundle.config.ensemble.charges},
        {"kind", bundle.config.kind == SpectrumKind::eigenvalues ? "eigen"
                                                                 : "sv"},
        {"samples", bundle.config.samples},
        {"seed", bundle.config.seed},
    };
    if (bundle.config.grid) {
        j["config"]["grid"] = {{"min", bundle.config.grid->min},
                               {"max", bundle.config.grid->max},
                               {"points", bundle.config.grid->points},
                               {"log", bundle.config.grid->log_scale}};
    }
    j["hash"] = hex;
    json scalars = json::object();
    for (const auto& [k, v] : bundle.scalars) scalars[k] = v;
    j["scalars"] = scalars;
    j["columns"] = bundle.column_names;
    json data = json::array();
    for (const auto& col : bundle.columns) data.push_back(col);
    j["data"] = data;
    j["notes"] = bundle.notes;
    return j.dump(2) + "\n";
}

void emit(const ResultBundle& bundle, OutputFormat format,
          const std::string& path) {
    const std::string text =
        format == OutputFormat::csv ? to_csv(bundle) : to_json(bundle);
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open " + path);
    out << text;
    if (!out) throw std::runtime_error("emit: write failed for " + path);
}

}  // namespace rmp::harness

