#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "harness.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "wishart.hpp"

#include <json.hpp>

using namespace rmp;
using namespace rmp::harness;

TEST_CASE("grid generation") {
    Grid g{1.0, 4.0, 4, false};
    const auto xs = g.values();
    REQUIRE(xs.size() == 4);
    CHECK(xs.front() == 1.0);
    CHECK(xs.back() == 4.0);
    Grid lg{1.0, 100.0, 3, true};
    const auto ls = lg.values();
    CHECK(ls[1] == doctest::Approx(10.0));
}

TEST_CASE("histogram") {
    const auto h = histogram({0.1, 0.6, 0.7}, {0.0, 0.5, 1.0});
    REQUIRE(h.counts.size() == 2);
    CHECK(h.counts[0] == 1.0);
    CHECK(h.counts[1] == 2.0);
    CHECK(h.dropped == 0);
    double mass = 0.0;
    for (size_t i = 0; i < h.counts.size(); ++i)
        mass += h.density[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    // dropped accounting
    const auto h2 = histogram({-1.0, 0.2, 3.0}, {0.0, 0.5, 1.0});
    CHECK(h2.dropped == 2);
    CHECK(h2.counts[0] + h2.counts[1] + h2.dropped == 3);
    // empty data
    const auto h3 = histogram({}, {0.0, 1.0});
    CHECK(h3.empty);
    CHECK(h3.density[0] == 0.0);
}

TEST_CASE("compare statistics") {
    // identical CDFs -> ks = 0 (on the sample's own empirical CDF grid)
    std::vector<double> u;
    rng::Stream st(5, 0);
    for (int i = 0; i < 10000; ++i) u.push_back(st.next_double());
    const auto ks =
        compare(u, [](double x) { return std::min(std::max(x, 0.0), 1.0); });
    CHECK(ks.ks < 0.025);
    // shifted uniform: ks equals the shift
    std::vector<double> shifted;
    for (double x : u) shifted.push_back(x + 0.2);
    const auto ks2 = compare(shifted, [](double x) {
        return std::min(std::max(x, 0.0), 1.0);
    });
    CHECK(ks2.ks == doctest::Approx(0.2).epsilon(5e-2));
    // ks < 0.025 for uniform draws holds with high frequency
    int good = 0;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> v;
        rng::Stream s2(6, rep);
        for (int i = 0; i < 10000; ++i) v.push_back(s2.next_double());
        const auto k = compare(v, [](double x) {
            return std::min(std::max(x, 0.0), 1.0);
        });
        if (k.ks < 0.025) ++good;
    }
    CHECK(good >= 19);
}

TEST_CASE("real-prob experiment analytic value") {
    ExperimentConfig cfg;
    cfg.ensemble = {1, 2, {0.0, 0.0}};
    cfg.experiment = Experiment::real_prob;
    cfg.samples = 0;
    const auto bundle = run_experiment(cfg);
    REQUIRE(bundle.scalars.size() >= 1);
    CHECK(bundle.scalars[0].first == "prob_all_real");
    CHECK(bundle.scalars[0].second == doctest::Approx(0.785).epsilon(1e-3));
}

TEST_CASE("fc experiment curve") {
    ExperimentConfig cfg;
    cfg.ensemble = {2, 4, {0.0}};
    cfg.experiment = Experiment::fc;
    cfg.samples = 0;
    cfg.grid = Grid{0.04, 4.0, 100, false};
    const auto bundle = run_experiment(cfg);
    REQUIRE(bundle.columns.size() == 2);
    // value at x = 2 on the grid
    const auto& xs = bundle.columns[0];
    const auto& ys = bundle.columns[1];
    for (size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - 2.0) < 0.021)
            CHECK(ys[i] == doctest::Approx(0.1591549).epsilon(2e-2));
    }
}

TEST_CASE("determinism across parallel widths and runs") {
    for (auto experiment : {Experiment::spectra, Experiment::lyapunov}) {
        ExperimentConfig cfg;
        cfg.ensemble = {2, 3, {0.0, 1.0}};
        cfg.experiment = experiment;
        cfg.samples = 40;
        cfg.seed = 99;
        cfg.parallel_width = 1;
        const std::string a = to_csv(run_experiment(cfg));
        cfg.parallel_width = 4;
        const std::string b = to_csv(run_experiment(cfg));
        CHECK(a == b);
        const std::string c = to_csv(run_experiment(cfg));
        CHECK(b == c);
    }
}

TEST_CASE("csv and json rendering") {
    ExperimentConfig cfg;
    cfg.ensemble = {2, 2, {0.0}};
    cfg.experiment = Experiment::fc;
    cfg.samples = 0;
    cfg.grid = Grid{0.5, 3.5, 3, false};
    const auto bundle = run_experiment(cfg);
    const std::string csv = to_csv(bundle);
    CHECK(csv.find("# experiment=fc") == 0);
    CHECK(csv.find("# hash=") != std::string::npos);
    // 3 data rows after the column header
    int rows = 0;
    bool seen_header = false;
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("#", 0) == 0) continue;
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        ++rows;
    }
    CHECK(rows == 3);

    // JSON round-trip of the payload
    const std::string js = to_json(bundle);
    const auto parsed = nlohmann::json::parse(js);
    CHECK(parsed["experiment"] == "fc");
    CHECK(parsed["data"].size() == bundle.columns.size());
    for (size_t c = 0; c < bundle.columns.size(); ++c)
        for (size_t r = 0; r < bundle.columns[c].size(); ++r)
            CHECK(double(parsed["data"][c][r]) == bundle.columns[c][r]);
    CHECK(parsed["config"]["seed"] == bundle.config.seed);

    // hash changes with the seed
    ExperimentConfig cfg2 = cfg;
    cfg2.seed = cfg.seed + 1;
    CHECK(cfg2.config_hash() != cfg.config_hash());
}

TEST_CASE("config validation errors") {
    ExperimentConfig cfg;
    cfg.ensemble = {2, 0, {0.0}};
    CHECK_THROWS(run_experiment(cfg));
    ExperimentConfig cfg2;
    cfg2.ensemble = {2, 2, {0.0}};
    cfg2.experiment = Experiment::spectra;
    cfg2.samples = 0;
    CHECK_THROWS(run_experiment(cfg2));
    ExperimentConfig cfg3;
    cfg3.ensemble = {2, 2, {0.0}};
    cfg3.grid = Grid{2.0, 1.0, 10, false};
    CHECK_THROWS(run_experiment(cfg3));
}

TEST_CASE("density experiment with Monte Carlo comparison") {
    ExperimentConfig cfg;
    cfg.ensemble = {2, 8, {0.0, 0.0}};
    cfg.experiment = Experiment::density_curve;
    cfg.kind = SpectrumKind::squared_singular_values;
    cfg.samples = 400;
    cfg.seed = 31;
    cfg.parallel_width = 4;
    cfg.grid = Grid{0.0, 250.0, 26, false};
    const auto bundle = run_experiment(cfg);
    double sup = -1.0;
    for (const auto& [k, v] : bundle.scalars)
        if (k == "sup_norm") sup = v;
    REQUIRE(sup >= 0.0);
    CHECK(sup < 0.05);
}
