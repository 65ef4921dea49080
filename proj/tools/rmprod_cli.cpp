// Command-line front end for the rmprod shared library. Talks to the C API
// only.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmprod.h"

namespace {

struct Options {
    int beta = 2;
    int dim = 4;
    int factors = 1;
    std::vector<double> charges;
    long samples = 0;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string grid;
    std::string out_path;
    std::string format = "csv";
    std::string kind = "eigen";
};

int fail(const char* stage) {
    std::fprintf(stderr, "rmprod: %s: %s\n", stage, rmp_last_error());
    return 2;
}

bool parse_grid(const std::string& s, double& lo, double& hi, int& pts,
                bool& logf) {
    if (s.empty()) return false;
    double a, b;
    int n;
    char tail[8] = {0};
    const int got =
        std::sscanf(s.c_str(), "%lf:%lf:%d:%3s", &a, &b, &n, tail);
    if (got < 3) return false;
    lo = a;
    hi = b;
    pts = n;
    logf = (got == 4 && std::string(tail) == "log");
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"products of independent Gaussian random matrices"};
    app.require_subcommand(1);

    Options opt;
    std::string experiment;
    for (const char* name : {"spectra", "density", "kernel", "fc", "real-prob",
                             "lyapunov", "mutual-info", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--beta", opt.beta, "Dyson index (1, 2 or 4)");
        sub->add_option("--dim", opt.dim, "matrix dimension N");
        sub->add_option("--factors", opt.factors,
                        "number of factors (all charges 0)");
        sub->add_option("--charges", opt.charges,
                        "comma-separated charges, one per factor")
            ->delimiter(',');
        sub->add_option("--samples", opt.samples, "Monte Carlo realizations");
        sub->add_option("--seed", opt.seed, "RNG seed");
        sub->add_option("--threads", opt.threads, "worker pool width");
        sub->add_option("--grid", opt.grid, "min:max:points[:log]");
        sub->add_option("--out", opt.out_path, "output path (default stdout)");
        sub->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--kind", opt.kind, "spectrum kind: eigen or sv")
            ->check(CLI::IsMember({"eigen", "sv"}));
        sub->callback([&experiment, name] { experiment = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (opt.charges.empty()) opt.charges.assign(opt.factors, 0.0);

    rmp_ensemble* ens = nullptr;
    if (rmp_ensemble_create(opt.beta, opt.dim, opt.charges.data(),
                            opt.charges.size(), &ens) != RMP_OK)
        return fail("ensemble");

    rmp_config* cfg = nullptr;
    if (rmp_config_create(&cfg) != RMP_OK) return fail("config");
    rmp_config_set_ensemble(cfg, ens);
    if (rmp_config_set_experiment(cfg, experiment.c_str()) != RMP_OK)
        return fail("experiment");
    rmp_config_set_kind(cfg, opt.kind.c_str());
    rmp_config_set_samples(cfg, opt.samples);
    rmp_config_set_seed(cfg, opt.seed);
    if (rmp_config_set_threads(cfg, opt.threads) != RMP_OK)
        return fail("threads");
    if (!opt.grid.empty()) {
        double glo, ghi;
        int gp;
        bool glog;
        if (!parse_grid(opt.grid, glo, ghi, gp, glog)) {
            std::fprintf(stderr, "rmprod: bad --grid (min:max:points[:log])\n");
            return 2;
        }
        rmp_config_set_grid(cfg, glo, ghi, gp, glog ? 1 : 0);
    }

    rmp_result* res = nullptr;
    const rmp_status rc = rmp_run(cfg, &res);
    if (rc != RMP_OK) {
        std::fprintf(stderr, "rmprod: %s\n", rmp_last_error());
        rmp_config_destroy(cfg);
        rmp_ensemble_destroy(ens);
        return rc == RMP_EINVAL ? 2 : 3;
    }

    int exit_code = 0;
    if (opt.out_path.empty()) {
        const char* text = nullptr;
        if (rmp_result_render(res, opt.format.c_str(), &text) != RMP_OK)
            exit_code = 2;
        else
            std::fputs(text, stdout);
    } else {
        if (rmp_result_write(res, opt.format.c_str(), opt.out_path.c_str()) !=
            RMP_OK) {
            std::fprintf(stderr, "rmprod: %s\n", rmp_last_error());
            exit_code = 2;
        }
    }
    if (experiment == "verify" && rmp_result_verify_failed(res)) exit_code = 3;

    rmp_result_destroy(res);
    rmp_config_destroy(cfg);
    rmp_ensemble_destroy(ens);
    return exit_code;
}
