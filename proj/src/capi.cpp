#include "rmprod.h"

#include <cstring>
#include <memory>
#include <string>

#include "asymptotics.hpp"
#include "eigen_exact.hpp"
#include "harness.hpp"
#include "sampling.hpp"
#include "specfun.hpp"
#include "wishart.hpp"

namespace {

thread_local std::string g_last_error;

template <typename F>
rmp_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return RMP_OK;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return RMP_EINVAL;
    } catch (const rmp::specfun::DomainError& e) {
        g_last_error = e.what();
        return RMP_EINVAL;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return RMP_ENOMEM;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RMP_EFAIL;
    }
}

rmp_status invalid(const char* msg) {
    g_last_error = msg;
    return RMP_EINVAL;
}

}  // namespace

struct rmp_ensemble {
    rmp::sampling::EnsembleSpec spec;
};

struct rmp_config {
    rmp::harness::ExperimentConfig cfg;
};

struct rmp_result {
    rmp::harness::ResultBundle bundle;
    std::string rendered;
};

extern "C" {

const char* rmp_version(void) { return "1.0.0"; }

const char* rmp_last_error(void) { return g_last_error.c_str(); }

rmp_status rmp_ensemble_create(int beta, int dim, const double* charges,
                               size_t nfactors, rmp_ensemble** out) {
    if (out == nullptr || (charges == nullptr && nfactors > 0))
        return invalid("ensemble_create: null argument");
    return guarded([&] {
        auto e = std::make_unique<rmp_ensemble>();
        e->spec.beta = beta;
        e->spec.dim = dim;
        e->spec.charges.assign(charges, charges + nfactors);
        e->spec.validate();
        *out = e.release();
    });
}

void rmp_ensemble_destroy(rmp_ensemble* e) { delete e; }

rmp_status rmp_fc_moment(int nfactors, double s, double* out) {
    if (out == nullptr) return invalid("null output");
    return guarded([&] { *out = rmp::wishart::fc_moment(nfactors, s); });
}

rmp_status rmp_fc_density(int nfactors, double x, int form, double* out) {
    if (out == nullptr) return invalid("null output");
    return guarded([&] {
        *out = rmp::wishart::fc_density(nfactors, x,
                                        form == 1 ? rmp::wishart::FcForm::trig
                                                  : rmp::wishart::FcForm::meijer);
    });
}

rmp_status rmp_fc_support_edge(int nfactors, double* out) {
    if (out == nullptr) return invalid("null output");
    if (nfactors < 1) return invalid("nfactors >= 1");
    return guarded([&] { *out = rmp::wishart::fc_support_edge(nfactors); });
}

rmp_status rmp_wishart_kernel(const rmp_ensemble* e, double x, double y,
                              int form, double* out) {
    if (e == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        rmp::wishart::WishartModel m{e->spec.dim, e->spec.charges};
        *out = rmp::wishart::kernel(m.dim, x, y, m,
                                    form == 1
                                        ? rmp::wishart::KernelForm::integral
                                        : rmp::wishart::KernelForm::sum);
    });
}

rmp_status rmp_wishart_density_moment(const rmp_ensemble* e, int s,
                                      double* out) {
    if (e == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        rmp::wishart::WishartModel m{e->spec.dim, e->spec.charges};
        *out = rmp::wishart::density_moment(s, m);
    });
}

rmp_status rmp_prob_all_real(const rmp_ensemble* e, double* out) {
    if (e == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        rmp::eigenexact::EigenModel m{1, e->spec.dim, e->spec.charges};
        *out = rmp::eigenexact::prob_all_real(m);
    });
}

rmp_status rmp_mutual_info(int nfactors, double snr, double* out) {
    if (out == nullptr) return invalid("null output");
    return guarded([&] { *out = rmp::wishart::mutual_info(nfactors, snr); });
}

rmp_status rmp_exponent_law(int beta, double nu_inf, int k, double* mu,
                            double* sigma) {
    if (mu == nullptr || sigma == nullptr) return invalid("null output");
    return guarded([&] {
        const auto law = rmp::asymptotics::exponent_law(beta, nu_inf, k);
        *mu = law.mu;
        *sigma = law.sigma;
    });
}

rmp_status rmp_macro_radial(const rmp_ensemble* e, double r,
                            const double* alphas, size_t nalphas,
                            double* out) {
    if (e == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        rmp::eigenexact::EigenModel m{2, e->spec.dim, e->spec.charges};
        std::vector<double> a(alphas, alphas + nalphas);
        *out = rmp::eigenexact::macro_radial(m, r, a);
    });
}

rmp_status rmp_macro_radial_cdf(const rmp_ensemble* e, double r,
                                const double* alphas, size_t nalphas,
                                double* out) {
    if (e == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        rmp::eigenexact::EigenModel m{2, e->spec.dim, e->spec.charges};
        std::vector<double> a(alphas, alphas + nalphas);
        *out = rmp::eigenexact::macro_radial_cdf(m, r, a);
    });
}

rmp_status rmp_triangular_density(double x, double* out) {
    if (out == nullptr) return invalid("null output");
    *out = rmp::asymptotics::triangular_density(x);
    return RMP_OK;
}

rmp_status rmp_triangular_cdf(double x, double* out) {
    if (out == nullptr) return invalid("null output");
    *out = rmp::asymptotics::triangular_cdf(x);
    return RMP_OK;
}

rmp_status rmp_meijer_g(int m, int n, const double* a, size_t p,
                        const double* b, size_t q, double x, double* out) {
    if (out == nullptr || (a == nullptr && p > 0) || (b == nullptr && q > 0))
        return invalid("null argument");
    return guarded([&] {
        rmp::specfun::MeijerGSpec spec(m, n, std::vector<double>(a, a + p),
                                       std::vector<double>(b, b + q));
        *out = rmp::specfun::meijer_g(spec, x);
    });
}

rmp_status rmp_finite_time_exponents(const rmp_ensemble* e, uint64_t seed,
                                     uint64_t realization, double* lyapunov,
                                     double* stability, double* phases,
                                     int* real_count) {
    if (e == nullptr) return invalid("null ensemble");
    return guarded([&] {
        const auto ft =
            rmp::sampling::finite_time_exponents(e->spec, seed, realization);
        for (int k = 0; k < e->spec.dim; ++k) {
            if (lyapunov != nullptr) lyapunov[k] = ft.lyapunov[k];
            if (stability != nullptr) stability[k] = ft.stability[k];
            if (phases != nullptr) phases[k] = ft.phases[k];
        }
        if (real_count != nullptr) *real_count = ft.real_count;
    });
}

rmp_status rmp_config_create(rmp_config** out) {
    if (out == nullptr) return invalid("null output");
    return guarded([&] { *out = new rmp_config(); });
}

void rmp_config_destroy(rmp_config* c) { delete c; }

rmp_status rmp_config_set_ensemble(rmp_config* c, const rmp_ensemble* e) {
    if (c == nullptr || e == nullptr) return invalid("null argument");
    c->cfg.ensemble = e->spec;
    return RMP_OK;
}

rmp_status rmp_config_set_experiment(rmp_config* c, const char* name) {
    if (c == nullptr || name == nullptr) return invalid("null argument");
    return guarded(
        [&] { c->cfg.experiment = rmp::harness::experiment_from_name(name); });
}

rmp_status rmp_config_set_kind(rmp_config* c, const char* kind) {
    if (c == nullptr || kind == nullptr) return invalid("null argument");
    const std::string k = kind;
    if (k == "eigen") {
        c->cfg.kind = rmp::harness::SpectrumKind::eigenvalues;
    } else if (k == "sv") {
        c->cfg.kind = rmp::harness::SpectrumKind::squared_singular_values;
    } else {
        return invalid("kind must be eigen or sv");
    }
    return RMP_OK;
}

rmp_status rmp_config_set_samples(rmp_config* c, long samples) {
    if (c == nullptr) return invalid("null config");
    c->cfg.samples = samples;
    return RMP_OK;
}

rmp_status rmp_config_set_seed(rmp_config* c, uint64_t seed) {
    if (c == nullptr) return invalid("null config");
    c->cfg.seed = seed;
    return RMP_OK;
}

rmp_status rmp_config_set_threads(rmp_config* c, int threads) {
    if (c == nullptr) return invalid("null config");
    if (threads < 1) return invalid("threads >= 1");
    c->cfg.parallel_width = threads;
    return RMP_OK;
}

rmp_status rmp_config_set_grid(rmp_config* c, double min, double max,
                               int points, int log_scale) {
    if (c == nullptr) return invalid("null config");
    c->cfg.grid = rmp::harness::Grid{min, max, points, log_scale != 0};
    return RMP_OK;
}

rmp_status rmp_run(const rmp_config* c, rmp_result** out) {
    if (c == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        auto r = std::make_unique<rmp_result>();
        r->bundle = rmp::harness::run_experiment(c->cfg);
        *out = r.release();
    });
}

void rmp_result_destroy(rmp_result* r) { delete r; }

rmp_status rmp_result_render(const rmp_result* r, const char* format,
                             const char** text) {
    if (r == nullptr || format == nullptr || text == nullptr)
        return invalid("null argument");
    return guarded([&] {
        auto* mut = const_cast<rmp_result*>(r);
        const std::string f = format;
        if (f == "csv") {
            mut->rendered = rmp::harness::to_csv(r->bundle);
        } else if (f == "json") {
            mut->rendered = rmp::harness::to_json(r->bundle);
        } else {
            throw std::invalid_argument("format must be csv or json");
        }
        *text = mut->rendered.c_str();
    });
}

rmp_status rmp_result_write(const rmp_result* r, const char* format,
                            const char* path) {
    if (r == nullptr || format == nullptr || path == nullptr)
        return invalid("null argument");
    return guarded([&] {
        const std::string f = format;
        if (f != "csv" && f != "json")
            throw std::invalid_argument("format must be csv or json");
        rmp::harness::emit(r->bundle,
                           f == "csv" ? rmp::harness::OutputFormat::csv
                                      : rmp::harness::OutputFormat::json,
                           path);
    });
}

rmp_status rmp_result_scalar(const rmp_result* r, const char* name,
                             double* out) {
    if (r == nullptr || name == nullptr || out == nullptr)
        return invalid("null argument");
    for (const auto& [k, v] : r->bundle.scalars) {
        if (k == name) {
            *out = v;
            return RMP_OK;
        }
    }
    g_last_error = std::string("no scalar named ") + name;
    return RMP_EINVAL;
}

int rmp_result_verify_failed(const rmp_result* r) {
    return (r != nullptr && r->bundle.verify_failed) ? 1 : 0;
}

}  // extern "C"

