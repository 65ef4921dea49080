#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sampling.hpp"

namespace rmp::harness {

enum class Experiment {
    spectra,
    density_curve,
    kernel_grid,
    real_prob,
    lyapunov,
    fc,
    mutual_info,
    verify,
};

enum class SpectrumKind { eigenvalues, squared_singular_values };

struct Grid {
    double min = 0.0;
    double max = 1.0;
    int points = 100;
    bool log_scale = false;
    std::vector<double> values() const;
};

enum class OutputFormat { csv, json };

struct ExperimentConfig {
    sampling::EnsembleSpec ensemble;
    Experiment experiment = Experiment::fc;
    SpectrumKind kind = SpectrumKind::eigenvalues;
    long samples = 1;
    std::uint64_t seed = 1;
    int parallel_width = 1;
    std::optional<Grid> grid;
    std::string output_path;  // empty: stdout
    OutputFormat format = OutputFormat::csv;

    void validate() const;
    // Stable hash of every field that affects results.
    std::uint64_t config_hash() const;
    std::string canonical_string() const;
};

Experiment experiment_from_name(const std::string& name);
std::string experiment_name(Experiment e);

struct Histogram {
    std::vector<double> bin_edges;  // ascending, counts.size() + 1
    std::vector<double> counts;
    std::vector<double> density;  // counts / (total kept * width)
    long dropped = 0;
    bool empty = false;
};

Histogram histogram(const std::vector<double>& data,
                    const std::vector<double>& edges);

struct ComparisonStat {
    double ks = 0.0;        // sup |F_emp - F_ana|
    double sup_norm = 0.0;  // sup 1 |density difference| on bin centers
    double binomial_z = 0.0;
};

// KS of sorted samples against an analytic CDF; sup-norm of the histogram
// density against the analytic density averaged per bin.
ComparisonStat compare(std::vector<double> samples,
                       const std::function<double(double)>& cdf);
ComparisonStat compare_histogram(const Histogram& hist,
                                 const std::function<double(double)>& density);

struct ResultBundle {
    ExperimentConfig config;
    // Curve data: aligned columns (x plus one or more value columns).
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;
    // Scalar summaries (name -> value), canonically ordered.
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<std::string> notes;
    double wall_seconds = 0.0;
    bool verify_failed = false;
};

ResultBundle run_experiment(const ExperimentConfig& config);

std::string to_csv(const ResultBundle& bundle);
std::string to_json(const ResultBundle& bundle);
void emit(const ResultBundle& bundle, OutputFormat format,
          const std::string& path);

// Deterministic fan-out of `count` realizations over `width` workers; the
// task sees the realization index and owns its substream.
void parallel_for(long count, int width,
                  const std::function<void(long)>& task);

}  // namespace rmp::harness
