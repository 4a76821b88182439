#ifndef AGSLM_EXPERIMENT_HPP
#define AGSLM_EXPERIMENT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "agslm/analytics.hpp"
#include "agslm/slm.hpp"

namespace agslm {

inline constexpr const char* kVersion = "1.0.0";

enum class OutputFormat { Csv, Json };

struct ExperimentSpec {
    std::vector<SlmConfig> configs;
    std::uint64_t trials = 100000;
    std::uint64_t master_seed = 1;    ///< overrides each config's seed
    std::string output;               ///< empty = stdout only
    OutputFormat format = OutputFormat::Csv;
    bool verify = false;              ///< recheck AG selections against the baseline oracle
    unsigned threads = 0;             ///< 0 = hardware concurrency

    void validate() const;
};

/// Per-config cost record over a batch of trials. Aggregates are exact
/// integer sums over the recorded per-trial values, so they do not depend
/// on worker count or merge order.
struct ComplexityReport {
    CostUnit unit = CostUnit::CPoints;
    std::uint64_t t_c_points = 0;             ///< raw c-points per T (display divisor)
    std::vector<std::uint64_t> per_trial;     ///< raw cost per trial, trial order
    std::vector<std::uint64_t> abort_counts;  ///< aborts per candidate index
    std::vector<std::uint64_t> a_histogram;   ///< histogram of generated-sample counts (1..N)

    double divisor() const { return unit == CostUnit::CPoints ? static_cast<double>(t_c_points) : 1.0; }
    double mean() const;         ///< in display units (T or additions)
    double standard_error() const;

    /// Combine two shards: order-independent on all aggregates.
    void merge(const ComplexityReport& other);
};

struct ConfigResult {
    SlmConfig config;
    ComplexityReport report;
    std::vector<double> papr_db;  ///< selected PAPR per trial
    double baseline_mean = 0.0;   ///< cost of the non-AG form in display units (exact where closed-form)
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<ConfigResult> results;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Run baseline and AG forms trial by trial and compare selections,
/// samples, and per-trial costs.
struct EquivalenceSummary {
    std::uint64_t trials = 0;
    std::uint64_t selection_mismatches = 0;
    std::uint64_t sample_mismatches = 0;
    std::uint64_t papr_mismatches = 0;
    std::uint64_t cost_violations = 0; ///< trials where AG cost exceeded baseline cost

    bool clean() const {
        return selection_mismatches == 0 && sample_mismatches == 0 && papr_mismatches == 0 &&
               cost_violations == 0;
    }
};
EquivalenceSummary verify_ag_equivalence(const SlmConfig& cfg, std::uint64_t trials,
                                         unsigned threads = 0);

enum class TableId { I, II, III, IV };

struct TableCell {
    std::string row;          ///< e.g. "with AG"
    std::string column;       ///< e.g. "U=16" or "gamma0=8.0dB"
    double reference = 0.0;   ///< published value the run is compared against
    double measured = 0.0;
    double standard_error = 0.0;
    bool deterministic = false; ///< closed-form value, no Monte Carlo noise
};

struct TableResult {
    TableId id;
    std::string title;
    std::vector<TableCell> cells;
};

TableResult reproduce_table(TableId which, std::uint64_t trials, std::uint64_t seed,
                            unsigned threads = 0);

/// Analytic vs simulated relative complexity of conventional + AG at the
/// Nyquist rate (L = 1).
struct Fig7Point {
    int candidates = 0;
    double analytic = 0.0;
    double simulated = 0.0;
};
std::vector<Fig7Point> fig7_compare(std::size_t n_samples, int u_min, int u_max,
                                    std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

/// K(a)/T samples for one transform size.
struct KCurvePoint {
    std::uint64_t a = 0;
    double relative = 0.0;
};
std::vector<KCurvePoint> k_curve(std::size_t n_samples);

/// Empirical CCDF over a sample set: P(PAPR > value) at each distinct value.
struct CcdfPoint {
    double papr_db = 0.0;
    double probability = 0.0;
};
std::vector<CcdfPoint> empirical_ccdf(std::vector<double> papr_samples_db);

// Machine-readable emission. CSV is RFC-4180 with a header row; JSON has
// top-level keys {spec, results, version}.
void write_experiment_csv(std::ostream& os, const ExperimentResult& result);
void write_experiment_json(std::ostream& os, const ExperimentResult& result);
void write_table_csv(std::ostream& os, const TableResult& table);
void write_table_json(std::ostream& os, const TableResult& table);
void write_fig7_csv(std::ostream& os, const std::vector<Fig7Point>& points);
void write_fig7_json(std::ostream& os, const std::vector<Fig7Point>& points);
void write_kcurve_csv(std::ostream& os, std::size_t n_samples, const std::vector<KCurvePoint>& points);
void write_ccdf_csv(std::ostream& os, const std::vector<CcdfPoint>& points);
void write_ccdf_json(std::ostream& os, const std::vector<CcdfPoint>& points);

} // namespace agslm

#endif // AGSLM_EXPERIMENT_HPP
