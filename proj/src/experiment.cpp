#include "agslm/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "agslm/ifft.hpp"

namespace agslm {

namespace {

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Split [0, trials) into contiguous chunks, one worker thread per chunk.
void parallel_trials(std::uint64_t trials, unsigned threads,
                     const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& body) {
    const unsigned workers = std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(trials, 1));
    if (workers <= 1) {
        body(0, 0, trials);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = std::min<std::uint64_t>(w * chunk, trials);
        const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, trials);
        pool.emplace_back([&, w, begin, end] {
            try {
                body(w, begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string fmt_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

double closed_form_baseline(const SlmConfig& cfg) {
    const unsigned stages = log2_exact(cfg.ifft_size());
    switch (cfg.scheme) {
        case SlmScheme::Conventional:
            return static_cast<double>(cfg.candidates);
        case SlmScheme::Lim: {
            const double r = cfg.remaining_stages;
            const double n = stages;
            return (n - r) / n + cfg.candidates * (r / n);
        }
        case SlmScheme::Wang:
            return 3.0 * static_cast<double>(cfg.ifft_size()) * (cfg.candidates - 1);
        case SlmScheme::Baxley:
            return std::numeric_limits<double>::quiet_NaN(); // no closed form: stop time is random
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

void ExperimentSpec::validate() const {
    if (trials < 1) {
        throw std::invalid_argument("ExperimentSpec: need at least one trial");
    }
    if (configs.empty()) {
        throw std::invalid_argument("ExperimentSpec: no configurations given");
    }
    for (const auto& cfg : configs) cfg.validate();
}

double ComplexityReport::mean() const {
    if (per_trial.empty()) return 0.0;
    std::uint64_t sum = 0;
    for (auto c : per_trial) sum += c;
    return static_cast<double>(sum) / static_cast<double>(per_trial.size()) / divisor();
}

double ComplexityReport::standard_error() const {
    const std::size_t m = per_trial.size();
    if (m < 2) return 0.0;
    std::uint64_t sum = 0;
    unsigned __int128 sumsq = 0;
    for (auto c : per_trial) {
        sum += c;
        sumsq += static_cast<unsigned __int128>(c) * c;
    }
    const double mean_raw = static_cast<double>(sum) / static_cast<double>(m);
    const double ex2 = static_cast<double>(sumsq) / static_cast<double>(m);
    const double variance = std::max(0.0, (ex2 - mean_raw * mean_raw) * static_cast<double>(m) /
                                              static_cast<double>(m - 1));
    return std::sqrt(variance / static_cast<double>(m)) / divisor();
}

void ComplexityReport::merge(const ComplexityReport& other) {
    if (unit != other.unit || t_c_points != other.t_c_points) {
        throw std::invalid_argument("ComplexityReport::merge: incompatible units");
    }
    per_trial.insert(per_trial.end(), other.per_trial.begin(), other.per_trial.end());
    if (abort_counts.size() < other.abort_counts.size()) abort_counts.resize(other.abort_counts.size(), 0);
    for (std::size_t i = 0; i < other.abort_counts.size(); ++i) abort_counts[i] += other.abort_counts[i];
    if (a_histogram.size() < other.a_histogram.size()) a_histogram.resize(other.a_histogram.size(), 0);
    for (std::size_t i = 0; i < other.a_histogram.size(); ++i) a_histogram[i] += other.a_histogram[i];
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult result;
    result.spec = spec;

    for (const auto& base_cfg : spec.configs) {
        SlmConfig cfg = base_cfg;
        cfg.seed = spec.master_seed;
        const std::size_t n = cfg.ifft_size();

        ConfigResult out;
        out.config = cfg;
        out.baseline_mean = closed_form_baseline(cfg);
        out.report.unit = cfg.scheme == SlmScheme::Wang ? CostUnit::ComplexAdditions : CostUnit::CPoints;
        out.report.t_c_points = static_cast<std::uint64_t>(n) * log2_exact(n);
        out.report.per_trial.assign(spec.trials, 0);
        out.report.abort_counts.assign(cfg.candidates, 0);
        out.report.a_histogram.assign(n + 1, 0);
        out.papr_db.assign(spec.trials, 0.0);

        const unsigned workers = resolve_threads(spec.threads);
        std::vector<std::vector<std::uint64_t>> local_aborts(workers);
        std::vector<std::vector<std::uint64_t>> local_hist(workers);

        parallel_trials(spec.trials, spec.threads, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
            SlmEngine engine(cfg);
            engine.set_collect_signal(spec.verify);
            std::unique_ptr<SlmEngine> oracle;
            if (spec.verify && cfg.ag_enabled) {
                oracle = std::make_unique<SlmEngine>(cfg);
            }
            auto& aborts = local_aborts[w];
            auto& hist = local_hist[w];
            aborts.assign(cfg.candidates, 0);
            hist.assign(n + 1, 0);

            for (std::uint64_t trial = begin; trial < end; ++trial) {
                const auto data = engine.draw_data(trial);
                const auto res = engine.run(data, trial);
                out.report.per_trial[trial] = res.stats.cost_raw;
                out.papr_db[trial] = res.papr_db;
                for (int u = 0; u < cfg.candidates; ++u) {
                    if (res.stats.generated[u] > 0) ++hist[res.stats.generated[u]];
                    if (res.stats.aborted[u]) ++aborts[u];
                }
                if (oracle) {
                    const auto reference = oracle->run_form(data, trial, false);
                    if (reference.selected_u != res.selected_u ||
                        reference.selected_signal.samples != res.selected_signal.samples ||
                        reference.papr_db != res.papr_db ||
                        res.stats.cost_raw > reference.stats.cost_raw) {
                        std::ostringstream oss;
                        oss << "verify: AG/baseline mismatch at trial " << trial << " (scheme "
                            << to_string(cfg.scheme) << ", selected " << res.selected_u << " vs "
                            << reference.selected_u << ")";
                        throw std::runtime_error(oss.str());
                    }
                }
            }
        });

        for (unsigned w = 0; w < workers; ++w) {
            for (std::size_t i = 0; i < local_aborts[w].size(); ++i) {
                out.report.abort_counts[i] += local_aborts[w][i];
            }
            for (std::size_t i = 0; i < local_hist[w].size(); ++i) {
                out.report.a_histogram[i] += local_hist[w][i];
            }
        }
        result.results.push_back(std::move(out));
    }
    return result;
}

EquivalenceSummary verify_ag_equivalence(const SlmConfig& cfg, std::uint64_t trials, unsigned threads) {
    cfg.validate();
    const unsigned workers = resolve_threads(threads);
    std::vector<EquivalenceSummary> local(workers);

    parallel_trials(trials, threads, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
        SlmEngine engine(cfg);
        auto& summary = local[w];
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            const auto data = engine.draw_data(trial);
            const auto baseline = engine.run_form(data, trial, false);
            const auto ag = engine.run_form(data, trial, true);
            ++summary.trials;
            if (baseline.selected_u != ag.selected_u) ++summary.selection_mismatches;
            if (baseline.selected_signal.samples != ag.selected_signal.samples) {
                ++summary.sample_mismatches;
            }
            if (baseline.papr_db != ag.papr_db) ++summary.papr_mismatches;
            if (ag.stats.cost_raw > baseline.stats.cost_raw) ++summary.cost_violations;
        }
    });

    EquivalenceSummary total;
    for (const auto& summary : local) {
        total.trials += summary.trials;
        total.selection_mismatches += summary.selection_mismatches;
        total.sample_mismatches += summary.sample_mismatches;
        total.papr_mismatches += summary.papr_mismatches;
        total.cost_violations += summary.cost_violations;
    }
    return total;
}

namespace {

ConfigResult run_single(const SlmConfig& cfg, std::uint64_t trials, std::uint64_t seed,
                        unsigned threads) {
    ExperimentSpec spec;
    spec.configs = {cfg};
    spec.trials = trials;
    spec.master_seed = seed;
    spec.threads = threads;
    auto result = run_experiment(spec);
    return std::move(result.results.front());
}

} // namespace

TableResult reproduce_table(TableId which, std::uint64_t trials, std::uint64_t seed,
                            unsigned threads) {
    TableResult table;
    table.id = which;

    switch (which) {
        case TableId::I: {
            table.title = "Computational benefit of AG for the conventional scheme";
            const std::size_t n_values[2] = {256, 1024};
            const double ref_ag[2][3] = {{4.21, 6.69, 10.82}, {4.22, 6.65, 10.70}};
            const double ref_ratio[2][3] = {{52.6, 41.8, 33.8}, {52.7, 41.6, 33.4}};
            const int u_values[3] = {8, 16, 32};
            for (int ni = 0; ni < 2; ++ni) {
                for (int ui = 0; ui < 3; ++ui) {
                    SlmConfig cfg;
                    cfg.n_data = n_values[ni];
                    cfg.oversampling = 4;
                    cfg.candidates = u_values[ui];
                    cfg.scheme = SlmScheme::Conventional;
                    cfg.ag_enabled = true;
                    const auto run = run_single(cfg, trials, seed, threads);
                    const std::string col = "N=" + std::to_string(n_values[ni]) +
                                            ",U=" + std::to_string(u_values[ui]);
                    const double baseline = static_cast<double>(u_values[ui]);
                    const double mean = run.report.mean();
                    const double se = run.report.standard_error();
                    table.cells.push_back({"without AG (a)", col, baseline, baseline, 0.0, true});
                    table.cells.push_back({"with AG (b)", col, ref_ag[ni][ui], mean, se, false});
                    table.cells.push_back({"(b)/(a) (%)", col, ref_ratio[ni][ui],
                                           100.0 * mean / baseline, 100.0 * se / baseline, false});
                }
            }
            break;
        }
        case TableId::II: {
            table.title = "Computational benefit of AG for Lim's scheme";
            const double ref_base[3] = {4.5, 8.5, 16.5};
            const double ref_ag[3] = {2.46, 3.48, 5.10};
            const double ref_ratio[3] = {54.7, 40.9, 30.9};
            const int u_values[3] = {8, 16, 32};
            for (int ui = 0; ui < 3; ++ui) {
                SlmConfig cfg;
                cfg.n_data = 256;
                cfg.oversampling = 4;
                cfg.candidates = u_values[ui];
                cfg.scheme = SlmScheme::Lim;
                cfg.remaining_stages = 5;
                cfg.ag_enabled = true;
                const auto run = run_single(cfg, trials, seed, threads);
                const std::string col = "U=" + std::to_string(u_values[ui]);
                const double baseline = closed_form_baseline(cfg);
                const double mean = run.report.mean();
                const double se = run.report.standard_error();
                table.cells.push_back({"without AG (a)", col, ref_base[ui], baseline, 0.0, true});
                table.cells.push_back({"with AG (b)", col, ref_ag[ui], mean, se, false});
                table.cells.push_back({"(b)/(a) (%)", col, ref_ratio[ui], 100.0 * mean / baseline,
                                       100.0 * se / baseline, false});
            }
            break;
        }
        case TableId::III: {
            table.title = "Computational benefit of AG for Wang's scheme";
            const double ref_base[3] = {9216, 21504, 33792};
            const double ref_ag[3] = {4933, 9288, 12820};
            const double ref_ratio[3] = {53.5, 43.2, 37.9};
            const int u_values[3] = {4, 8, 12};
            for (int ui = 0; ui < 3; ++ui) {
                SlmConfig cfg;
                cfg.n_data = 256;
                cfg.oversampling = 4;
                cfg.candidates = u_values[ui];
                cfg.scheme = SlmScheme::Wang;
                cfg.ag_enabled = true;
                const auto run = run_single(cfg, trials, seed, threads);
                const std::string col = "U=" + std::to_string(u_values[ui]);
                const double baseline = closed_form_baseline(cfg);
                const double mean = run.report.mean();
                const double se = run.report.standard_error();
                table.cells.push_back({"without AG (a)", col, ref_base[ui], baseline, 0.0, true});
                table.cells.push_back({"with AG (b)", col, ref_ag[ui], mean, se, false});
                table.cells.push_back({"(b)/(a) (%)", col, ref_ratio[ui], 100.0 * mean / baseline,
                                       100.0 * se / baseline, false});
            }
            break;
        }
        case TableId::IV: {
            table.title = "Computational benefit of AG for Baxley's scheme";
            const double gamma_values[3] = {7.5, 8.0, 8.5};
            const double ref_base[3] = {8.03, 3.24, 1.73};
            const double ref_ag[3] = {5.12, 1.81, 1.28};
            const double ref_ratio[3] = {63.8, 55.9, 73.9};
            for (int gi = 0; gi < 3; ++gi) {
                SlmConfig cfg;
                cfg.n_data = 256;
                cfg.oversampling = 4;
                cfg.candidates = 16;
                cfg.scheme = SlmScheme::Baxley;
                cfg.gamma0_db = gamma_values[gi];

                cfg.ag_enabled = false;
                const auto base_run = run_single(cfg, trials, seed, threads);
                cfg.ag_enabled = true;
                const auto ag_run = run_single(cfg, trials, seed, threads);

                char col[32];
                std::snprintf(col, sizeof(col), "gamma0=%.1fdB", gamma_values[gi]);
                const double base_mean = base_run.report.mean();
                const double base_se = base_run.report.standard_error();
                const double ag_mean = ag_run.report.mean();
                const double ag_se = ag_run.report.standard_error();
                const double ratio = 100.0 * ag_mean / base_mean;
                const double ratio_se =
                    ratio * std::sqrt(std::pow(ag_se / ag_mean, 2) + std::pow(base_se / base_mean, 2));
                table.cells.push_back({"without AG (a)", col, ref_base[gi], base_mean, base_se, false});
                table.cells.push_back({"with AG (b)", col, ref_ag[gi], ag_mean, ag_se, false});
                table.cells.push_back({"(b)/(a) (%)", col, ref_ratio[gi], ratio, ratio_se, false});
            }
            break;
        }
    }
    return table;
}

std::vector<Fig7Point> fig7_compare(std::size_t n_samples, int u_min, int u_max,
                                    std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    if (u_min < 2 || u_max < u_min) {
        throw std::invalid_argument("fig7_compare: need 2 <= u_min <= u_max");
    }
    std::vector<Fig7Point> points;
    for (int u = u_min; u <= u_max; ++u) {
        SlmConfig cfg;
        cfg.n_data = n_samples;
        cfg.oversampling = 1; // the analytic model is Nyquist-only
        cfg.candidates = u;
        cfg.scheme = SlmScheme::Conventional;
        cfg.ag_enabled = true;
        const auto run = run_single(cfg, trials, seed, threads);
        Fig7Point point;
        point.candidates = u;
        point.analytic = expected_ag_cost(u, n_samples).relative;
        point.simulated = run.report.mean() / static_cast<double>(u);
        points.push_back(point);
    }
    return points;
}

std::vector<KCurvePoint> k_curve(std::size_t n_samples) {
    const double t_cost = static_cast<double>(n_samples) * log2_exact(n_samples);
    std::vector<KCurvePoint> points;
    points.reserve(n_samples);
    for (std::uint64_t a = 1; a <= n_samples; ++a) {
        points.push_back({a, static_cast<double>(k_of_a(a, n_samples)) / t_cost});
    }
    return points;
}

std::vector<CcdfPoint> empirical_ccdf(std::vector<double> papr_samples_db) {
    std::sort(papr_samples_db.begin(), papr_samples_db.end());
    const std::size_t total = papr_samples_db.size();
    std::vector<CcdfPoint> points;
    for (std::size_t i = 0; i < total;) {
        std::size_t j = i;
        while (j < total && papr_samples_db[j] == papr_samples_db[i]) ++j;
        points.push_back({papr_samples_db[i],
                          static_cast<double>(total - j) / static_cast<double>(total)});
        i = j;
    }
    return points;
}

namespace {

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
    nlohmann::json configs = nlohmann::json::array();
    for (const auto& cfg : spec.configs) {
        configs.push_back({{"scheme", to_string(cfg.scheme)},
                           {"n_data", cfg.n_data},
                           {"oversampling", cfg.oversampling},
                           {"candidates", cfg.candidates},
                           {"ag", cfg.ag_enabled},
                           {"remaining_stages", cfg.remaining_stages},
                           {"gamma0_db", cfg.gamma0_db}});
    }
    return {{"configs", configs},
            {"trials", spec.trials},
            {"master_seed", spec.master_seed},
            {"verify", spec.verify}};
}

const char* unit_name(CostUnit unit) {
    return unit == CostUnit::CPoints ? "T" : "complex_additions";
}

} // namespace

void write_experiment_csv(std::ostream& os, const ExperimentResult& result) {
    os << "scheme,n_data,oversampling,candidates,ag,unit,trials,mean,stderr,baseline,ratio_percent\r\n";
    for (const auto& r : result.results) {
        const auto& cfg = r.config;
        const double mean = r.report.mean();
        os << to_string(cfg.scheme) << ',' << cfg.n_data << ',' << cfg.oversampling << ','
           << cfg.candidates << ',' << (cfg.ag_enabled ? 1 : 0) << ',' << unit_name(r.report.unit)
           << ',' << r.report.per_trial.size() << ',' << fmt_double(mean) << ','
           << fmt_double(r.report.standard_error()) << ',';
        if (std::isfinite(r.baseline_mean)) {
            os << fmt_double(r.baseline_mean) << ',' << fmt_double(100.0 * mean / r.baseline_mean);
        } else {
            os << ',';
        }
        os << "\r\n";
    }
}

void write_experiment_json(std::ostream& os, const ExperimentResult& result) {
    nlohmann::json results = nlohmann::json::array();
    for (const auto& r : result.results) {
        nlohmann::json entry = {{"scheme", to_string(r.config.scheme)},
                                {"n_data", r.config.n_data},
                                {"oversampling", r.config.oversampling},
                                {"candidates", r.config.candidates},
                                {"ag", r.config.ag_enabled},
                                {"unit", unit_name(r.report.unit)},
                                {"trials", r.report.per_trial.size()},
                                {"mean", r.report.mean()},
                                {"stderr", r.report.standard_error()},
                                {"abort_counts", r.report.abort_counts},
                                {"a_histogram", r.report.a_histogram}};
        if (std::isfinite(r.baseline_mean)) {
            entry["baseline"] = r.baseline_mean;
            entry["ratio_percent"] = 100.0 * r.report.mean() / r.baseline_mean;
        }
        results.push_back(entry);
    }
    nlohmann::json doc = {{"spec", spec_to_json(result.spec)},
                          {"results", results},
                          {"version", kVersion}};
    os << doc.dump(2) << '\n';
}

void write_table_csv(std::ostream& os, const TableResult& table) {
    os << "table,row,column,reference,measured,stderr,deterministic\r\n";
    const char* names[] = {"I", "II", "III", "IV"};
    for (const auto& cell : table.cells) {
        os << names[static_cast<int>(table.id)] << ',' << csv_field(cell.row) << ','
           << csv_field(cell.column) << ',' << fmt_double(cell.reference) << ','
           << fmt_double(cell.measured) << ',' << fmt_double(cell.standard_error) << ','
           << (cell.deterministic ? 1 : 0) << "\r\n";
    }
}

void write_table_json(std::ostream& os, const TableResult& table) {
    const char* names[] = {"I", "II", "III", "IV"};
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : table.cells) {
        cells.push_back({{"row", cell.row},
                         {"column", cell.column},
                         {"reference", cell.reference},
                         {"measured", cell.measured},
                         {"stderr", cell.standard_error},
                         {"deterministic", cell.deterministic}});
    }
    nlohmann::json doc = {{"spec", {{"table", names[static_cast<int>(table.id)]}, {"title", table.title}}},
                          {"results", cells},
                          {"version", kVersion}};
    os << doc.dump(2) << '\n';
}

void write_fig7_csv(std::ostream& os, const std::vector<Fig7Point>& points) {
    os << "candidates,analytic_relative,simulated_relative\r\n";
    for (const auto& p : points) {
        os << p.candidates << ',' << fmt_double(p.analytic) << ',' << fmt_double(p.simulated)
           << "\r\n";
    }
}

void write_fig7_json(std::ostream& os, const std::vector<Fig7Point>& points) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : points) {
        rows.push_back({{"candidates", p.candidates},
                        {"analytic", p.analytic},
                        {"simulated", p.simulated}});
    }
    nlohmann::json doc = {{"spec", {{"figure", 7}}}, {"results", rows}, {"version", kVersion}};
    os << doc.dump(2) << '\n';
}

void write_kcurve_csv(std::ostream& os, std::size_t n_samples, const std::vector<KCurvePoint>& points) {
    os << "n,a,k_over_t\r\n";
    for (const auto& p : points) {
        os << n_samples << ',' << p.a << ',' << fmt_double(p.relative) << "\r\n";
    }
}

void write_ccdf_csv(std::ostream& os, const std::vector<CcdfPoint>& points) {
    os << "papr_db,ccdf\r\n";
    for (const auto& p : points) {
        os << fmt_double(p.papr_db) << ',' << fmt_double(p.probability) << "\r\n";
    }
}

void write_ccdf_json(std::ostream& os, const std::vector<CcdfPoint>& points) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : points) {
        rows.push_back({{"papr_db", p.papr_db}, {"ccdf", p.probability}});
    }
    nlohmann::json doc = {{"spec", {{"kind", "ccdf"}}}, {"results", rows}, {"version", kVersion}};
    os << doc.dump(2) << '\n';
}

} // namespace agslm
