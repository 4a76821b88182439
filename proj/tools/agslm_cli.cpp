#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "agslm/experiment.hpp"

namespace {

using namespace agslm;

struct CommonOptions {
    std::uint64_t trials = 100000;
    bool trials_given = false;
    bool quick = false;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--trials", opt.trials, "Monte Carlo trials")->each([&](const std::string&) {
        opt.trials_given = true;
    });
    cmd->add_flag("--quick", opt.quick, "CI mode: 10^4 trials unless --trials is given");
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--out", opt.out, "output file (default: stdout)");
    cmd->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
}

std::uint64_t effective_trials(const CommonOptions& opt) {
    if (opt.quick && !opt.trials_given) return 10000;
    return opt.trials;
}

OutputFormat parse_format(const std::string& name) {
    return name == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

/// Run `emit` against --out (or stdout when no path was given).
template <typename Emit>
int with_sink(const std::string& path, Emit&& emit) {
    if (path.empty()) {
        emit(std::cout);
        return 0;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open output file: " << path << "\n";
        return 1;
    }
    emit(file);
    return 0;
}

void print_table_text(const TableResult& table, std::uint64_t trials) {
    std::cout << table.title << " (" << trials << " trials)\n";
    std::printf("  %-18s %-16s %12s %12s %10s %9s\n", "row", "column", "reference", "measured",
                "stderr", "dev(%)");
    for (const auto& cell : table.cells) {
        const double dev = 100.0 * (cell.measured - cell.reference) / cell.reference;
        std::printf("  %-18s %-16s %12.4g %12.6g %10.3g %+9.2f%s\n", cell.row.c_str(),
                    cell.column.c_str(), cell.reference, cell.measured, cell.standard_error, dev,
                    cell.deterministic ? "  [exact]" : "");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLM PAPR-reduction simulator with adaptive candidate generation"};
    app.require_subcommand(1);

    // --- simulate ---------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "run one scheme configuration");
    CommonOptions sim_opt;
    SlmConfig sim_cfg;
    std::string sim_scheme = "conventional";
    bool sim_ag = false;
    bool sim_no_ag = false;
    bool sim_verify = false;
    simulate->add_option("--n", sim_cfg.n_data, "data subcarriers (power of two)");
    simulate->add_option("--oversample", sim_cfg.oversampling, "oversampling factor L");
    simulate->add_option("--u", sim_cfg.candidates, "number of candidates U");
    simulate->add_option("--scheme", sim_scheme, "conventional|lim|wang|baxley")
        ->check(CLI::IsMember({"conventional", "lim", "wang", "baxley"}));
    simulate->add_flag("--ag", sim_ag, "enable adaptive generation");
    simulate->add_flag("--no-ag", sim_no_ag, "force the baseline form");
    simulate->add_option("--r", sim_cfg.remaining_stages, "remaining stages (Lim)");
    simulate->add_option("--gamma0-db", sim_cfg.gamma0_db, "saturation threshold in dB (Baxley)");
    simulate->add_flag("--verify", sim_verify, "recheck every AG selection against the baseline");
    add_common(simulate, sim_opt);

    // --- table ------------------------------------------------------------
    auto* table = app.add_subcommand("table", "reproduce a results table");
    CommonOptions table_opt;
    std::string table_which;
    table->add_option("which", table_which, "I, II, III or IV")
        ->required()
        ->check(CLI::IsMember({"I", "II", "III", "IV"}));
    add_common(table, table_opt);

    // --- fig7 -------------------------------------------------------------
    auto* fig7 = app.add_subcommand("fig7", "analytic vs simulated relative AG complexity");
    CommonOptions fig7_opt;
    std::size_t fig7_n = 64;
    std::size_t fig7_l = 1;
    int fig7_umin = 2;
    int fig7_umax = 16;
    fig7->add_option("--n", fig7_n, "subcarriers (Nyquist rate)");
    fig7->add_option("--oversample", fig7_l, "must stay 1: the model is Nyquist-only");
    fig7->add_option("--u-min", fig7_umin, "smallest U");
    fig7->add_option("--u-max", fig7_umax, "largest U");
    add_common(fig7, fig7_opt);

    // --- kcurve -----------------------------------------------------------
    auto* kcurve = app.add_subcommand("kcurve", "partial-IFFT cost curve K(a)/T");
    std::size_t kcurve_n = 128;
    std::string kcurve_out;
    kcurve->add_option("--n", kcurve_n, "transform size (power of two)");
    kcurve->add_option("--out", kcurve_out, "output file (default: stdout)");

    // --- analyze ----------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "expected AG cost from the stochastic model");
    std::size_t analyze_n = 64;
    std::size_t analyze_l = 1;
    int analyze_u = 8;
    analyze->add_option("--n", analyze_n, "subcarriers (Nyquist rate)");
    analyze->add_option("--oversample", analyze_l, "must stay 1: the model is Nyquist-only");
    analyze->add_option("--u", analyze_u, "number of candidates U");

    // --- ccdf -------------------------------------------------------------
    auto* ccdf = app.add_subcommand("ccdf", "empirical CCDF of the selected PAPR");
    CommonOptions ccdf_opt;
    SlmConfig ccdf_cfg;
    std::string ccdf_scheme = "conventional";
    bool ccdf_ag = false;
    ccdf->add_option("--n", ccdf_cfg.n_data, "data subcarriers");
    ccdf->add_option("--oversample", ccdf_cfg.oversampling, "oversampling factor L");
    ccdf->add_option("--u", ccdf_cfg.candidates, "number of candidates U");
    ccdf->add_option("--scheme", ccdf_scheme, "conventional|lim|wang|baxley")
        ->check(CLI::IsMember({"conventional", "lim", "wang", "baxley"}));
    ccdf->add_flag("--ag", ccdf_ag, "enable adaptive generation");
    ccdf->add_option("--r", ccdf_cfg.remaining_stages, "remaining stages (Lim)");
    ccdf->add_option("--gamma0-db", ccdf_cfg.gamma0_db, "saturation threshold in dB (Baxley)");
    add_common(ccdf, ccdf_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            sim_cfg.scheme = *parse_scheme(sim_scheme);
            sim_cfg.ag_enabled = sim_ag && !sim_no_ag;
            ExperimentSpec spec;
            spec.configs = {sim_cfg};
            spec.trials = effective_trials(sim_opt);
            spec.master_seed = sim_opt.seed;
            spec.threads = sim_opt.threads;
            spec.verify = sim_verify;
            spec.format = parse_format(sim_opt.format);
            const auto result = run_experiment(spec);
            return with_sink(sim_opt.out, [&](std::ostream& os) {
                if (spec.format == OutputFormat::Json) {
                    write_experiment_json(os, result);
                } else {
                    write_experiment_csv(os, result);
                }
            });
        }

        if (table->parsed()) {
            const TableId id = table_which == "I"    ? TableId::I
                               : table_which == "II" ? TableId::II
                               : table_which == "III" ? TableId::III
                                                       : TableId::IV;
            const auto trials = effective_trials(table_opt);
            const auto result = reproduce_table(id, trials, table_opt.seed, table_opt.threads);
            print_table_text(result, trials);
            if (!table_opt.out.empty()) {
                return with_sink(table_opt.out, [&](std::ostream& os) {
                    if (parse_format(table_opt.format) == OutputFormat::Json) {
                        write_table_json(os, result);
                    } else {
                        write_table_csv(os, result);
                    }
                });
            }
            return 0;
        }

        if (fig7->parsed()) {
            if (fig7_l != 1) {
                std::cerr << "error: the stochastic model only holds at the Nyquist rate; "
                             "--oversample must be 1\n";
                return 1;
            }
            const auto points = fig7_compare(fig7_n, fig7_umin, fig7_umax,
                                             effective_trials(fig7_opt), fig7_opt.seed,
                                             fig7_opt.threads);
            return with_sink(fig7_opt.out, [&](std::ostream& os) {
                if (parse_format(fig7_opt.format) == OutputFormat::Json) {
                    write_fig7_json(os, points);
                } else {
                    write_fig7_csv(os, points);
                }
            });
        }

        if (kcurve->parsed()) {
            const auto points = k_curve(kcurve_n);
            return with_sink(kcurve_out, [&](std::ostream& os) {
                write_kcurve_csv(os, kcurve_n, points);
            });
        }

        if (analyze->parsed()) {
            if (analyze_l != 1) {
                std::cerr << "error: the stochastic model only holds at the Nyquist rate; "
                             "--oversample must be 1\n";
                return 1;
            }
            const auto cost = expected_ag_cost(analyze_u, analyze_n);
            std::printf("N=%zu U=%d: expected cost %.6g T (relative %.6g, error bound %.2g)\n",
                        analyze_n, analyze_u, cost.total_t, cost.relative, cost.error_bound);
            return 0;
        }

        if (ccdf->parsed()) {
            ccdf_cfg.scheme = *parse_scheme(ccdf_scheme);
            ccdf_cfg.ag_enabled = ccdf_ag;
            ExperimentSpec spec;
            spec.configs = {ccdf_cfg};
            spec.trials = effective_trials(ccdf_opt);
            spec.master_seed = ccdf_opt.seed;
            spec.threads = ccdf_opt.threads;
            const auto result = run_experiment(spec);
            const auto points = empirical_ccdf(result.results.front().papr_db);
            return with_sink(ccdf_opt.out, [&](std::ostream& os) {
                if (parse_format(ccdf_opt.format) == OutputFormat::Json) {
                    write_ccdf_json(os, points);
                } else {
                    write_ccdf_csv(os, points);
                }
            });
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
