#include <doctest.h>

#include <sstream>

#include "agslm/experiment.hpp"

using namespace agslm;

namespace {

ExperimentSpec small_spec(bool ag) {
    SlmConfig cfg;
    cfg.n_data = 32;
    cfg.oversampling = 2;
    cfg.candidates = 4;
    cfg.scheme = SlmScheme::Conventional;
    cfg.ag_enabled = ag;

    ExperimentSpec spec;
    spec.configs = {cfg};
    spec.trials = 400;
    spec.master_seed = 2024;
    return spec;
}

} // namespace

TEST_CASE("determinism: identical spec produces bitwise-identical CSV and JSON") {
    const auto spec = small_spec(true);
    const auto first = run_experiment(spec);
    const auto second = run_experiment(spec);

    std::ostringstream csv_a, csv_b, json_a, json_b;
    write_experiment_csv(csv_a, first);
    write_experiment_csv(csv_b, second);
    write_experiment_json(json_a, first);
    write_experiment_json(json_b, second);
    CHECK(csv_a.str() == csv_b.str());
    CHECK(json_a.str() == json_b.str());
    CHECK(first.results[0].report.per_trial == second.results[0].report.per_trial);
}

TEST_CASE("worker count does not perturb results") {
    auto spec = small_spec(true);
    spec.threads = 1;
    const auto serial = run_experiment(spec);
    spec.threads = 4;
    const auto parallel = run_experiment(spec);
    CHECK(serial.results[0].report.per_trial == parallel.results[0].report.per_trial);
    CHECK(serial.results[0].papr_db == parallel.results[0].papr_db);
    CHECK(serial.results[0].report.abort_counts == parallel.results[0].report.abort_counts);
    CHECK(serial.results[0].report.a_histogram == parallel.results[0].report.a_histogram);
}

TEST_CASE("conventional baseline cost is constant: zero standard error") {
    const auto spec = small_spec(false);
    const auto result = run_experiment(spec);
    const auto& report = result.results[0].report;
    CHECK(report.mean() == 4.0);
    CHECK(report.standard_error() == 0.0);
    for (auto c : report.per_trial) CHECK(c == 4 * report.t_c_points);
}

TEST_CASE("report merge keeps aggregates order-independent") {
    auto spec = small_spec(true);
    spec.trials = 300;
    const auto whole = run_experiment(spec);

    ExperimentSpec shard = spec;
    shard.trials = 150;
    const auto first = run_experiment(shard);
    // Second shard: continue the trial indices by hand.
    ComplexityReport tail;
    {
        SlmConfig cfg = spec.configs[0];
        cfg.seed = spec.master_seed;
        SlmEngine engine(cfg);
        engine.set_collect_signal(false);
        tail.unit = CostUnit::CPoints;
        tail.t_c_points = whole.results[0].report.t_c_points;
        tail.abort_counts.assign(cfg.candidates, 0);
        tail.a_histogram.assign(cfg.ifft_size() + 1, 0);
        for (std::uint64_t trial = 150; trial < 300; ++trial) {
            const auto res = engine.run(engine.draw_data(trial), trial);
            tail.per_trial.push_back(res.stats.cost_raw);
            for (int u = 0; u < cfg.candidates; ++u) {
                if (res.stats.generated[u] > 0) ++tail.a_histogram[res.stats.generated[u]];
                if (res.stats.aborted[u]) ++tail.abort_counts[u];
            }
        }
    }
    ComplexityReport merged = first.results[0].report;
    merged.merge(tail);
    CHECK(merged.per_trial == whole.results[0].report.per_trial);
    CHECK(merged.mean() == whole.results[0].report.mean());
    CHECK(merged.a_histogram == whole.results[0].report.a_histogram);

    // Merging in the other order permutes per-trial values but not aggregates.
    ComplexityReport reversed = tail;
    reversed.merge(first.results[0].report);
    CHECK(reversed.mean() == merged.mean());
    CHECK(reversed.standard_error() == merged.standard_error());
    CHECK(reversed.abort_counts == merged.abort_counts);
}

TEST_CASE("verify mode recomputes selections against the baseline oracle") {
    auto spec = small_spec(true);
    spec.trials = 100;
    spec.verify = true;
    CHECK_NOTHROW(run_experiment(spec));
}

TEST_CASE("equivalence harness reports clean runs") {
    SlmConfig cfg;
    cfg.n_data = 32;
    cfg.oversampling = 2;
    cfg.candidates = 4;
    cfg.scheme = SlmScheme::Lim;
    cfg.remaining_stages = 3;
    cfg.seed = 5;
    const auto summary = verify_ag_equivalence(cfg, 200);
    CHECK(summary.trials == 200);
    CHECK(summary.clean());
}

TEST_CASE("k-curve: midpoint anchor at N=128") {
    const auto curve = k_curve(128);
    REQUIRE(curve.size() == 128);
    CHECK(curve[63].a == 64);
    CHECK(curve[63].relative == 0.5);
    CHECK(curve[127].relative == 1.0);
}

TEST_CASE("empirical CCDF is a nonincreasing step function ending at zero") {
    const auto points = empirical_ccdf({3.0, 1.0, 2.0, 2.0, 5.0});
    REQUIRE(points.size() == 4);
    CHECK(points.front().papr_db == 1.0);
    CHECK(points.front().probability == doctest::Approx(0.8));
    CHECK(points.back().papr_db == 5.0);
    CHECK(points.back().probability == 0.0);
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].probability <= points[i - 1].probability);
    }
}

TEST_CASE("fig7 smoke: both curves below 1 and analytic refuses bad ranges") {
    const auto points = fig7_compare(32, 2, 3, 2000, 7);
    REQUIRE(points.size() == 2);
    for (const auto& p : points) {
        CHECK(p.analytic < 1.0);
        CHECK(p.simulated < 1.0);
    }
    CHECK(points[1].analytic < points[0].analytic);
    CHECK_THROWS_AS(fig7_compare(32, 1, 3, 10, 7), std::invalid_argument);
}

TEST_CASE("CSV output uses RFC-4180 line endings and a header row") {
    const auto result = run_experiment(small_spec(false));
    std::ostringstream os;
    write_experiment_csv(os, result);
    const auto text = os.str();
    CHECK(text.rfind("scheme,n_data,", 0) == 0);
    CHECK(text.find("\r\n") != std::string::npos);
}

TEST_CASE("JSON output carries the spec/results/version keys") {
    const auto result = run_experiment(small_spec(false));
    std::ostringstream os;
    write_experiment_json(os, result);
    const auto text = os.str();
    CHECK(text.find("\"spec\"") != std::string::npos);
    CHECK(text.find("\"results\"") != std::string::npos);
    CHECK(text.find("\"version\"") != std::string::npos);
}
