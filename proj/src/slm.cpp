#include "agslm/slm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace agslm {

const char* to_string(SlmScheme scheme) {
    switch (scheme) {
        case SlmScheme::Conventional: return "conventional";
        case SlmScheme::Lim: return "lim";
        case SlmScheme::Wang: return "wang";
        case SlmScheme::Baxley: return "baxley";
    }
    return "?";
}

std::optional<SlmScheme> parse_scheme(std::string_view name) {
    if (name == "conventional") return SlmScheme::Conventional;
    if (name == "lim") return SlmScheme::Lim;
    if (name == "wang") return SlmScheme::Wang;
    if (name == "baxley") return SlmScheme::Baxley;
    return std::nullopt;
}

void SlmConfig::validate() const {
    if (!is_pow2(n_data) || n_data < 2) {
        throw std::invalid_argument("SlmConfig: n_data must be a power of two >= 2");
    }
    if (!is_pow2(oversampling)) {
        throw std::invalid_argument("SlmConfig: oversampling must be a power of two >= 1");
    }
    if (candidates < 1) {
        throw std::invalid_argument("SlmConfig: need at least one candidate");
    }
    const unsigned stages = log2_exact(ifft_size());
    switch (scheme) {
        case SlmScheme::Conventional:
            break;
        case SlmScheme::Lim:
            if (remaining_stages < 1 || remaining_stages > stages) {
                throw std::invalid_argument("SlmConfig: Lim needs 1 <= r <= log2(N)");
            }
            break;
        case SlmScheme::Wang:
            if (candidates != 4 && candidates != 8 && candidates != 12) {
                throw std::invalid_argument("SlmConfig: Wang supports U in {4, 8, 12}");
            }
            if (ifft_size() < 4) {
                throw std::invalid_argument("SlmConfig: Wang needs N >= 4 for the quarter shifts");
            }
            break;
        case SlmScheme::Baxley:
            if (!(gamma0_db > 0.0)) {
                throw std::invalid_argument("SlmConfig: Baxley needs gamma0 > 0 dB (PAPR >= 1)");
            }
            break;
    }
}

namespace {

// Catalog entries are the tap sign patterns g (taps = g / 2); every pattern
// has a flat 4-point transform, so |P(k)| = 1 for all k. Ordered so the
// earliest candidates explore both shift orbits before phase variants.
constexpr ComplexSample kOne{1.0, 0.0};
constexpr ComplexSample kMinusOne{-1.0, 0.0};
constexpr ComplexSample kJ{0.0, 1.0};
constexpr ComplexSample kMinusJ{0.0, -1.0};

constexpr std::array<std::array<ComplexSample, 4>, 11> kKernelSigns = {{
    {kOne, kOne, kOne, kMinusOne},          // (1, 1, 1,-1)
    {kOne, kJ, kOne, kMinusJ},              // (1, j, 1,-j)
    {kOne, kMinusOne, kMinusOne, kMinusOne},// (1,-1,-1,-1)
    {kOne, kMinusJ, kOne, kJ},              // (1,-j, 1, j)
    {kOne, kMinusOne, kOne, kOne},          // (1,-1, 1, 1)
    {kOne, kJ, kMinusOne, kJ},              // (1, j,-1, j)
    {kOne, kOne, kMinusOne, kOne},          // (1, 1,-1, 1)
    {kOne, kMinusJ, kMinusOne, kMinusJ},    // (1,-j,-1,-j)
    {kJ, kJ, kJ, kMinusJ},                  // j * (1, 1, 1,-1)
    {kJ, kMinusOne, kJ, kOne},              // j * (1, j, 1,-j)
    {kMinusOne, kMinusOne, kMinusOne, kOne} // -(1, 1, 1,-1)
}};

std::vector<ConversionKernel> build_catalog() {
    std::vector<ConversionKernel> catalog;
    catalog.reserve(kKernelSigns.size());
    for (const auto& signs : kKernelSigns) {
        ConversionKernel kernel;
        for (std::size_t m = 0; m < 4; ++m) kernel.taps[m] = 0.5 * signs[m];
        verify_kernel_unitarity(kernel);
        catalog.push_back(kernel);
    }
    return catalog;
}

double max_norm_of(std::span<const ComplexSample> samples) {
    double peak = 0.0;
    for (const auto& s : samples) peak = std::max(peak, std::norm(s));
    return peak;
}

ComplexSample apply_kernel(const ConversionKernel& kernel, const ComplexSample* x1, std::size_t n,
                           std::size_t size, std::size_t quarter) {
    const std::size_t mask = size - 1;
    ComplexSample acc = kernel.taps[0] * x1[n];
    acc += kernel.taps[1] * x1[(n + size - quarter) & mask];
    acc += kernel.taps[2] * x1[(n + size - 2 * quarter) & mask];
    acc += kernel.taps[3] * x1[(n + size - 3 * quarter) & mask];
    return acc;
}

} // namespace

std::span<const ConversionKernel> conversion_kernel_catalog() {
    static const std::vector<ConversionKernel> catalog = build_catalog();
    return catalog;
}

std::array<ComplexSample, 4> kernel_frequency_response(const ConversionKernel& kernel) {
    // P(k) = sum_m taps[m] * (-j)^{k m} depends only on k mod 4.
    static constexpr ComplexSample kPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}}; // (-j)^p
    std::array<ComplexSample, 4> response;
    for (unsigned k = 0; k < 4; ++k) {
        ComplexSample acc{0.0, 0.0};
        for (unsigned m = 0; m < 4; ++m) acc += kernel.taps[m] * kPow[(k * m) % 4];
        response[k] = acc;
    }
    return response;
}

void verify_kernel_unitarity(const ConversionKernel& kernel) {
    for (const auto& p : kernel_frequency_response(kernel)) {
        if (std::abs(std::norm(p) - 1.0) > 1e-9) {
            throw std::runtime_error("ConversionKernel: frequency response is not unit magnitude");
        }
    }
}

struct SlmEngine::Incumbent {
    int u = 0;
    double max_norm = std::numeric_limits<double>::infinity();
};

SlmEngine::SlmEngine(SlmConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    const std::size_t n = cfg_.ifft_size();
    t_c_points_ = static_cast<std::uint64_t>(n) * log2_exact(n);

    symbols_.resize(cfg_.n_data);
    spectrum_.assign(n, ComplexSample{0.0, 0.0});
    band_.resize(cfg_.n_data);
    const std::size_t half = cfg_.n_data / 2;
    for (std::size_t i = 0; i < cfg_.n_data; ++i) {
        band_[i] = static_cast<std::uint32_t>(i < half ? i : n - cfg_.n_data + i);
    }

    switch (cfg_.scheme) {
        case SlmScheme::Conventional:
            graph_ = std::make_unique<ButterflyGraph>(n);
            break;
        case SlmScheme::Lim:
            split_ = std::make_unique<StageSplitIfft>(n, cfg_.remaining_stages);
            break;
        case SlmScheme::Wang:
            graph_ = std::make_unique<ButterflyGraph>(n);
            wang_candidate_.resize(n);
            x1_.resize(n);
            wang_order_ = bit_reversed_order(n);
            (void)conversion_kernel_catalog(); // construction check up front
            break;
        case SlmScheme::Baxley:
            graph_ = std::make_unique<ButterflyGraph>(n);
            baxley_graphs_.reserve(cfg_.candidates);
            for (int u = 0; u < cfg_.candidates; ++u) {
                baxley_graphs_.push_back(std::make_unique<ButterflyGraph>(n));
            }
            baxley_spectra_.assign(static_cast<std::size_t>(cfg_.candidates) * n,
                                   ComplexSample{0.0, 0.0});
            break;
    }
}

SlmEngine::~SlmEngine() = default;

CostUnit SlmEngine::unit() const {
    return cfg_.scheme == SlmScheme::Wang ? CostUnit::ComplexAdditions : CostUnit::CPoints;
}

SymbolSequence SlmEngine::draw_data(std::uint64_t trial) const {
    RandomStream stream(cfg_.seed, trial, 0);
    return random_qam16_block(cfg_.n_data, stream);
}

void SlmEngine::prepare_trial(const SymbolSequence& data_block) {
    if (data_block.symbols.size() != cfg_.n_data) {
        throw std::invalid_argument("SlmEngine: data block must hold n_data symbols");
    }
    std::copy(data_block.symbols.begin(), data_block.symbols.end(), symbols_.begin());
    // Parseval: the block mean power of every candidate equals the spectrum
    // energy, and {+-1, +-j} rotations preserve each |X(k)|^2 bitwise.
    double energy = 0.0;
    for (const auto& s : symbols_) energy += std::norm(s);
    mean_power_ = energy;
}

void SlmEngine::write_candidate_spectrum(std::span<const ComplexSample> phases,
                                         ComplexSample* spectrum) const {
    // Off-band bins stay zero from construction; only data bins are written.
    for (std::size_t i = 0; i < cfg_.n_data; ++i) {
        spectrum[band_[i]] = symbols_[i] * phases[i];
    }
}

void SlmEngine::write_plain_spectrum(ComplexSample* spectrum) const {
    for (std::size_t i = 0; i < cfg_.n_data; ++i) {
        spectrum[band_[i]] = symbols_[i];
    }
}

void SlmEngine::default_rotation(int u, std::uint64_t trial, std::vector<ComplexSample>& out) const {
    const std::size_t count = cfg_.scheme == SlmScheme::Lim
                                  ? (std::size_t{1} << cfg_.remaining_stages)
                                  : cfg_.n_data;
    RandomStream stream(cfg_.seed, trial, static_cast<std::uint64_t>(u));
    fill_random_phases(u, count, stream, out);
}

SlmResult SlmEngine::finish(const Incumbent& best, SlmTrialStats stats) const {
    SlmResult result;
    result.selected_u = best.u;
    result.unit = unit();
    result.t_c_points = t_c_points_;
    const double papr_linear = best.max_norm / mean_power_;
    result.papr_db = to_db(papr_linear);
    result.gamma = {papr_linear, best.u};
    if (collect_signal_) {
        result.selected_signal.samples = best_signal_;
        result.selected_signal.mean_power = mean_power_;
        result.selected_signal.source_u = best.u;
    }
    result.stats = std::move(stats);
    return result;
}

SlmResult SlmEngine::run(const SymbolSequence& data_block, std::uint64_t trial) {
    return run_form(data_block, trial, cfg_.ag_enabled);
}

SlmResult SlmEngine::run_form(const SymbolSequence& data_block, std::uint64_t trial, bool ag) {
    switch (cfg_.scheme) {
        case SlmScheme::Conventional:
            prepare_trial(data_block);
            return run_conventional(trial, ag);
        case SlmScheme::Lim:
            prepare_trial(data_block);
            return run_lim(trial, ag);
        case SlmScheme::Wang: {
            prepare_trial(data_block);
            write_plain_spectrum(spectrum_.data());
            graph_->begin(spectrum_.data());
            graph_->run_all();
            const auto out = graph_->time_domain();
            SignalSequence x1;
            x1.samples.assign(out.begin(), out.end());
            x1.mean_power = block_mean_power(x1.samples);
            return run_wang(x1, trial, ag);
        }
        case SlmScheme::Baxley:
            prepare_trial(data_block);
            return run_baxley(trial, ag);
    }
    throw std::logic_error("unreachable scheme");
}

SlmResult SlmEngine::run_wang_signal(const SignalSequence& x1, std::uint64_t trial, bool ag) {
    if (cfg_.scheme != SlmScheme::Wang) {
        throw std::invalid_argument("run_wang_signal: engine is not configured for Wang");
    }
    if (x1.samples.size() != cfg_.ifft_size()) {
        throw std::invalid_argument("run_wang_signal: x1 must hold N = n_data * L samples");
    }
    return run_wang(x1, trial, ag);
}

SlmResult SlmEngine::run_conventional(std::uint64_t trial, bool ag) {
    const std::size_t n = cfg_.ifft_size();
    const int total = cfg_.candidates;
    SlmTrialStats stats;
    stats.generated.assign(total, 0);
    stats.aborted.assign(total, 0);
    Incumbent best;

    for (int u = 1; u <= total; ++u) {
        if (provider_) {
            provider_(u, trial, rotation_);
        } else {
            default_rotation(u, trial, rotation_);
        }
        write_candidate_spectrum(rotation_, spectrum_.data());
        graph_->begin(spectrum_.data());

        if (!ag || u == 1) {
            // Candidate 1 is always generated fully: gamma starts at infinity.
            graph_->run_all();
            stats.generated[u - 1] = static_cast<std::uint32_t>(n);
            const double peak = max_norm_of(graph_->time_domain());
            if (peak < best.max_norm) {
                best = {u, peak};
                if (collect_signal_) {
                    const auto sig = graph_->time_domain();
                    best_signal_.assign(sig.begin(), sig.end());
                }
            }
        } else {
            bool aborted = false;
            double peak = 0.0;
            while (!graph_->exhausted()) {
                const auto out = graph_->next_output();
                const double power = std::norm(out.value);
                if (power >= best.max_norm) {
                    aborted = true;
                    break;
                }
                peak = std::max(peak, power);
            }
            stats.generated[u - 1] = static_cast<std::uint32_t>(graph_->outputs_produced());
            stats.aborted[u - 1] = aborted;
            if (!aborted) {
                best = {u, peak};
                if (collect_signal_) {
                    const auto sig = graph_->time_domain();
                    best_signal_.assign(sig.begin(), sig.end());
                }
            }
        }
        stats.cost_raw += graph_->c_points();
        stats.gamma_trace.push_back(best.max_norm / mean_power_);
    }
    return finish(best, std::move(stats));
}

SlmResult SlmEngine::run_lim(std::uint64_t trial, bool ag) {
    const std::size_t n = cfg_.ifft_size();
    const int total = cfg_.candidates;
    SlmTrialStats stats;
    stats.generated.assign(total, 0);
    stats.aborted.assign(total, 0);
    Incumbent best;

    // Common stages are shared by all candidates and metered once.
    write_plain_spectrum(spectrum_.data());
    split_->load(spectrum_.data());
    stats.cost_raw += split_->common_c_points();

    for (int u = 1; u <= total; ++u) {
        if (provider_) {
            provider_(u, trial, rotation_);
        } else {
            default_rotation(u, trial, rotation_);
        }
        split_->begin_candidate(rotation_);

        if (!ag || u == 1) {
            split_->run_remaining();
            stats.generated[u - 1] = static_cast<std::uint32_t>(n);
            const double peak = max_norm_of(split_->candidate_signal());
            if (peak < best.max_norm) {
                best = {u, peak};
                if (collect_signal_) {
                    const auto sig = split_->candidate_signal();
                    best_signal_.assign(sig.begin(), sig.end());
                }
            }
        } else {
            bool aborted = false;
            double peak = 0.0;
            std::uint32_t produced = 0;
            while (!split_->exhausted()) {
                const auto out = split_->next_output();
                ++produced;
                const double power = std::norm(out.value);
                if (power >= best.max_norm) {
                    aborted = true;
                    break;
                }
                peak = std::max(peak, power);
            }
            stats.generated[u - 1] = produced;
            stats.aborted[u - 1] = aborted;
            if (!aborted) {
                best = {u, peak};
                if (collect_signal_) {
                    const auto sig = split_->candidate_signal();
                    best_signal_.assign(sig.begin(), sig.end());
                }
            }
        }
        stats.cost_raw += split_->candidate_c_points();
        stats.gamma_trace.push_back(best.max_norm / mean_power_);
    }
    return finish(best, std::move(stats));
}

SlmResult SlmEngine::run_wang(const SignalSequence& x1, std::uint64_t trial, bool ag) {
    (void)trial;
    const std::size_t n = cfg_.ifft_size();
    const std::size_t quarter = n / 4;
    const int total = cfg_.candidates;
    const auto catalog = conversion_kernel_catalog();
    assert(static_cast<std::size_t>(total - 1) <= catalog.size());

    mean_power_ = x1.mean_power; // selection denominator: mean power of the original block
    if (!(mean_power_ > 0.0)) {
        throw std::domain_error("run_wang: x1 has zero power");
    }
    std::copy(x1.samples.begin(), x1.samples.end(), x1_.begin());

    SlmTrialStats stats;
    stats.generated.assign(total, 0);
    stats.aborted.assign(total, 0);
    Incumbent best;

    // Candidate 1 is the original signal; the conversion-addition meter
    // counts only the U-1 matrix products.
    best = {1, max_norm_of(x1.samples)};
    if (collect_signal_) best_signal_.assign(x1.samples.begin(), x1.samples.end());
    stats.generated[0] = static_cast<std::uint32_t>(n);
    stats.gamma_trace.push_back(best.max_norm / mean_power_);

    for (int u = 2; u <= total; ++u) {
        const auto& kernel = catalog[static_cast<std::size_t>(u - 2)];
        if (!ag) {
            for (std::size_t i = 0; i < n; ++i) {
                wang_candidate_[i] = apply_kernel(kernel, x1_.data(), i, n, quarter);
            }
            stats.cost_raw += 3 * n;
            stats.generated[u - 1] = static_cast<std::uint32_t>(n);
            const double peak = max_norm_of(wang_candidate_);
            if (peak < best.max_norm) {
                best = {u, peak};
                if (collect_signal_) best_signal_ = wang_candidate_;
            }
        } else {
            bool aborted = false;
            double peak = 0.0;
            std::size_t produced = 0;
            // Every sample is directly computable from x1, so any scan order
            // works; the decimated (bit-reversed) order visits decorrelated
            // positions, which matters at 4x oversampling where consecutive
            // samples move together and would delay the abort.
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t pos = wang_order_[i];
                const ComplexSample value = apply_kernel(kernel, x1_.data(), pos, n, quarter);
                wang_candidate_[pos] = value;
                ++produced;
                const double power = std::norm(value);
                if (power >= best.max_norm) {
                    aborted = true;
                    break;
                }
                peak = std::max(peak, power);
            }
            stats.cost_raw += 3 * produced;
            stats.generated[u - 1] = static_cast<std::uint32_t>(produced);
            stats.aborted[u - 1] = aborted;
            if (!aborted) {
                best = {u, peak};
                if (collect_signal_) best_signal_ = wang_candidate_;
            }
        }
        stats.gamma_trace.push_back(best.max_norm / mean_power_);
    }
    return finish(best, std::move(stats));
}

SlmResult SlmEngine::run_baxley(std::uint64_t trial, bool ag) {
    const std::size_t n = cfg_.ifft_size();
    const int total = cfg_.candidates;
    // The saturation point of the amplifier is fixed relative to the
    // long-run average signal power, which for the unit-power alphabet and
    // the unnormalized IFFT is exactly n_data. Using the per-block power
    // here would smear the threshold with the block's energy fluctuation.
    mean_power_ = static_cast<double>(cfg_.n_data);
    const double gamma0_abs = from_db(cfg_.gamma0_db) * mean_power_;

    SlmTrialStats stats;
    stats.generated.assign(total, 0);
    stats.aborted.assign(total, 0);
    Incumbent best;

    if (!ag) {
        for (int u = 1; u <= total; ++u) {
            if (provider_) {
                provider_(u, trial, rotation_);
            } else {
                default_rotation(u, trial, rotation_);
            }
            write_candidate_spectrum(rotation_, spectrum_.data());
            graph_->begin(spectrum_.data());
            graph_->run_all();
            stats.cost_raw += graph_->c_points();
            stats.generated[u - 1] = static_cast<std::uint32_t>(n);
            const double peak = max_norm_of(graph_->time_domain());
            if (peak < best.max_norm) {
                best = {u, peak};
                if (collect_signal_) {
                    const auto sig = graph_->time_domain();
                    best_signal_.assign(sig.begin(), sig.end());
                }
            }
            stats.gamma_trace.push_back(best.max_norm / mean_power_);
            if (peak < gamma0_abs) break; // good enough for the amplifier
        }
        return finish(best, std::move(stats));
    }

    int tested = 0;
    bool found = false;
    for (int u = 1; u <= total && !found; ++u) {
        if (provider_) {
            provider_(u, trial, rotation_);
        } else {
            default_rotation(u, trial, rotation_);
        }
        ComplexSample* spectrum = baxley_spectra_.data() + static_cast<std::size_t>(u - 1) * n;
        write_candidate_spectrum(rotation_, spectrum);
        auto& graph = *baxley_graphs_[static_cast<std::size_t>(u - 1)];
        graph.begin(spectrum);

        bool aborted = false;
        double peak = 0.0;
        while (!graph.exhausted()) {
            const auto out = graph.next_output();
            const double power = std::norm(out.value);
            if (power >= gamma0_abs) {
                aborted = true;
                break;
            }
            peak = std::max(peak, power);
        }
        stats.cost_raw += graph.c_points();
        stats.generated[u - 1] = static_cast<std::uint32_t>(graph.outputs_produced());
        stats.aborted[u - 1] = aborted;
        tested = u;
        if (!aborted) {
            best = {u, peak};
            if (collect_signal_) {
                const auto sig = graph.time_domain();
                best_signal_.assign(sig.begin(), sig.end());
            }
            stats.gamma_trace.push_back(best.max_norm / mean_power_);
            found = true;
        }
    }

    if (!found) {
        // Every candidate exceeded gamma0: finish the partially processed
        // graphs and pick the overall minimum.
        for (int u = 1; u <= tested; ++u) {
            auto& graph = *baxley_graphs_[static_cast<std::size_t>(u - 1)];
            const std::uint64_t before = graph.c_points();
            graph.run_all();
            stats.cost_raw += graph.c_points() - before;
            const double peak = max_norm_of(graph.time_domain());
            if (peak < best.max_norm) {
                best = {u, peak};
                if (collect_signal_) {
                    const auto sig = graph.time_domain();
                    best_signal_.assign(sig.begin(), sig.end());
                }
            }
            stats.gamma_trace.push_back(best.max_norm / mean_power_);
        }
    }
    return finish(best, std::move(stats));
}

namespace {

SlmResult run_wrapper(const SymbolSequence& data_block, const SlmConfig& cfg, SlmScheme scheme,
                      bool ag) {
    SlmConfig local = cfg;
    local.scheme = scheme;
    local.ag_enabled = ag;
    SlmEngine engine(local);
    return engine.run(data_block, 0);
}

} // namespace

SlmResult slm_conventional(const SymbolSequence& data_block, const SlmConfig& cfg) {
    return run_wrapper(data_block, cfg, SlmScheme::Conventional, false);
}
SlmResult slm_conventional_ag(const SymbolSequence& data_block, const SlmConfig& cfg) {
    return run_wrapper(data_block, cfg, SlmScheme::Conventional, true);
}
SlmResult slm_lim(const SymbolSequence& data_block, const SlmConfig& cfg) {
    return run_wrapper(data_block, cfg, SlmScheme::Lim, false);
}
SlmResult slm_lim_ag(const SymbolSequence& data_block, const SlmConfig& cfg) {
    return run_wrapper(data_block, cfg, SlmScheme::Lim, true);
}
SlmResult slm_baxley(const SymbolSequence& data_block, const SlmConfig& cfg) {
    return run_wrapper(data_block, cfg, SlmScheme::Baxley, false);
}
SlmResult slm_baxley_ag(const SymbolSequence& data_block, const SlmConfig& cfg) {
    return run_wrapper(data_block, cfg, SlmScheme::Baxley, true);
}

SlmResult slm_wang(const SignalSequence& x1, const SlmConfig& cfg) {
    SlmConfig local = cfg;
    local.scheme = SlmScheme::Wang;
    local.ag_enabled = false;
    SlmEngine engine(local);
    return engine.run_wang_signal(x1, 0, false);
}
SlmResult slm_wang_ag(const SignalSequence& x1, const SlmConfig& cfg) {
    SlmConfig local = cfg;
    local.scheme = SlmScheme::Wang;
    local.ag_enabled = true;
    SlmEngine engine(local);
    return engine.run_wang_signal(x1, 0, true);
}

} // namespace agslm
