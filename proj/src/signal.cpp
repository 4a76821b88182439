#include "agslm/signal.hpp"

#include <algorithm>

namespace agslm {

double block_mean_power(std::span<const ComplexSample> samples) {
    double acc = 0.0;
    for (const auto& s : samples) acc += std::norm(s);
    return acc / static_cast<double>(samples.size());
}

SymbolSequence oversample(const SymbolSequence& block, std::size_t factor) {
    if (!is_pow2(factor)) {
        throw std::invalid_argument("oversample: factor must be a power of two >= 1, got " +
                                    std::to_string(factor));
    }
    const std::size_t n_data = block.symbols.size();
    if (!is_pow2(n_data)) {
        throw std::invalid_argument("oversample: block length must be a power of two");
    }
    if (factor == 1) return block;

    SymbolSequence out;
    out.modulation = block.modulation;
    out.oversampling = block.oversampling * factor;
    out.symbols.assign(n_data * factor, ComplexSample{0.0, 0.0});
    const std::size_t half = n_data / 2;
    std::copy_n(block.symbols.begin(), half, out.symbols.begin());
    std::copy_n(block.symbols.begin() + static_cast<std::ptrdiff_t>(half), half,
                out.symbols.end() - static_cast<std::ptrdiff_t>(half));
    return out;
}

double papr(const SignalSequence& signal) {
    if (!(signal.mean_power > 0.0)) {
        throw std::domain_error("papr: zero-power block");
    }
    double peak = 0.0;
    for (const auto& s : signal.samples) peak = std::max(peak, std::norm(s));
    return peak / signal.mean_power;
}

double papr_db(const SignalSequence& signal) { return to_db(papr(signal)); }

void fill_random_phases(int u, std::size_t count, RandomStream& stream,
                        std::vector<ComplexSample>& out) {
    if (u < 1) {
        throw std::invalid_argument("fill_random_phases: candidate index must be >= 1");
    }
    out.resize(count);
    if (u == 1) {
        std::fill(out.begin(), out.end(), ComplexSample{1.0, 0.0});
        return;
    }
    static constexpr ComplexSample alphabet[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = alphabet[stream.bits(2)];
    }
}

PhaseVector random_phase_vector(int u, std::size_t n_data, RandomStream& stream) {
    PhaseVector vec;
    vec.index_u = u;
    fill_random_phases(u, n_data, stream, vec.entries);
    return vec;
}

} // namespace agslm
