#ifndef AGSLM_QAM_HPP
#define AGSLM_QAM_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "agslm/common.hpp"
#include "agslm/rng.hpp"

namespace agslm {

enum class Modulation { Qam16 };

/// Frequency-domain block of constellation symbols, optionally oversampled.
struct SymbolSequence {
    std::vector<ComplexSample> symbols;
    Modulation modulation = Modulation::Qam16;
    std::size_t oversampling = 1; ///< L; symbols.size() == N_data * L once oversampled

    std::size_t size() const { return symbols.size(); }
};

// Gray-mapped 16-QAM, unit average power. Per axis, two bits select the
// level: 00 -> +1, 01 -> +3, 10 -> -1, 11 -> -3, all scaled by 1/sqrt(10).
// Bits (b0 b1) drive the in-phase axis, (b2 b3) the quadrature axis, so the
// nibble 0000 maps to (1+1j)/sqrt(10).
namespace detail {
inline constexpr double kQamScale = 0.31622776601683794; // 1/sqrt(10)

inline double qam16_level(unsigned two_bits) {
    static constexpr std::array<double, 4> levels = {1.0, 3.0, -1.0, -3.0};
    return levels[two_bits & 3u] * kQamScale;
}
} // namespace detail

inline ComplexSample qam16_point(unsigned nibble) {
    return {detail::qam16_level((nibble >> 2) & 3u), detail::qam16_level(nibble & 3u)};
}

/// Map a bitstring (4 bits per symbol) onto 16-QAM symbols.
inline SymbolSequence map_qam16(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 4 != 0) {
        throw std::invalid_argument("map_qam16: bit count must be divisible by 4, got " +
                                    std::to_string(bits.size()));
    }
    SymbolSequence seq;
    seq.symbols.reserve(bits.size() / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        const unsigned nibble = static_cast<unsigned>(((bits[i] & 1u) << 3) | ((bits[i + 1] & 1u) << 2) |
                                                      ((bits[i + 2] & 1u) << 1) | (bits[i + 3] & 1u));
        seq.symbols.push_back(qam16_point(nibble));
    }
    return seq;
}

/// Draw a random data block of `n_data` 16-QAM symbols from `stream`.
inline SymbolSequence random_qam16_block(std::size_t n_data, RandomStream& stream) {
    SymbolSequence seq;
    seq.symbols.reserve(n_data);
    for (std::size_t i = 0; i < n_data; ++i) {
        seq.symbols.push_back(qam16_point(static_cast<unsigned>(stream.bits(4))));
    }
    return seq;
}

} // namespace agslm

#endif // AGSLM_QAM_HPP
