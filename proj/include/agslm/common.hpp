#ifndef AGSLM_COMMON_HPP
#define AGSLM_COMMON_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace agslm {

/// Baseband complex sample. All numeric I/O is 64-bit floating point.
using ComplexSample = std::complex<double>;

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline unsigned log2_exact(std::size_t n) {
    if (!is_pow2(n)) {
        throw std::invalid_argument("length must be a power of two, got " + std::to_string(n));
    }
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    return bits;
}

/// Reverse the low `bits` bits of `value`.
inline std::uint32_t bit_reverse(std::uint32_t value, unsigned bits) {
    std::uint32_t out = 0;
    for (unsigned b = 0; b < bits; ++b) {
        out = (out << 1) | ((value >> b) & 1u);
    }
    return out;
}

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace agslm

#endif // AGSLM_COMMON_HPP
