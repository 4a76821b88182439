#ifndef AGSLM_SIGNAL_HPP
#define AGSLM_SIGNAL_HPP

#include <span>
#include <vector>

#include "agslm/common.hpp"
#include "agslm/qam.hpp"
#include "agslm/rng.hpp"

namespace agslm {

/// Unit-magnitude frequency-domain rotation vector P^u for candidate u.
/// u = 1 is always the all-one vector producing the original signal.
struct PhaseVector {
    std::vector<ComplexSample> entries;
    int index_u = 1;
};

/// Time-domain block with its per-block mean power cached.
struct SignalSequence {
    std::vector<ComplexSample> samples;
    double mean_power = 0.0; ///< (1/N) * sum |samples[n]|^2
    int source_u = 1;
};

double block_mean_power(std::span<const ComplexSample> samples);

inline SignalSequence make_signal(std::vector<ComplexSample> samples, int source_u = 1) {
    SignalSequence sig;
    sig.mean_power = block_mean_power(samples);
    sig.samples = std::move(samples);
    sig.source_u = source_u;
    return sig;
}

/// Zero-pad at the spectrum centre: indices [0, N_data/2) keep the lower
/// half, indices [L*N_data - N_data/2, L*N_data) keep the upper half.
SymbolSequence oversample(const SymbolSequence& block, std::size_t factor);

/// max |x(n)|^2 / mean power, as a linear ratio.
double papr(const SignalSequence& signal);
double papr_db(const SignalSequence& signal);

/// Candidate generator: entries i.i.d. uniform over {+1, -1, +j, -j},
/// reproducible from (stream state, u). u = 1 returns the all-one vector.
PhaseVector random_phase_vector(int u, std::size_t n_data, RandomStream& stream);

/// Same draw sequence as random_phase_vector, writing into a reused buffer.
void fill_random_phases(int u, std::size_t count, RandomStream& stream,
                        std::vector<ComplexSample>& out);

} // namespace agslm

#endif // AGSLM_SIGNAL_HPP
