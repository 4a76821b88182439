#ifndef AGSLM_IFFT_HPP
#define AGSLM_IFFT_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "agslm/common.hpp"
#include "agslm/qam.hpp"
#include "agslm/signal.hpp"

namespace agslm {

/// Closed-form c-point cost of producing the first `a` outputs of an
/// N-point IFFT in bit-reversed order. k_of_a(N, N) == N * log2(N).
std::uint64_t k_of_a(std::uint64_t a, std::size_t n_samples);

/// Output visitation order 0, N/2, N/4, 3N/4, ... (bit reversal of 0..N-1).
std::vector<std::uint32_t> bit_reversed_order(std::size_t n_samples);

namespace detail {
/// Bit-reversal LUT and twiddle factors, shared read-only per N.
struct FftTables {
    std::vector<std::uint32_t> rev;   ///< rev[i] = bit_reverse(i, n)
    std::vector<ComplexSample> tw;    ///< heap layout: tw[(1<<(s-1)) + p] = e^{+j 2 pi p / 2^s}
};
std::shared_ptr<const FftTables> fft_tables_for(std::size_t n_samples);
} // namespace detail

/// Radix-2 decimation-in-time IFFT dataflow graph with unnormalized-sum
/// semantics x(n) = sum_k X(k) W^{-kn}, W = e^{-j 2 pi / N}.
///
/// The graph evaluates lazily: next_output() produces outputs in
/// bit-reversed order, computing only the not-yet-computed butterfly nodes
/// and metering each as one c-point. Butterfly nodes are grouped into
/// residue classes (all rows congruent mod 2^s at stage s) which are
/// computed atomically; the per-node arithmetic is identical between lazy
/// and full evaluation, so both produce bitwise-equal outputs.
class ButterflyGraph {
public:
    explicit ButterflyGraph(std::size_t n_samples);

    std::size_t size() const { return n_; }
    unsigned stages() const { return log2n_; }

    /// Start a fresh candidate whose stage-0 inputs are spectrum[rev[row]].
    /// The spectrum buffer must outlive the evaluation.
    void begin(const ComplexSample* spectrum);

    /// Start a candidate with stage `m` seeded directly (values in the
    /// transposed class layout, as returned by stage_values(m)). Only the
    /// last stages() - m stages are evaluated and metered.
    void begin_from_stage(unsigned m, std::span<const ComplexSample> values);

    struct Output {
        std::uint32_t index;          ///< natural-order output index
        ComplexSample value;
        std::uint64_t c_points_added;
    };

    /// Produce the next output in bit-reversed order.
    Output next_output();

    bool exhausted() const { return position_ == n_; }
    std::size_t outputs_produced() const { return position_; }

    /// Complete every remaining node (stage-major). After this the meter
    /// has advanced by exactly k_of_a(N, N) minus the cost already spent.
    void run_all();

    /// Per-candidate c-point meter (monotone, <= N log2 N).
    std::uint64_t c_points() const { return c_points_; }
    std::uint64_t classes_computed() const { return classes_computed_; }

    /// Compute stages base+1 .. m fully (used for stage-split common parts).
    void run_to_stage(unsigned m);

    /// Stage value array in transposed class layout (class c of size N/2^s
    /// occupies [c * N/2^s, (c+1) * N/2^s); member q of class c is the node
    /// at row q * 2^s + c).
    std::span<const ComplexSample> stage_values(unsigned s) const;

    /// Natural-order outputs; valid once all N outputs exist.
    std::span<const ComplexSample> time_domain() const;

    /// Whether the butterfly node at (stage, row) has been computed.
    bool computed(unsigned stage, std::uint32_t row) const;
    /// Value of the node at (stage, row); the node must be computed.
    ComplexSample node_value(unsigned stage, std::uint32_t row) const;

private:
    void compute_class(unsigned s, std::uint32_t cls);
    bool class_done(unsigned s, std::uint32_t cls) const { return done_[(std::size_t{1} << s) + cls] != 0; }

    std::size_t n_;
    unsigned log2n_;
    std::shared_ptr<const detail::FftTables> tables_;
    const ComplexSample* spectrum_ = nullptr;
    std::vector<ComplexSample> stages_;  ///< flat [stage-1][N]
    std::vector<std::uint8_t> done_;     ///< heap layout: done_[(1<<s)+cls]
    std::uint64_t c_points_ = 0;
    std::uint64_t classes_computed_ = 0;
    std::size_t position_ = 0;
    unsigned base_stage_ = 0;
};

/// Full N log2 N evaluation of the unnormalized IFFT sum.
SignalSequence full_ifft(const SymbolSequence& block);

/// Stage-split evaluator for schemes that share the first n-r stages across
/// candidates. The common part is metered once; each candidate applies its
/// per-block rotation factors at stage n-r and runs the last r stages,
/// either fully or lazily with incremental c-point accounting.
class StageSplitIfft {
public:
    StageSplitIfft(std::size_t n_samples, unsigned remaining_stages);

    std::size_t size() const { return n_; }
    unsigned remaining_stages() const { return r_; }
    unsigned split_stage() const { return common_.stages() - r_; }
    /// Number of rotation blocks (= 2^r), each spanning 2^{n-r} rows.
    std::size_t block_count() const { return std::size_t{1} << r_; }

    /// Compute the common stages for this spectrum; meters (n-r) * N once.
    void load(const ComplexSample* spectrum);

    std::uint64_t common_c_points() const { return common_c_points_; }

    /// Start a candidate: multiply the stage-(n-r) values by one unit-
    /// magnitude factor per block, then evaluate the last r stages lazily.
    void begin_candidate(std::span<const ComplexSample> block_factors);

    ButterflyGraph::Output next_output() { return candidate_.next_output(); }
    bool exhausted() const { return candidate_.exhausted(); }
    void run_remaining() { candidate_.run_all(); }
    std::uint64_t candidate_c_points() const { return candidate_.c_points(); }
    std::span<const ComplexSample> candidate_signal() const { return candidate_.time_domain(); }

private:
    std::size_t n_;
    unsigned r_;
    ButterflyGraph common_;
    ButterflyGraph candidate_;
    const ComplexSample* spectrum_ = nullptr;
    std::vector<ComplexSample> rotated_;  ///< stage-(n-r) values or spectrum when r == n
    std::shared_ptr<const detail::FftTables> tables_;
    std::uint64_t common_c_points_ = 0;
};

} // namespace agslm

#endif // AGSLM_IFFT_HPP
