#include "agslm/ifft.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace agslm {

std::uint64_t k_of_a(std::uint64_t a, std::size_t n_samples) {
    const unsigned n = log2_exact(n_samples);
    if (a < 1 || a > n_samples) {
        throw std::invalid_argument("k_of_a: a must lie in [1, N]");
    }
    std::uint64_t cost = n_samples - 1; // first output: one node per stage level, 2^0 + ... + 2^{n-1}
    for (unsigned i = 0; i < n; ++i) {
        cost += ((a - 1) >> i) << i;
    }
    return cost;
}

std::vector<std::uint32_t> bit_reversed_order(std::size_t n_samples) {
    const unsigned n = log2_exact(n_samples);
    std::vector<std::uint32_t> order(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        order[i] = bit_reverse(static_cast<std::uint32_t>(i), n);
    }
    return order;
}

namespace detail {

std::shared_ptr<const FftTables> fft_tables_for(std::size_t n_samples) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const FftTables>> cache;

    const unsigned n = log2_exact(n_samples);
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n_samples);
    if (it != cache.end()) return it->second;

    auto tables = std::make_shared<FftTables>();
    tables->rev.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        tables->rev[i] = bit_reverse(static_cast<std::uint32_t>(i), n);
    }
    // Inverse-transform twiddles e^{+j 2 pi p / 2^s} for p < 2^{s-1},
    // stored heap-style at index (1 << (s-1)) + p.
    tables->tw.assign(n_samples, ComplexSample{1.0, 0.0});
    for (unsigned s = 1; s <= n; ++s) {
        const std::size_t half = std::size_t{1} << (s - 1);
        for (std::size_t p = 0; p < half; ++p) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) /
                                 static_cast<double>(std::size_t{1} << s);
            tables->tw[half + p] = std::polar(1.0, angle);
        }
    }
    cache.emplace(n_samples, tables);
    return tables;
}

} // namespace detail

ButterflyGraph::ButterflyGraph(std::size_t n_samples)
    : n_(n_samples),
      log2n_(log2_exact(n_samples)),
      tables_(detail::fft_tables_for(n_samples)),
      stages_(n_ * log2n_),
      done_(2 * n_, 0) {
    if (n_ < 2) {
        throw std::invalid_argument("ButterflyGraph: need at least 2 samples");
    }
}

void ButterflyGraph::begin(const ComplexSample* spectrum) {
    spectrum_ = spectrum;
    base_stage_ = 0;
    std::fill(done_.begin(), done_.end(), std::uint8_t{0});
    c_points_ = 0;
    classes_computed_ = 0;
    position_ = 0;
}

void ButterflyGraph::begin_from_stage(unsigned m, std::span<const ComplexSample> values) {
    if (m < 1 || m >= log2n_) {
        throw std::invalid_argument("begin_from_stage: stage out of range");
    }
    if (values.size() != n_) {
        throw std::invalid_argument("begin_from_stage: need N stage values");
    }
    spectrum_ = nullptr;
    base_stage_ = m;
    std::copy(values.begin(), values.end(), stages_.begin() + static_cast<std::ptrdiff_t>((m - 1) * n_));
    std::fill(done_.begin(), done_.end(), std::uint8_t{0});
    c_points_ = 0;
    classes_computed_ = 0;
    position_ = 0;
}

void ButterflyGraph::compute_class(unsigned s, std::uint32_t cls) {
    assert(s > base_stage_ && s <= log2n_);
    assert(!class_done(s, cls));

    const std::size_t members = n_ >> s;
    const std::uint32_t half = 1u << (s - 1);
    const std::uint32_t parent = cls & (half - 1);
    const bool upper = (cls & half) != 0;
    ComplexSample* out = stages_.data() + (s - 1) * n_ + std::size_t{cls} * members;

    if (s == 1 && base_stage_ == 0) {
        // Stage-0 nodes are spectrum reads through the bit-reversal LUT.
        const auto& rev = tables_->rev;
        if (!upper) {
            for (std::size_t q = 0; q < members; ++q) {
                out[q] = spectrum_[rev[2 * q]] + spectrum_[rev[2 * q + 1]];
            }
        } else {
            for (std::size_t q = 0; q < members; ++q) {
                out[q] = spectrum_[rev[2 * q]] - spectrum_[rev[2 * q + 1]];
            }
        }
    } else {
        assert(s - 1 <= base_stage_ || class_done(s - 1, parent));
        const ComplexSample* in = stages_.data() + (s - 2) * n_ + std::size_t{parent} * (2 * members);
        const ComplexSample w = tables_->tw[std::size_t{half} + parent];
        if (!upper) {
            for (std::size_t q = 0; q < members; ++q) {
                out[q] = in[2 * q] + w * in[2 * q + 1];
            }
        } else {
            for (std::size_t q = 0; q < members; ++q) {
                out[q] = in[2 * q] - w * in[2 * q + 1];
            }
        }
    }

    done_[(std::size_t{1} << s) + cls] = 1;
    c_points_ += members;
    ++classes_computed_;
}

ButterflyGraph::Output ButterflyGraph::next_output() {
    if (position_ >= n_) {
        throw std::out_of_range("next_output: all outputs already produced");
    }
    const auto j = static_cast<std::uint32_t>(position_);
    const std::uint32_t out_index = tables_->rev[j];

    unsigned s_lo = base_stage_ + 1;
    if (j != 0) {
        const unsigned tz = static_cast<unsigned>(std::countr_zero(j));
        s_lo = std::max(s_lo, log2n_ - std::min(tz, log2n_ - 1));
    }
    const std::uint64_t before = c_points_;
    for (unsigned s = s_lo; s <= log2n_; ++s) {
        compute_class(s, out_index & ((1u << s) - 1));
    }
    ++position_;
    const ComplexSample value = stages_[(log2n_ - 1) * n_ + out_index];
    return {out_index, value, c_points_ - before};
}

void ButterflyGraph::run_all() {
    run_to_stage(log2n_);
    position_ = n_;
}

void ButterflyGraph::run_to_stage(unsigned m) {
    if (m > log2n_) {
        throw std::invalid_argument("run_to_stage: stage out of range");
    }
    for (unsigned s = base_stage_ + 1; s <= m; ++s) {
        const std::uint32_t classes = 1u << s;
        for (std::uint32_t cls = 0; cls < classes; ++cls) {
            if (!class_done(s, cls)) compute_class(s, cls);
        }
    }
}

std::span<const ComplexSample> ButterflyGraph::stage_values(unsigned s) const {
    if (s < 1 || s > log2n_) {
        throw std::invalid_argument("stage_values: stage out of range");
    }
    return {stages_.data() + (s - 1) * n_, n_};
}

std::span<const ComplexSample> ButterflyGraph::time_domain() const {
    return {stages_.data() + (log2n_ - 1) * n_, n_};
}

bool ButterflyGraph::computed(unsigned stage, std::uint32_t row) const {
    if (stage < 1 || stage > log2n_ || row >= n_) {
        throw std::invalid_argument("computed: node out of range");
    }
    if (stage <= base_stage_) return true;
    return class_done(stage, row & ((1u << stage) - 1));
}

ComplexSample ButterflyGraph::node_value(unsigned stage, std::uint32_t row) const {
    if (!computed(stage, row)) {
        throw std::logic_error("node_value: node not computed");
    }
    const std::size_t members = n_ >> stage;
    const std::uint32_t cls = row & ((1u << stage) - 1);
    const std::uint32_t member = row >> stage;
    return stages_[(stage - 1) * n_ + std::size_t{cls} * members + member];
}

SignalSequence full_ifft(const SymbolSequence& block) {
    const std::size_t n = block.symbols.size();
    (void)log2_exact(n);
    if (n == 1) return make_signal({block.symbols.front()});
    ButterflyGraph graph(n);
    graph.begin(block.symbols.data());
    graph.run_all();
    const auto out = graph.time_domain();
    return make_signal(std::vector<ComplexSample>(out.begin(), out.end()));
}

StageSplitIfft::StageSplitIfft(std::size_t n_samples, unsigned remaining_stages)
    : n_(n_samples),
      r_(remaining_stages),
      common_(n_samples),
      candidate_(n_samples),
      rotated_(n_samples),
      tables_(detail::fft_tables_for(n_samples)) {
    if (r_ < 1 || r_ > common_.stages()) {
        throw std::invalid_argument("StageSplitIfft: remaining stages must lie in [1, log2 N]");
    }
}

void StageSplitIfft::load(const ComplexSample* spectrum) {
    spectrum_ = spectrum;
    const unsigned m = split_stage();
    if (m == 0) {
        common_c_points_ = 0; // split at the inputs: no shared butterflies
        return;
    }
    common_.begin(spectrum);
    common_.run_to_stage(m);
    common_c_points_ = common_.c_points();
}

void StageSplitIfft::begin_candidate(std::span<const ComplexSample> block_factors) {
    if (block_factors.size() != block_count()) {
        throw std::invalid_argument("begin_candidate: need one factor per block (2^r)");
    }
    const unsigned m = split_stage();
    if (m == 0) {
        // Rotation acts on the (bit-reversed) inputs themselves.
        const auto& rev = tables_->rev;
        for (std::size_t k = 0; k < n_; ++k) {
            rotated_[k] = spectrum_[k] * block_factors[rev[k]];
        }
        candidate_.begin(rotated_.data());
        return;
    }
    // Transposed class layout at stage m: member q of every class is the
    // node in rotation block q, so the factor pattern repeats mod 2^r.
    const auto common = common_.stage_values(m);
    const std::size_t mask = block_count() - 1;
    for (std::size_t i = 0; i < n_; ++i) {
        rotated_[i] = common[i] * block_factors[i & mask];
    }
    candidate_.begin_from_stage(m, rotated_);
}

} // namespace agslm
