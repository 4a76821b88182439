#ifndef AGSLM_SLM_HPP
#define AGSLM_SLM_HPP

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "agslm/ifft.hpp"
#include "agslm/qam.hpp"
#include "agslm/signal.hpp"

namespace agslm {

enum class SlmScheme { Conventional, Lim, Wang, Baxley };

const char* to_string(SlmScheme scheme);
std::optional<SlmScheme> parse_scheme(std::string_view name);

/// Cost unit of a scheme: IFFT c-points (reported in units of T = N log2 N)
/// or complex additions (Wang's conversion arithmetic).
enum class CostUnit { CPoints, ComplexAdditions };

struct SlmConfig {
    std::size_t n_data = 256;      ///< data subcarriers
    std::size_t oversampling = 4;  ///< L
    int candidates = 8;            ///< U
    SlmScheme scheme = SlmScheme::Conventional;
    bool ag_enabled = false;
    unsigned remaining_stages = 5; ///< r (Lim)
    double gamma0_db = 8.0;        ///< saturation threshold (Baxley)
    std::uint64_t seed = 1;

    std::size_t ifft_size() const { return n_data * oversampling; }
    void validate() const; ///< throws std::invalid_argument on bad combinations
};

/// Intermediate minimum PAPR value and the candidate holding it.
struct GammaState {
    double gamma = std::numeric_limits<double>::infinity(); ///< linear PAPR
    int best_u = 0;
};

struct SlmTrialStats {
    std::uint64_t cost_raw = 0;              ///< c-points or complex additions
    std::vector<std::uint32_t> generated;    ///< samples generated per candidate (0 = untested)
    std::vector<std::uint8_t> aborted;       ///< abort flag per candidate
    std::vector<double> gamma_trace;         ///< running minimum PAPR after each tested candidate
};

struct SlmResult {
    int selected_u = 1;
    SignalSequence selected_signal;          ///< empty when signal collection is disabled
    double papr_db = 0.0;
    GammaState gamma;                        ///< final intermediate-minimum state
    CostUnit unit = CostUnit::CPoints;
    std::uint64_t t_c_points = 0;            ///< c-points per T (N log2 N); 0 for addition counts
    SlmTrialStats stats;

    double cost_in_t() const {
        return static_cast<double>(stats.cost_raw) / static_cast<double>(t_c_points);
    }
};

/// Wang's time-domain conversion kernel: four taps at circular-shift
/// offsets {0, N/4, N/2, 3N/4}. Tap values are (1/2) * {+-1, +-j}, chosen
/// so the equivalent frequency response has unit magnitude everywhere.
struct ConversionKernel {
    std::array<ComplexSample, 4> taps; ///< already scaled by 1/2
};

/// Catalog of distinct unit-response kernels, enough for U = 12.
std::span<const ConversionKernel> conversion_kernel_catalog();

/// Frequency response of a kernel; it depends only on k mod 4.
std::array<ComplexSample, 4> kernel_frequency_response(const ConversionKernel& kernel);

/// Throws std::runtime_error if any |P(k)| deviates from 1 beyond 1e-9.
void verify_kernel_unitarity(const ConversionKernel& kernel);

/// One SLM transmitter instance with reusable buffers. A single engine is
/// not thread-safe; give each worker its own.
class SlmEngine {
public:
    /// Fills `out` with the rotation entries for candidate u (conventional
    /// and Baxley: N_data phases; Lim: 2^r block factors).
    using RotationProvider =
        std::function<void(int u, std::uint64_t trial, std::vector<ComplexSample>& out)>;

    explicit SlmEngine(SlmConfig cfg);
    ~SlmEngine();

    const SlmConfig& config() const { return cfg_; }
    CostUnit unit() const;
    std::uint64_t t_c_points() const { return t_c_points_; }

    /// Deterministic random data block for (cfg.seed, trial).
    SymbolSequence draw_data(std::uint64_t trial) const;

    /// Run the configured form (cfg.ag_enabled) on a data block of length n_data.
    SlmResult run(const SymbolSequence& data_block, std::uint64_t trial = 0);
    /// Run a specific form regardless of cfg.ag_enabled (for equivalence checks).
    SlmResult run_form(const SymbolSequence& data_block, std::uint64_t trial, bool ag);

    /// Wang entry point taking the already-generated original signal.
    SlmResult run_wang_signal(const SignalSequence& x1, std::uint64_t trial, bool ag);

    /// Skip copying candidate signals (Monte Carlo mode; selected_signal stays empty).
    void set_collect_signal(bool collect) { collect_signal_ = collect; }
    void set_rotation_provider(RotationProvider provider) { provider_ = std::move(provider); }

private:
    struct Incumbent;
    void prepare_trial(const SymbolSequence& data_block);
    void write_candidate_spectrum(std::span<const ComplexSample> phases, ComplexSample* spectrum) const;
    void write_plain_spectrum(ComplexSample* spectrum) const;
    void default_rotation(int u, std::uint64_t trial, std::vector<ComplexSample>& out) const;

    SlmResult run_conventional(std::uint64_t trial, bool ag);
    SlmResult run_lim(std::uint64_t trial, bool ag);
    SlmResult run_wang(const SignalSequence& x1, std::uint64_t trial, bool ag);
    SlmResult run_baxley(std::uint64_t trial, bool ag);

    SlmResult finish(const Incumbent& best, SlmTrialStats stats) const;

    SlmConfig cfg_;
    std::uint64_t t_c_points_ = 0;
    bool collect_signal_ = true;
    RotationProvider provider_;

    // trial state
    std::vector<ComplexSample> symbols_;     ///< current data block (N_data)
    std::vector<ComplexSample> spectrum_;    ///< oversampled candidate spectrum (N)
    std::vector<std::uint32_t> band_;        ///< data bin positions in the oversampled spectrum
    std::vector<ComplexSample> rotation_;    ///< per-candidate rotation entries
    double mean_power_ = 0.0;                ///< per-block E[|x|^2], identical for all candidates

    std::unique_ptr<ButterflyGraph> graph_;
    std::unique_ptr<StageSplitIfft> split_;
    std::vector<std::unique_ptr<ButterflyGraph>> baxley_graphs_;
    std::vector<ComplexSample> baxley_spectra_; ///< U candidate spectra kept alive for resume
    std::vector<ComplexSample> wang_candidate_;
    std::vector<std::uint32_t> wang_order_;     ///< decimated scan order for the AG form
    std::vector<ComplexSample> x1_;
    std::vector<ComplexSample> best_signal_;
};

// Per-operation convenience wrappers over SlmEngine.
SlmResult slm_conventional(const SymbolSequence& data_block, const SlmConfig& cfg);
SlmResult slm_conventional_ag(const SymbolSequence& data_block, const SlmConfig& cfg);
SlmResult slm_lim(const SymbolSequence& data_block, const SlmConfig& cfg);
SlmResult slm_lim_ag(const SymbolSequence& data_block, const SlmConfig& cfg);
SlmResult slm_wang(const SignalSequence& x1, const SlmConfig& cfg);
SlmResult slm_wang_ag(const SignalSequence& x1, const SlmConfig& cfg);
SlmResult slm_baxley(const SymbolSequence& data_block, const SlmConfig& cfg);
SlmResult slm_baxley_ag(const SymbolSequence& data_block, const SlmConfig& cfg);

} // namespace agslm

#endif // AGSLM_SLM_HPP
