#ifndef AGSLM_ANALYTICS_HPP
#define AGSLM_ANALYTICS_HPP

#include <cstddef>
#include <vector>

namespace agslm {

// Stochastic complexity model for adaptive generation in the conventional
// scheme. Valid at the Nyquist sampling rate under the complex-Gaussian
// signal model: normalized sample powers are i.i.d. unit exponentials.

/// Probability that one sample's normalized power lies below gamma: 1 - e^{-gamma}.
double gamma_law(double gamma);

/// Conditional PMF of the number of samples generated before the abort,
/// given the running minimum gamma: geometric with the last mass censored
/// at a = N.
double conditional_pmf(std::size_t a, double gamma, std::size_t n_samples);

/// CDF of the running-minimum PAPR after `u_minus_1` candidates:
/// 1 - (1 - Gamma^N)^{u-1}.
double running_min_papr_cdf(double gamma, int u_minus_1, std::size_t n_samples);

/// Density of the running-minimum PAPR:
/// (u-1) (1 - Gamma^N)^{u-2} N Gamma^{N-1} e^{-gamma}.
double running_min_papr_pdf(double gamma, int u_minus_1, std::size_t n_samples);

/// PMF of A_u, the number of samples generated at the u-th candidate.
struct AuDistribution {
    int u = 2;
    std::size_t n_samples = 0;
    std::vector<double> pmf;      ///< pmf[a-1] for a = 1..N, renormalized to sum 1
    double truncated_mass = 0.0;  ///< running-min mass below gamma = 1, dropped by the
                                  ///< integral's lower limit before renormalization
};

/// Integrate conditional_pmf x running_min_papr_pdf over gamma in [1, inf).
/// Results are cached per (u, N, tolerance).
AuDistribution pmf_au(int u, std::size_t n_samples, double tolerance = 1e-9);

/// Mean of an AuDistribution (in samples).
double mean_generated(const AuDistribution& dist);

struct ExpectedAgCost {
    double total_t = 0.0;     ///< T + sum_u E[K(A_u)], in units of T
    double relative = 0.0;    ///< total / (U * T)
    double error_bound = 0.0; ///< propagated quadrature error (units of T)
};

/// Expected c-point cost of the conventional scheme with adaptive
/// generation (closed-form K combined with the A_u distributions).
ExpectedAgCost expected_ag_cost(int candidates, std::size_t n_samples, double tolerance = 1e-9);

} // namespace agslm

#endif // AGSLM_ANALYTICS_HPP
