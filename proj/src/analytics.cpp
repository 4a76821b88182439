#include "agslm/analytics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "agslm/ifft.hpp"

namespace agslm {

double gamma_law(double gamma) {
    if (gamma < 0.0) {
        throw std::invalid_argument("gamma_law: gamma must be nonnegative");
    }
    return -std::expm1(-gamma);
}

double conditional_pmf(std::size_t a, double gamma, std::size_t n_samples) {
    if (a < 1 || a > n_samples) {
        throw std::invalid_argument("conditional_pmf: a must lie in [1, N]");
    }
    const double big_gamma = gamma_law(gamma);
    if (a == n_samples) {
        return std::pow(big_gamma, static_cast<double>(n_samples - 1));
    }
    return std::pow(big_gamma, static_cast<double>(a - 1)) * (1.0 - big_gamma);
}

double running_min_papr_cdf(double gamma, int u_minus_1, std::size_t n_samples) {
    if (u_minus_1 < 1) {
        throw std::invalid_argument("running_min_papr_cdf: need u-1 >= 1");
    }
    const double block_cdf = std::pow(gamma_law(gamma), static_cast<double>(n_samples));
    return 1.0 - std::pow(1.0 - block_cdf, static_cast<double>(u_minus_1));
}

double running_min_papr_pdf(double gamma, int u_minus_1, std::size_t n_samples) {
    if (u_minus_1 < 1) {
        throw std::invalid_argument("running_min_papr_pdf: need u-1 >= 1");
    }
    const double big_gamma = gamma_law(gamma);
    const double n = static_cast<double>(n_samples);
    const double block_cdf = std::pow(big_gamma, n);
    return static_cast<double>(u_minus_1) * std::pow(1.0 - block_cdf, static_cast<double>(u_minus_1 - 1)) *
           n * std::pow(big_gamma, n - 1.0) * std::exp(-gamma);
}

namespace {

// Upper integration limit: the running-min tail above gamma_max must carry
// less than min(1e-8, tolerance / 10) mass.
double tail_cutoff(int u, std::size_t n_samples, double tolerance) {
    const double epsilon = std::min(1e-8, tolerance / 10.0);
    const double delta = std::pow(epsilon, 1.0 / static_cast<double>(u - 1));
    double gamma_max = std::log(static_cast<double>(n_samples) /
                                std::max(-std::log1p(-delta), 1e-300)) +
                       2.0;
    for (int step = 0; step < 64; ++step) {
        if (1.0 - running_min_papr_cdf(gamma_max, u - 1, n_samples) < epsilon) {
            return gamma_max;
        }
        gamma_max += 5.0;
    }
    std::ostringstream oss;
    oss << "pmf_au: failed to locate a tail cutoff for u=" << u << ", N=" << n_samples;
    throw std::runtime_error(oss.str());
}

AuDistribution compute_pmf_au(int u, std::size_t n_samples, double tolerance) {
    using quad = boost::math::quadrature::gauss_kronrod<double, 15>;

    AuDistribution dist;
    dist.u = u;
    dist.n_samples = n_samples;
    dist.pmf.resize(n_samples);

    const double gamma_max = tail_cutoff(u, n_samples, tolerance);
    double quad_error_total = 0.0;
    double raw_sum = 0.0;
    for (std::size_t a = 1; a <= n_samples; ++a) {
        const auto integrand = [&](double gamma) {
            return conditional_pmf(a, gamma, n_samples) *
                   running_min_papr_pdf(gamma, u - 1, n_samples);
        };
        double error = 0.0;
        const double mass = quad::integrate(integrand, 1.0, gamma_max, 12, tolerance, &error);
        if (!std::isfinite(mass) || error > std::max(tolerance * 100.0, 1e-6)) {
            std::ostringstream oss;
            oss << "pmf_au: quadrature failed for a=" << a << " (u=" << u << ", N=" << n_samples
                << "): value=" << mass << " error=" << error;
            throw std::runtime_error(oss.str());
        }
        dist.pmf[a - 1] = mass;
        quad_error_total += error;
        raw_sum += mass;
    }

    // The conditional masses sum to 1, so the raw total equals the
    // running-min mass above gamma = 1; anything below is truncated by the
    // integral's lower limit and restored by renormalization.
    dist.truncated_mass = 1.0 - raw_sum;
    const double model_truncation = running_min_papr_cdf(1.0, u - 1, n_samples);
    if (std::abs(dist.truncated_mass - model_truncation) > 1e-4 + 100.0 * quad_error_total) {
        std::ostringstream oss;
        oss << "pmf_au: mass accounting failed (raw sum " << raw_sum << ", expected truncation "
            << model_truncation << ")";
        throw std::runtime_error(oss.str());
    }
    for (auto& mass : dist.pmf) mass /= raw_sum;
    return dist;
}

} // namespace

AuDistribution pmf_au(int u, std::size_t n_samples, double tolerance) {
    if (u < 2) {
        throw std::invalid_argument("pmf_au: defined for u >= 2");
    }
    if (n_samples < 2) {
        throw std::invalid_argument("pmf_au: need at least 2 samples");
    }
    static std::mutex mutex;
    static std::map<std::tuple<int, std::size_t, double>, std::shared_ptr<const AuDistribution>> cache;

    const auto key = std::make_tuple(u, n_samples, tolerance);
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    auto dist = std::make_shared<const AuDistribution>(compute_pmf_au(u, n_samples, tolerance));
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, dist);
    return *dist;
}

double mean_generated(const AuDistribution& dist) {
    double mean = 0.0;
    for (std::size_t a = 1; a <= dist.pmf.size(); ++a) {
        mean += static_cast<double>(a) * dist.pmf[a - 1];
    }
    return mean;
}

ExpectedAgCost expected_ag_cost(int candidates, std::size_t n_samples, double tolerance) {
    if (candidates < 1) {
        throw std::invalid_argument("expected_ag_cost: need at least one candidate");
    }
    const double t_cost = static_cast<double>(n_samples) *
                          static_cast<double>(log2_exact(n_samples));
    ExpectedAgCost cost;
    cost.total_t = 1.0; // the first candidate is always generated fully
    for (int u = 2; u <= candidates; ++u) {
        const auto dist = pmf_au(u, n_samples, tolerance);
        double expected_k = 0.0;
        for (std::size_t a = 1; a <= n_samples; ++a) {
            expected_k += static_cast<double>(k_of_a(a, n_samples)) * dist.pmf[a - 1];
        }
        cost.total_t += expected_k / t_cost;
        cost.error_bound += tolerance * static_cast<double>(n_samples) / t_cost + 1e-12;
    }
    cost.relative = cost.total_t / static_cast<double>(candidates);
    return cost;
}

} // namespace agslm
