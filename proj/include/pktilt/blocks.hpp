#pragma once

#include <cstdint>
#include <vector>

#include "pktilt/eppf.hpp"
#include "pktilt/log_value.hpp"
#include "pktilt/quadrature.hpp"
#include "pktilt/tempered_stable.hpp"

namespace pktilt {

// Generalized Stirling numbers S_α(n, k) = B_{n,k}((1-α)_{•-1}) in log scale,
// filled by S_α(n+1, k) = S_α(n, k-1) + (n - kα) S_α(n, k). Immutable once built.
class StirlingTable {
public:
    StirlingTable(double alpha, std::int64_t n_max);

    double alpha() const { return alpha_; }
    std::int64_t n_max() const { return n_max_; }
    LogValue log_value(std::int64_t n, std::int64_t k) const;
    double value(std::int64_t n, std::int64_t k) const { return log_value(n, k).to_linear(); }

private:
    std::size_t index(std::int64_t n, std::int64_t k) const;

    double alpha_;
    std::int64_t n_max_;
    std::vector<double> log_entries_;
};

StirlingTable stirling_table(double alpha, std::int64_t n_max);

// S_α(n, k) = 1 / (α^k k!) Σ_{j=1}^k (-1)^j C(k, j) (-jα)_{n}, summed in extended
// precision. Throws CancellationError if fewer than six digits survive.
double stirling_explicit(double alpha, std::int64_t n, std::int64_t k);

// B_{n,k}((1/2)_{•-1}) = C(2n-k-1, n-1) Γ(n)/Γ(k) 2^(2k-2n).
double bell_polynomial_half(std::int64_t n, std::int64_t k);
double log_bell_polynomial_half(std::int64_t n, std::int64_t k);

// Distribution of the number of blocks K_n; probabilities[k-1] = Pr(K_n = k).
struct BlockCountPmf {
    std::int64_t n = 0;
    std::vector<double> probabilities;
    std::vector<double> log_probabilities;

    double total() const;
};

BlockCountPmf blocks_pmf(std::int64_t n, const GGParams& params, const QuadratureSpec& spec = {});
BlockCountPmf blocks_pmf(std::int64_t n, const GibbsWeights& weights, const StirlingTable& table);

// Density of the alpha-diversity S = T^-α, T tilted stable:
//   f(s) = exp(δγ - (γ/s)^(1/α) / 2) f_{α,δ}(s^(-1/α)) / (α s^(1/α + 1)).
double diversity_density(const GGParams& params, double s, const StableSeriesConfig& cfg = {});
LogValue log_diversity_density(const GGParams& params, double s, const StableSeriesConfig& cfg = {});

// Closed form at α = 1/2, γ = 1: sqrt(2) δ / sqrt(pi) exp(δ - (δ² s² + s^-2) / 2).
double diversity_density_half(double delta, double s);

// Pr(S <= s) = 1 - ∫_s^∞ f.
double diversity_cdf(const GGParams& params, double s, const QuadratureSpec& spec = {});

// E[S] = ∫_0^∞ s f(s) ds.
double diversity_mean(const GGParams& params, const QuadratureSpec& spec = {});

// With Laplace exponent δ(2λ)^α the Lévy tail is δ 2^α x^-α / Γ(1-α), so the
// almost-sure limit of K_n / n^α is c S with c = δ 2^α, not S itself.
double limit_scale(const GGParams& params);
double limit_density(const GGParams& params, double x, const StableSeriesConfig& cfg = {});
double limit_cdf(const GGParams& params, double x, const QuadratureSpec& spec = {});
double limit_mean(const GGParams& params, const QuadratureSpec& spec = {});

}  // namespace pktilt
