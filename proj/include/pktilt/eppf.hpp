#pragma once

#include <atomic>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <shared_mutex>
#include <span>
#include <utility>
#include <vector>

#include "pktilt/log_value.hpp"
#include "pktilt/quadrature.hpp"
#include "pktilt/tempered_stable.hpp"

namespace pktilt {

// Ordered block sizes (n_1, ..., n_k) of a partition of [n].
class Composition {
public:
    Composition() = default;
    explicit Composition(std::vector<std::int64_t> block_sizes);
    Composition(std::initializer_list<std::int64_t> block_sizes)
        : Composition(std::vector<std::int64_t>(block_sizes)) {}

    const std::vector<std::int64_t>& block_sizes() const { return sizes_; }
    std::int64_t n() const { return n_; }
    std::int64_t k() const { return static_cast<std::int64_t>(sizes_.size()); }
    bool empty() const { return sizes_.empty(); }

    // Composition with block j (0-based) grown by one, or a new singleton
    // block appended when j == k().
    Composition grown(std::size_t j) const;

private:
    std::vector<std::int64_t> sizes_;
    std::int64_t n_ = 0;
};

// Prediction rule for observation n+1: weight of joining each existing block,
// and weight of opening a new one.
struct PredictiveDistribution {
    std::vector<double> existing_block_weights;
    double new_block_weight = 0.0;

    double total() const;
};

// eta_{n,k} = ∫_0^∞ λ^(n-1) exp(-δ (g + 2λ)^α) (g + 2λ)^(kα - n) dλ,  g = γ^(1/α),
// by quadrature after the substitution u = δ (g + 2λ)^α, which gives
//   eta_{n,k} = 2^-n α^-1 δ^-k e^{-δγ} ∫_0^∞ (v + δγ)^(k-1) (1 - (δγ / (v + δγ))^(1/α))^(n-1) e^-v dv.
LogValue log_eta(std::int64_t n, std::int64_t k, const GGParams& params, const QuadratureSpec& spec = {});

// eta_{n,k} at alpha = 1/2 as a finite signed sum of upper incomplete gamma
// values Γ(k - 2n + 2 + 2i; δγ), i = 0..n-1. Throws CancellationError if the
// sum loses more than six decimal digits.
LogValue log_eta_half_closed(std::int64_t n, std::int64_t k, double delta, double gamma);

// Gibbs weight V_{n,k} = e^{δγ} δ^k α^k 2^n / Γ(n) · eta_{n,k}.
LogValue log_vnk(std::int64_t n, std::int64_t k, const GGParams& params, const QuadratureSpec& spec = {});

// Memoized Gibbs weights for one parameter set. At alpha = 1/2 with gamma > 0
// the incomplete-gamma path is tried first and quadrature is the fallback; the
// number of fallbacks is counted. Safe to share across threads.
class GibbsWeights {
public:
    explicit GibbsWeights(const GGParams& params, const QuadratureSpec& spec = {});

    const GGParams& params() const { return params_; }
    const QuadratureSpec& quadrature() const { return spec_; }

    LogValue log_vnk(std::int64_t n, std::int64_t k) const;
    LogValue log_eta(std::int64_t n, std::int64_t k) const;

    std::int64_t closed_form_fallbacks() const { return fallbacks_.load(); }
    std::size_t cached_entries() const;

private:
    GGParams params_;
    QuadratureSpec spec_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::pair<std::int64_t, std::int64_t>, LogValue> cache_;
    // Smallest n at which the closed path failed, per k; larger n skip straight to quadrature.
    mutable std::map<std::int64_t, std::int64_t> closed_limit_;
    mutable std::atomic<std::int64_t> fallbacks_{0};
};

// log p(n_1, ..., n_k) = log V_{n,k} + Σ_j log (1-α)_{n_j - 1}.
LogValue log_eppf(const Composition& c, const GGParams& params, const QuadratureSpec& spec = {});
LogValue log_eppf(const Composition& c, const GibbsWeights& weights);

// p_{j,n} = V_{n+1,k} / V_{n,k} (n_j - α),  q_n = V_{n+1,k+1} / V_{n,k},
// computed as differences of log weights.
// The empty composition yields q_0 = 1.
PredictiveDistribution predictive(const Composition& c, const GGParams& params, const QuadratureSpec& spec = {});
PredictiveDistribution predictive(const Composition& c, const GibbsWeights& weights);

}  // namespace pktilt
