#include "pktilt/eppf.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "pktilt/errors.hpp"
#include "pktilt/specfun.hpp"

namespace pktilt {

Composition::Composition(std::vector<std::int64_t> block_sizes) : sizes_(std::move(block_sizes)) {
    for (auto s : sizes_) {
        if (s < 1) throw DomainError("Composition: block sizes must be positive");
        n_ += s;
    }
}

Composition Composition::grown(std::size_t j) const {
    auto sizes = sizes_;
    if (j == sizes.size()) sizes.push_back(1);
    else if (j < sizes.size()) ++sizes[j];
    else throw DomainError("Composition::grown: block index out of range");
    return Composition(std::move(sizes));
}

double PredictiveDistribution::total() const {
    double sum = new_block_weight;
    for (double w : existing_block_weights) sum += w;
    return sum;
}

namespace {

void require_nk(std::int64_t n, std::int64_t k) {
    if (n < 1 || k < 1 || k > n) throw DomainError("requires 1 <= k <= n");
}

// log of e^{δγ} δ^k α^k 2^n / Γ(n), the factor turning eta into V.
double log_gibbs_prefactor(std::int64_t n, std::int64_t k, const GGParams& p) {
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    return p.delta * p.gamma + kd * (std::log(p.delta) + std::log(p.alpha)) + nd * std::numbers::ln2 -
           log_gamma(nd);
}

// log V_{n,k} = (k-1) log α - log Γ(n)
//             + log ∫_0^∞ (v+c)^(k-1) (1 - (c/(v+c))^(1/α))^(n-1) e^-v dv,  c = δγ.
LogValue log_vnk_quadrature(std::int64_t n, std::int64_t k, const GGParams& p, const QuadratureSpec& spec) {
    const double c = p.delta * p.gamma;
    const double inv_alpha = 1.0 / p.alpha;
    const auto km1 = static_cast<double>(k - 1);
    const auto nm1 = static_cast<double>(n - 1);
    const LogIntegrand integrand = [=](double v) {
        if (!(v > 0.0)) return LogValue::zero();
        double log_f = -v;
        if (k > 1) log_f += km1 * std::log(v + c);
        if (n > 1 && c > 0.0) {
            // 1 - (c/(v+c))^(1/α) = -expm1(-(1/α) log1p(v/c))
            const double gap = -std::expm1(-inv_alpha * std::log1p(v / c));
            if (!(gap > 0.0)) return LogValue::zero();
            log_f += nm1 * std::log(gap);
        }
        return LogValue::from_log(log_f);
    };
    const LogValue integral = integrate_decaying(integrand, 0.0, spec);
    return integral * LogValue::from_log(km1 * std::log(p.alpha) - log_gamma(static_cast<double>(n)));
}

}  // namespace

LogValue log_vnk(std::int64_t n, std::int64_t k, const GGParams& params, const QuadratureSpec& spec) {
    params.validate();
    require_nk(n, k);
    if (n == 1) return LogValue::from_log(0.0);
    if (params.is_half() && params.gamma > 0.0) {
        try {
            return log_eta_half_closed(n, k, params.delta, params.gamma) *
                   LogValue::from_log(log_gibbs_prefactor(n, k, params));
        } catch (const CancellationError&) {
        }
    }
    return log_vnk_quadrature(n, k, params, spec);
}

LogValue log_eta(std::int64_t n, std::int64_t k, const GGParams& params, const QuadratureSpec& spec) {
    params.validate();
    require_nk(n, k);
    return log_vnk_quadrature(n, k, params, spec) / LogValue::from_log(log_gibbs_prefactor(n, k, params));
}

LogValue log_eta_half_closed(std::int64_t n, std::int64_t k, double delta, double gamma) {
    require_nk(n, k);
    if (!(delta > 0.0)) throw DomainError("log_eta_half_closed: delta must be positive");
    if (!(gamma > 0.0)) throw DomainError("log_eta_half_closed: gamma must be positive");

    // With u = δ sqrt(γ² + 2λ):
    //   eta = 2^(1-n) δ^-k ∫_c^∞ u^(k-1) (1 - c²/u²)^(n-1) e^-u du,  c = δγ,
    // and expanding (u² - c²)^(n-1) binomially leaves Γ(a_i; c) terms.
    const double c = delta * gamma;
    const double log_c = std::log(c);
    std::vector<LogValue> terms;
    terms.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const auto a = static_cast<double>(k - 2 * n + 2 + 2 * i);
        const std::int64_t power = n - 1 - i;
        const Sign sign = (power % 2 == 0) ? Sign::positive : Sign::negative;
        const LogValue g = upper_incomplete_gamma(a, c);
        const double log_mag = log_binomial(n - 1, i) + 2.0 * static_cast<double>(power) * log_c + g.log_magnitude();
        terms.push_back(LogValue::from_log(log_mag, sign));
    }
    const LogSum sum = log_sum(terms);
    if (!(sum.digits_lost <= 6.0) || !sum.value.is_positive()) {
        throw CancellationError("log_eta_half_closed: signed incomplete-gamma sum lost " +
                                    std::to_string(sum.digits_lost) + " digits at n = " + std::to_string(n),
                                sum.digits_lost);
    }
    const double log_front = (1.0 - static_cast<double>(n)) * std::numbers::ln2 - static_cast<double>(k) * std::log(delta);
    return sum.value * LogValue::from_log(log_front);
}

GibbsWeights::GibbsWeights(const GGParams& params, const QuadratureSpec& spec) : params_(params), spec_(spec) {
    params_.validate();
    spec_.validate();
}

LogValue GibbsWeights::log_vnk(std::int64_t n, std::int64_t k) const {
    require_nk(n, k);
    if (n == 1) return LogValue::from_log(0.0);
    const auto key = std::make_pair(n, k);
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    LogValue value;
    bool done = false;
    if (params_.is_half() && params_.gamma > 0.0) {
        bool skip = false;
        {
            std::shared_lock lock(mutex_);
            if (auto it = closed_limit_.find(k); it != closed_limit_.end()) skip = n >= it->second;
        }
        if (skip) {
            ++fallbacks_;
        } else {
            try {
                value = log_eta_half_closed(n, k, params_.delta, params_.gamma) *
                        LogValue::from_log(log_gibbs_prefactor(n, k, params_));
                done = true;
            } catch (const CancellationError&) {
                ++fallbacks_;
                std::unique_lock lock(mutex_);
                auto [it, fresh] = closed_limit_.emplace(k, n);
                if (!fresh) it->second = std::min(it->second, n);
            }
        }
    }
    if (!done) value = log_vnk_quadrature(n, k, params_, spec_);
    std::unique_lock lock(mutex_);
    cache_.emplace(key, value);
    return value;
}

LogValue GibbsWeights::log_eta(std::int64_t n, std::int64_t k) const {
    return log_vnk(n, k) / LogValue::from_log(log_gibbs_prefactor(n, k, params_));
}

std::size_t GibbsWeights::cached_entries() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

LogValue log_eppf(const Composition& c, const GibbsWeights& weights) {
    if (c.empty()) throw DomainError("log_eppf: composition must be nonempty");
    LogValue result = weights.log_vnk(c.n(), c.k());
    double log_w = 0.0;
    const double one_minus_alpha = 1.0 - weights.params().alpha;
    for (auto s : c.block_sizes()) log_w += log_rising_factorial(one_minus_alpha, s - 1);
    return result * LogValue::from_log(log_w);
}

LogValue log_eppf(const Composition& c, const GGParams& params, const QuadratureSpec& spec) {
    return log_eppf(c, GibbsWeights(params, spec));
}

PredictiveDistribution predictive(const Composition& c, const GibbsWeights& weights) {
    PredictiveDistribution out;
    if (c.empty()) {
        out.new_block_weight = 1.0;
        return out;
    }
    const double alpha = weights.params().alpha;
    const LogValue base = weights.log_vnk(c.n(), c.k());
    const double log_join = (weights.log_vnk(c.n() + 1, c.k()) / base).log_magnitude();
    const double log_new = (weights.log_vnk(c.n() + 1, c.k() + 1) / base).log_magnitude();
    out.existing_block_weights.reserve(c.block_sizes().size());
    for (auto s : c.block_sizes())
        out.existing_block_weights.push_back(std::exp(log_join + std::log(static_cast<double>(s) - alpha)));
    out.new_block_weight = std::exp(log_new);
    return out;
}

PredictiveDistribution predictive(const Composition& c, const GGParams& params, const QuadratureSpec& spec) {
    return predictive(c, GibbsWeights(params, spec));
}

}  // namespace pktilt
