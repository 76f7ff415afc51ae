#include "pktilt/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pktilt/errors.hpp"
#include "pktilt/specfun.hpp"

namespace pktilt {

StirlingTable::StirlingTable(double alpha, std::int64_t n_max) : alpha_(alpha), n_max_(n_max) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("StirlingTable: alpha must lie in (0, 1)");
    if (n_max < 1) throw DomainError("StirlingTable: n_max must be >= 1");
    log_entries_.assign(static_cast<std::size_t>(n_max * (n_max + 1) / 2), -INFINITY);
    log_entries_[index(1, 1)] = 0.0;
    for (std::int64_t n = 1; n < n_max; ++n) {
        for (std::int64_t k = 1; k <= n + 1; ++k) {
            double acc = -INFINITY;
            if (k >= 2) acc = log_entries_[index(n, k - 1)];
            if (k <= n) {
                const double factor = static_cast<double>(n) - static_cast<double>(k) * alpha;
                acc = log_add_exp(acc, std::log(factor) + log_entries_[index(n, k)]);
            }
            log_entries_[index(n + 1, k)] = acc;
        }
    }
}

std::size_t StirlingTable::index(std::int64_t n, std::int64_t k) const {
    return static_cast<std::size_t>((n - 1) * n / 2 + (k - 1));
}

LogValue StirlingTable::log_value(std::int64_t n, std::int64_t k) const {
    if (n < 1 || n > n_max_) throw DomainError("StirlingTable: n out of range");
    if (k < 1 || k > n) return LogValue::zero();
    return LogValue::from_log(log_entries_[index(n, k)]);
}

StirlingTable stirling_table(double alpha, std::int64_t n_max) { return StirlingTable(alpha, n_max); }

double stirling_explicit(double alpha, std::int64_t n, std::int64_t k) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stirling_explicit: alpha must lie in (0, 1)");
    if (n < 1 || k < 1 || k > n) throw DomainError("stirling_explicit: requires 1 <= k <= n");

    using Wide = long double;
    const Wide a = alpha;
    Wide sum = 0.0L;
    Wide largest = 0.0L;
    Wide binom = 1.0L;
    for (std::int64_t j = 1; j <= k; ++j) {
        binom = binom * static_cast<Wide>(k - j + 1) / static_cast<Wide>(j);
        Wide rising = 1.0L;
        const Wide x = -static_cast<Wide>(j) * a;
        for (std::int64_t i = 0; i < n; ++i) rising *= x + static_cast<Wide>(i);
        const Wide term = ((j % 2 == 0) ? 1.0L : -1.0L) * binom * rising;
        sum += term;
        largest = std::max(largest, std::fabs(term));
    }
    const int digits = std::numeric_limits<Wide>::digits10;
    const double lost = sum == 0.0L ? INFINITY : static_cast<double>(std::log10(largest / std::fabs(sum)));
    if (!(digits - lost >= 6.0)) {
        throw CancellationError("stirling_explicit: alternating sum keeps fewer than 6 digits at n = " +
                                    std::to_string(n),
                                lost);
    }
    Wide denom = 1.0L;
    for (std::int64_t j = 1; j <= k; ++j) denom *= a * static_cast<Wide>(j);
    return static_cast<double>(sum / denom);
}

double log_bell_polynomial_half(std::int64_t n, std::int64_t k) {
    if (n < 1 || k < 1 || k > n) throw DomainError("bell_polynomial_half: requires 1 <= k <= n");
    return log_binomial(2 * n - k - 1, n - 1) + log_gamma(static_cast<double>(n)) -
           log_gamma(static_cast<double>(k)) + 2.0 * static_cast<double>(k - n) * std::numbers::ln2;
}

double bell_polynomial_half(std::int64_t n, std::int64_t k) { return std::exp(log_bell_polynomial_half(n, k)); }

double BlockCountPmf::total() const {
    double sum = 0.0;
    for (double p : probabilities) sum += p;
    return sum;
}

BlockCountPmf blocks_pmf(std::int64_t n, const GibbsWeights& weights, const StirlingTable& table) {
    if (n < 1) throw DomainError("blocks_pmf: n must be >= 1");
    if (table.n_max() < n) throw DomainError("blocks_pmf: Stirling table too small");
    BlockCountPmf pmf;
    pmf.n = n;
    for (std::int64_t k = 1; k <= n; ++k) {
        const LogValue p = weights.log_vnk(n, k) * table.log_value(n, k);
        pmf.log_probabilities.push_back(p.log_magnitude());
        pmf.probabilities.push_back(p.to_linear());
    }
    return pmf;
}

BlockCountPmf blocks_pmf(std::int64_t n, const GGParams& params, const QuadratureSpec& spec) {
    if (n < 1) throw DomainError("blocks_pmf: n must be >= 1");
    return blocks_pmf(n, GibbsWeights(params, spec), StirlingTable(params.alpha, n));
}

LogValue log_diversity_density(const GGParams& params, double s, const StableSeriesConfig& cfg) {
    params.validate();
    if (!(s > 0.0)) throw DomainError("diversity_density: s must be positive");
    const double a = params.alpha;
    const double log_s = std::log(s);
    const double t = std::exp(-log_s / a);
    const double tilt = params.delta * params.gamma -
                        (params.gamma > 0.0 ? 0.5 * std::exp((std::log(params.gamma) - log_s) / a) : 0.0);
    const double log_jacobian = -std::log(a) - (1.0 / a + 1.0) * log_s;
    if (!std::isfinite(t) || t == 0.0 || tilt == -INFINITY) return LogValue::zero();
    if (params.is_half()) {
        // log f_{1/2,δ}(t) without leaving log scale.
        const double log_f = std::log(params.delta) - 0.5 * std::log(2.0 * std::numbers::pi) -
                             1.5 * std::log(t) - params.delta * params.delta / (2.0 * t);
        return LogValue::from_log(tilt + log_f + log_jacobian);
    }
    const double f = stable_density_series(a, params.delta, t, cfg);
    return LogValue::from_log(tilt + std::log(f) + log_jacobian);
}

double diversity_density(const GGParams& params, double s, const StableSeriesConfig& cfg) {
    return log_diversity_density(params, s, cfg).to_linear();
}

double diversity_density_half(double delta, double s) {
    if (!(delta > 0.0)) throw DomainError("diversity_density_half: delta must be positive");
    if (!(s > 0.0)) throw DomainError("diversity_density_half: s must be positive");
    return std::sqrt(2.0 / std::numbers::pi) * delta *
           std::exp(delta - 0.5 * (delta * delta * s * s + 1.0 / (s * s)));
}

double diversity_cdf(const GGParams& params, double s, const QuadratureSpec& spec) {
    if (!(s > 0.0)) return 0.0;
    const LogIntegrand f = [&](double x) { return log_diversity_density(params, x); };
    return 1.0 - integrate_decaying(f, s, spec).to_linear();
}

double diversity_mean(const GGParams& params, const QuadratureSpec& spec) {
    const LogIntegrand f = [&](double x) {
        if (!(x > 0.0)) return LogValue::zero();
        return log_diversity_density(params, x) * LogValue::from_log(std::log(x));
    };
    return integrate_decaying(f, 0.0, spec).to_linear();
}

double limit_scale(const GGParams& params) {
    params.validate();
    return params.delta * std::exp2(params.alpha);
}

double limit_density(const GGParams& params, double x, const StableSeriesConfig& cfg) {
    const double c = limit_scale(params);
    if (!(x > 0.0)) throw DomainError("limit_density: x must be positive");
    return diversity_density(params, x / c, cfg) / c;
}

double limit_cdf(const GGParams& params, double x, const QuadratureSpec& spec) {
    return diversity_cdf(params, x / limit_scale(params), spec);
}

double limit_mean(const GGParams& params, const QuadratureSpec& spec) {
    return limit_scale(params) * diversity_mean(params, spec);
}

}  // namespace pktilt
