#include "pktilt/tempered_stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pktilt/errors.hpp"
#include "pktilt/specfun.hpp"

namespace pktilt {

namespace {

void require_positive(double t, const char* what) {
    if (!(t > 0.0)) throw DomainError(std::string(what) + ": argument must be positive");
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

void GGParams::validate() const {
    require_alpha(alpha);
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be nonnegative");
}

double GGParams::tilt_rate() const { return gamma == 0.0 ? 0.0 : std::pow(gamma, 1.0 / alpha); }

double stable_density_series(double alpha, double delta, double t, const StableSeriesConfig& cfg) {
    require_alpha(alpha);
    require_positive(delta, "stable_density_series delta");
    require_positive(t, "stable_density_series");

    // Term xi: (1/pi) (-1)^(xi-1) sin(xi pi alpha) Gamma(xi alpha + 1) / xi!
    //          * 2^(xi alpha) delta^xi t^(-xi alpha - 1)
    const double log_t = std::log(t);
    const double log_step = alpha * std::numbers::ln2 + std::log(delta) - alpha * log_t;
    const double log_prefactor = -std::log(std::numbers::pi) - log_t;

    double sum = 0.0;
    double comp = 0.0;
    double largest = 0.0;
    double previous_envelope = INFINITY;
    for (std::int64_t xi = 1; xi <= cfg.max_terms; ++xi) {
        const double x = static_cast<double>(xi);
        const double log_envelope =
            log_prefactor + log_gamma(x * alpha + 1.0) - log_gamma(x + 1.0) + x * log_step;
        // f(t) <= 1 / (pi t), so a term beyond guard / (pi t) already dooms the sum.
        if (log_envelope > std::log(cfg.cancellation_guard) + log_prefactor) {
            throw CancellationError("stable_density_series: t = " + std::to_string(t) +
                                        " is outside the reliable region of the series",
                                    (log_envelope - log_prefactor) / std::numbers::ln10);
        }
        const double envelope = std::exp(log_envelope);
        if (xi == 1 && envelope == 0.0) return 0.0;  // underflow far in the tail
        const double s = std::sin(std::fmod(x * alpha, 2.0) * std::numbers::pi);
        const double term = ((xi % 2 == 1) ? 1.0 : -1.0) * s * envelope;

        const double next = sum + term;
        if (std::fabs(sum) >= std::fabs(term)) comp += (sum - next) + term;
        else comp += (term - next) + sum;
        sum = next;
        largest = std::max(largest, std::fabs(term));

        const double partial = std::fabs(sum + comp);
        if (envelope < previous_envelope && envelope < cfg.term_tolerance * partial) {
            const double result = sum + comp;
            if (!(result > 0.0) || largest > cfg.cancellation_guard * result) {
                throw CancellationError("stable_density_series: t = " + std::to_string(t) +
                                            " is outside the reliable region of the series",
                                        result > 0.0 ? std::log10(largest / result) : INFINITY);
            }
            return result;
        }
        previous_envelope = envelope;
    }
    throw NonConvergenceError("stable_density_series: max_terms exhausted");
}

double stable_density_half(double delta, double t) {
    require_positive(delta, "stable_density_half delta");
    require_positive(t, "stable_density_half");
    const double log_f = std::log(delta) - 0.5 * std::log(2.0 * std::numbers::pi) - 1.5 * std::log(t) -
                         delta * delta / (2.0 * t);
    return std::exp(log_f);
}

double stable_density(double alpha, double delta, double t, const StableSeriesConfig& cfg) {
    if (alpha == 0.5) return stable_density_half(delta, t);
    return stable_density_series(alpha, delta, t, cfg);
}

double tempered_density(const GGParams& params, double t, const StableSeriesConfig& cfg) {
    params.validate();
    require_positive(t, "tempered_density");
    const double tilt = std::exp(params.delta * params.gamma - 0.5 * params.tilt_rate() * t);
    return tilt * stable_density(params.alpha, params.delta, t, cfg);
}

double ig_density(double delta, double gamma, double t) {
    require_positive(delta, "ig_density delta");
    if (!(gamma >= 0.0)) throw DomainError("ig_density: gamma must be nonnegative");
    require_positive(t, "ig_density");
    const double log_f = std::log(delta) - 0.5 * std::log(2.0 * std::numbers::pi) + delta * gamma -
                         1.5 * std::log(t) - 0.5 * (delta * delta / t + gamma * gamma * t);
    return std::exp(log_f);
}

double laplace_exponent(const GGParams& params, double lambda) {
    params.validate();
    if (!(lambda >= 0.0)) throw DomainError("laplace_exponent: lambda must be nonnegative");
    if (params.gamma == 0.0) return params.delta * std::pow(2.0 * lambda, params.alpha);
    // delta gamma ((1 + 2 lambda / g)^alpha - 1), g = gamma^(1/alpha)
    const double g = params.tilt_rate();
    return params.delta * params.gamma * std::expm1(params.alpha * std::log1p(2.0 * lambda / g));
}

double laplace_exponent_derivative(const GGParams& params, double lambda) {
    params.validate();
    if (!(lambda >= 0.0)) throw DomainError("laplace_exponent_derivative: lambda must be nonnegative");
    return 2.0 * params.delta * params.alpha *
           std::pow(params.tilt_rate() + 2.0 * lambda, params.alpha - 1.0);
}

double levy_density(const GGParams& params, double s) {
    params.validate();
    require_positive(s, "levy_density");
    const double a = params.alpha;
    const double log_rho = std::log(params.delta) + a * std::numbers::ln2 + std::log(a) -
                           log_gamma(1.0 - a) - (1.0 + a) * std::log(s) - 0.5 * params.tilt_rate() * s;
    return std::exp(log_rho);
}

double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double sample_stable(double alpha, double delta, Rng& rng) {
    require_alpha(alpha);
    require_positive(delta, "sample_stable delta");
    const double u = std::numbers::pi * uniform_open(rng);
    const double w = -std::log(uniform_open(rng));
    const double log_x = std::log(std::sin(alpha * u)) - std::log(std::sin(u)) / alpha +
                         (1.0 - alpha) / alpha * (std::log(std::sin((1.0 - alpha) * u)) - std::log(w));
    const double log_scale = std::numbers::ln2 + std::log(delta) / alpha;
    return std::exp(log_x + log_scale);
}

TemperedDraw sample_tempered_counted(const GGParams& params, Rng& rng) {
    params.validate();
    const double rate = 0.5 * params.tilt_rate();
    TemperedDraw draw;
    for (;;) {
        const double t = sample_stable(params.alpha, params.delta, rng);
        ++draw.proposals;
        if (rate == 0.0 || uniform_open(rng) < std::exp(-rate * t)) {
            draw.value = t;
            return draw;
        }
    }
}

double sample_tempered(const GGParams& params, Rng& rng) { return sample_tempered_counted(params, rng).value; }

}  // namespace pktilt
