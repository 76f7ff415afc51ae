#pragma once

#include <cstdint>
#include <random>

namespace pktilt {

// Random source used by every sampler. One instance per thread.
using Rng = std::mt19937_64;

// Parameters (alpha, delta, gamma) of the exponentially tilted positive
// alpha-stable law. The stable part has Laplace exponent delta * (2 lambda)^alpha
// (note the factor 2), and tilting multiplies its density by
// exp(delta*gamma - gamma^(1/alpha) t / 2). gamma = 0 is the untilted law.
struct GGParams {
    double alpha = 0.5;
    double delta = 1.0;
    double gamma = 1.0;

    // Throws DomainError unless 0 < alpha < 1, delta > 0, gamma >= 0.
    void validate() const;
    bool is_half() const { return alpha == 0.5; }
    // gamma^(1/alpha), the tilting rate times two.
    double tilt_rate() const;
};

struct StableSeriesConfig {
    double term_tolerance = 1e-12;
    std::int64_t max_terms = 2000;
    double cancellation_guard = 1e6;
};

// Positive alpha-stable density by its alternating series in t^-alpha.
// Throws CancellationError when t is too small for the series to be trusted.
double stable_density_series(double alpha, double delta, double t, const StableSeriesConfig& cfg = {});

// Closed form at alpha = 1/2: delta / sqrt(2 pi) t^(-3/2) exp(-delta^2 / (2t)).
double stable_density_half(double delta, double t);

// Stable density; routes alpha = 1/2 to the closed form.
double stable_density(double alpha, double delta, double t, const StableSeriesConfig& cfg = {});

// Tilted density exp(delta*gamma - gamma^(1/alpha) t / 2) f_{alpha,delta}(t).
double tempered_density(const GGParams& params, double t, const StableSeriesConfig& cfg = {});

// Inverse Gaussian (delta, gamma) density.
double ig_density(double delta, double gamma, double t);

// psi(lambda) = -delta*gamma + delta (gamma^(1/alpha) + 2 lambda)^alpha.
double laplace_exponent(const GGParams& params, double lambda);

// d psi / d lambda = 2 delta alpha (gamma^(1/alpha) + 2 lambda)^(alpha - 1).
double laplace_exponent_derivative(const GGParams& params, double lambda);

// Levy density delta 2^alpha alpha / Gamma(1-alpha) s^(-1-alpha) exp(-gamma^(1/alpha) s / 2).
double levy_density(const GGParams& params, double s);

// Uniform variate on the open interval (0, 1).
double uniform_open(Rng& rng);

// Positive stable variate with E exp(-lambda T) = exp(-delta (2 lambda)^alpha).
//
// Uses Kanter's form of the Chambers-Mallows-Stuck construction: with
// U ~ Uniform(0, pi) and W ~ Exp(1),
//     X = sin(alpha U) / sin(U)^(1/alpha) * (sin((1-alpha) U) / W)^((1-alpha)/alpha)
// has E exp(-lambda X) = exp(-lambda^alpha). Scaling T = 2 delta^(1/alpha) X gives
// exp(-(2 delta^(1/alpha) lambda)^alpha) = exp(-delta (2 lambda)^alpha).
double sample_stable(double alpha, double delta, Rng& rng);

struct TemperedDraw {
    double value = 0.0;
    std::int64_t proposals = 0;
};

// Rejection sampler: stable proposals accepted with probability
// exp(-gamma^(1/alpha) T / 2). Expected acceptance rate is exp(-delta*gamma).
TemperedDraw sample_tempered_counted(const GGParams& params, Rng& rng);
double sample_tempered(const GGParams& params, Rng& rng);

}  // namespace pktilt
