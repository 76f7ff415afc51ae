#pragma once

#include <cstdint>
#include <functional>

#include "pktilt/log_value.hpp"

namespace pktilt {

struct QuadratureSpec {
    double relative_tolerance = 1e-10;
    std::int64_t max_subdivisions = std::int64_t{1} << 15;

    // Throws DomainError unless 0 < relative_tolerance < 1 and
    // max_subdivisions >= 1.
    void validate() const;
};

// Integrand returning f(x) in log scale.
using LogIntegrand = std::function<LogValue(double)>;

// ∫_lower^∞ f(x) dx for an integrand that eventually decays at least
// exponentially. The integrand is located on a geometric grid, rescaled by its
// largest sampled value, and integrated by globally adaptive 7/15-point
// Gauss-Kronrod on [lower, cut] plus the tail [cut, ∞) mapped to (0, 1] by
// x = cut - s·log(t). Throws NonConvergenceError when the tolerance is not met
// within max_subdivisions intervals.
LogValue integrate_decaying(const LogIntegrand& f, double lower, const QuadratureSpec& spec = {});

// ∫_a^b f(x) dx on a finite interval with the same adaptive rule.
LogValue integrate_finite(const LogIntegrand& f, double a, double b, const QuadratureSpec& spec = {});

}  // namespace pktilt
