#pragma once

#include <cstdint>

#include "pktilt/log_value.hpp"

namespace pktilt {

// log Γ(x) for x > 0 (Lanczos approximation, ~1e-15 relative on Γ).
double log_gamma(double x);

// log of the rising factorial x (x+1) ... (x+m-1); requires x > 0.
double log_rising_factorial(double x, std::int64_t m);

// log C(n, k) for 0 <= k <= n.
double log_binomial(std::int64_t n, std::int64_t k);

// Upper incomplete gamma Γ(a; x) = ∫_x^∞ t^(a-1) e^(-t) dt for any real a
// and x > 0. The result is always positive.
LogValue upper_incomplete_gamma(double a, double x);

}  // namespace pktilt
