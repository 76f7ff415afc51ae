#include <doctest.h>

#include <cmath>

#include "pktilt/errors.hpp"
#include "pktilt/quadrature.hpp"
#include "pktilt/specfun.hpp"

using namespace pktilt;

TEST_CASE("exponential moments") {
    const LogIntegrand e = [](double u) { return LogValue::from_log(-u); };
    CHECK(integrate_decaying(e, 0.0).to_linear() == doctest::Approx(1.0).epsilon(1e-12));
    const LogIntegrand ue = [](double u) { return u > 0 ? LogValue::from_log(std::log(u) - u) : LogValue::zero(); };
    CHECK(integrate_decaying(ue, 0.0).to_linear() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("complete gamma function to the requested tolerance") {
    for (double a : {0.5, 1.0, 2.5, 10.0}) {
        const LogIntegrand f = [a](double u) {
            return u > 0 ? LogValue::from_log((a - 1.0) * std::log(u) - u) : LogValue::zero();
        };
        const QuadratureSpec spec{1e-10, 1 << 15};
        const double got = integrate_decaying(f, 0.0, spec).to_linear();
        CAPTURE(a);
        CHECK(std::fabs(got - std::tgamma(a)) <= 1e-10 * std::tgamma(a));
    }
}

TEST_CASE("gamma(-1/2; 1) by quadrature matches the incomplete gamma routine") {
    const LogIntegrand f = [](double t) { return LogValue::from_log(-1.5 * std::log(t) - t); };
    const double q = integrate_decaying(f, 1.0).to_linear();
    CHECK(std::fabs(q - upper_incomplete_gamma(-0.5, 1.0).to_linear()) <= 1e-10 * q);
}

TEST_CASE("results far outside double range stay exact in log scale") {
    // ∫_0^∞ u^999 e^-u du = 999!
    const LogIntegrand f = [](double u) {
        return u > 0 ? LogValue::from_log(999.0 * std::log(u) - u) : LogValue::zero();
    };
    const LogValue v = integrate_decaying(f, 0.0);
    CHECK(v.log_magnitude() == doctest::Approx(log_gamma(1000.0)).epsilon(1e-13));
}

TEST_CASE("signed integrands") {
    // ∫_0^∞ e^-u sin u du = 1/2
    const LogIntegrand f = [](double u) { return LogValue::from_linear(std::exp(-u) * std::sin(u)); };
    CHECK(integrate_decaying(f, 0.0).to_linear() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("shifted lower limit and slow exponential decay") {
    // ∫_{-40}^∞ exp(-0.3 (x + 40)) dx = 1 / 0.3
    const LogIntegrand f = [](double x) { return LogValue::from_log(-0.3 * (x + 40.0)); };
    CHECK(integrate_decaying(f, -40.0).to_linear() == doctest::Approx(1.0 / 0.3).epsilon(1e-10));
}

TEST_CASE("finite interval") {
    const LogIntegrand f = [](double x) { return LogValue::from_linear(x * x); };
    CHECK(integrate_finite(f, 0.0, 3.0).to_linear() == doctest::Approx(9.0).epsilon(1e-13));
    CHECK(integrate_finite(f, 3.0, 0.0).to_linear() == doctest::Approx(-9.0).epsilon(1e-13));
}

TEST_CASE("errors") {
    const LogIntegrand flat = [](double) { return LogValue::from_log(0.0); };
    CHECK_THROWS_AS(integrate_decaying(flat, 0.0), NonConvergenceError);

    const LogIntegrand wiggly = [](double u) {
        return LogValue::from_linear(std::exp(-u) * (2.0 + std::sin(1e4 * u)));
    };
    CHECK_THROWS_AS(integrate_decaying(wiggly, 0.0, QuadratureSpec{1e-12, 8}), NonConvergenceError);

    const LogIntegrand e = [](double u) { return LogValue::from_log(-u); };
    CHECK_THROWS_AS(integrate_decaying(e, 0.0, QuadratureSpec{0.0, 10}), DomainError);
    CHECK_THROWS_AS(integrate_decaying(e, 0.0, QuadratureSpec{1.5, 10}), DomainError);
    CHECK_THROWS_AS(integrate_decaying(e, 0.0, QuadratureSpec{1e-8, 0}), DomainError);
}

TEST_CASE("integrand that vanishes identically") {
    const LogIntegrand z = [](double) { return LogValue::zero(); };
    CHECK(integrate_decaying(z, 0.0).is_zero());
}
