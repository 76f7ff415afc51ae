#pragma once

#include <cmath>
#include <span>

namespace pktilt {

enum class Sign { negative = -1, zero = 0, positive = 1 };

// A real number stored as sign * exp(log_magnitude). When sign is zero the
// magnitude is meaningless and is kept at -inf.
class LogValue {
public:
    constexpr LogValue() = default;

    static LogValue zero() { return LogValue(); }
    static LogValue from_log(double log_magnitude, Sign sign = Sign::positive);
    static LogValue from_linear(double x);

    double log_magnitude() const { return log_magnitude_; }
    Sign sign() const { return sign_; }
    bool is_zero() const { return sign_ == Sign::zero; }
    bool is_positive() const { return sign_ == Sign::positive; }
    double to_linear() const;

    LogValue operator-() const;
    LogValue& operator+=(const LogValue& rhs);
    LogValue& operator-=(const LogValue& rhs) { return *this += -rhs; }
    LogValue& operator*=(const LogValue& rhs);
    LogValue& operator/=(const LogValue& rhs);

    friend LogValue operator+(LogValue a, const LogValue& b) { return a += b; }
    friend LogValue operator-(LogValue a, const LogValue& b) { return a -= b; }
    friend LogValue operator*(LogValue a, const LogValue& b) { return a *= b; }
    friend LogValue operator/(LogValue a, const LogValue& b) { return a /= b; }

private:
    double log_magnitude_ = -INFINITY;
    Sign sign_ = Sign::zero;
};

// Signed sum of many log-scale terms, factored by the largest magnitude and
// accumulated with Neumaier compensation.
struct LogSum {
    LogValue value;
    // log10(largest |term| / |sum|); +inf when the sum cancels to zero.
    double digits_lost = 0.0;
};

LogSum log_sum(std::span<const LogValue> terms);

// log(exp(a) + exp(b)) for finite or -inf arguments.
double log_add_exp(double a, double b);

}  // namespace pktilt
