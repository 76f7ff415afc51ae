#include "pktilt/log_value.hpp"

#include <algorithm>
#include <limits>

#include "pktilt/errors.hpp"

namespace pktilt {

LogValue LogValue::from_log(double log_magnitude, Sign sign) {
    LogValue v;
    if (sign == Sign::zero || log_magnitude == -INFINITY) return v;
    if (std::isnan(log_magnitude)) throw DomainError("LogValue: NaN log magnitude");
    v.log_magnitude_ = log_magnitude;
    v.sign_ = sign;
    return v;
}

LogValue LogValue::from_linear(double x) {
    if (std::isnan(x)) throw DomainError("LogValue: NaN value");
    if (x == 0.0) return LogValue();
    return from_log(std::log(std::fabs(x)), x > 0 ? Sign::positive : Sign::negative);
}

double LogValue::to_linear() const {
    if (sign_ == Sign::zero) return 0.0;
    return static_cast<int>(sign_) * std::exp(log_magnitude_);
}

LogValue LogValue::operator-() const {
    LogValue v = *this;
    if (sign_ == Sign::positive) v.sign_ = Sign::negative;
    else if (sign_ == Sign::negative) v.sign_ = Sign::positive;
    return v;
}

LogValue& LogValue::operator+=(const LogValue& rhs) {
    if (rhs.is_zero()) return *this;
    if (is_zero()) return *this = rhs;

    const bool lhs_big = log_magnitude_ >= rhs.log_magnitude_;
    const LogValue& big = lhs_big ? *this : rhs;
    const LogValue& small = lhs_big ? rhs : *this;
    const double ratio = std::exp(small.log_magnitude_ - big.log_magnitude_);
    const Sign big_sign = big.sign_;
    const double big_log = big.log_magnitude_;

    if (big_sign == small.sign_) {
        log_magnitude_ = big_log + std::log1p(ratio);
        sign_ = big_sign;
    } else if (ratio == 1.0) {
        *this = LogValue();
    } else {
        log_magnitude_ = big_log + std::log1p(-ratio);
        sign_ = big_sign;
    }
    return *this;
}

LogValue& LogValue::operator*=(const LogValue& rhs) {
    if (is_zero() || rhs.is_zero()) return *this = LogValue();
    log_magnitude_ += rhs.log_magnitude_;
    sign_ = (sign_ == rhs.sign_) ? Sign::positive : Sign::negative;
    return *this;
}

LogValue& LogValue::operator/=(const LogValue& rhs) {
    if (rhs.is_zero()) throw DomainError("LogValue: division by zero");
    if (is_zero()) return *this;
    log_magnitude_ -= rhs.log_magnitude_;
    sign_ = (sign_ == rhs.sign_) ? Sign::positive : Sign::negative;
    return *this;
}

LogSum log_sum(std::span<const LogValue> terms) {
    double top = -INFINITY;
    for (const auto& t : terms)
        if (!t.is_zero()) top = std::max(top, t.log_magnitude());
    if (top == -INFINITY) return {};

    double sum = 0.0;
    double comp = 0.0;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        const double x = static_cast<int>(t.sign()) * std::exp(t.log_magnitude() - top);
        const double s = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) comp += (sum - s) + x;
        else comp += (x - s) + sum;
        sum = s;
    }
    sum += comp;

    LogSum out;
    if (sum == 0.0) {
        out.digits_lost = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = LogValue::from_log(top + std::log(std::fabs(sum)),
                                   sum > 0 ? Sign::positive : Sign::negative);
    out.digits_lost = std::max(0.0, -std::log10(std::fabs(sum)));
    return out;
}

double log_add_exp(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace pktilt
