#include "pktilt/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "pktilt/errors.hpp"

namespace pktilt {

void QuadratureSpec::validate() const {
    if (!(relative_tolerance > 0.0 && relative_tolerance < 1.0))
        throw DomainError("QuadratureSpec: relative_tolerance must lie in (0, 1)");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
}

namespace {

// 15-point Kronrod nodes on [0, 1) (symmetric) and weights; Gauss 7-point
// weights sit on the odd Kronrod nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kNegligible = 46.0;   // e^-46 ~ 1e-20 relative to the peak
constexpr double kRescaleLimit = 600.0;

struct RescaleNeeded {
    double new_scale;
};

enum class Map { identity, tail };

struct Piece {
    double a = 0.0;
    double b = 0.0;
    Map map = Map::identity;
    double result = 0.0;
    double error = 0.0;
};

struct ByError {
    bool operator()(const Piece& x, const Piece& y) const { return x.error < y.error; }
};

class Engine {
public:
    Engine(const LogIntegrand& f, double scale, double cut, double tail_step)
        : f_(f), scale_(scale), cut_(cut), tail_step_(tail_step) {}

    double eval(double x) const {
        const LogValue v = f_(x);
        if (v.is_zero()) return 0.0;
        const double shifted = v.log_magnitude() - scale_;
        if (std::isnan(shifted)) throw NonConvergenceError("quadrature: integrand returned NaN");
        if (shifted > kRescaleLimit) throw RescaleNeeded{v.log_magnitude()};
        return static_cast<int>(v.sign()) * std::exp(shifted);
    }

    double eval_mapped(Map map, double u) const {
        if (map == Map::identity) return eval(u);
        // x = cut - s log t, dx = s / t dt
        if (u <= 0.0) return 0.0;
        const double x = cut_ - tail_step_ * std::log(u);
        return eval(x) * tail_step_ / u;
    }

    void apply_rule(Piece& p) const {
        const double center = 0.5 * (p.a + p.b);
        const double half = 0.5 * (p.b - p.a);
        const double fc = eval_mapped(p.map, center);
        double kronrod = fc * kKronrod[7];
        double gauss = fc * kGauss[3];
        for (int i = 0; i < 7; ++i) {
            const double dx = half * kNodes[i];
            const double sum = eval_mapped(p.map, center - dx) + eval_mapped(p.map, center + dx);
            kronrod += kKronrod[i] * sum;
            if (i % 2 == 1) gauss += kGauss[i / 2] * sum;
        }
        p.result = kronrod * half;
        p.error = std::fabs((kronrod - gauss) * half);
    }

private:
    const LogIntegrand& f_;
    double scale_;
    double cut_;
    double tail_step_;
};

// Returns the integral relative to exp(scale).
double adaptive(const Engine& engine, std::vector<Piece> pieces, const QuadratureSpec& spec) {
    std::priority_queue<Piece, std::vector<Piece>, ByError> queue(ByError{}, {});
    double total = 0.0;
    double total_error = 0.0;
    for (auto& p : pieces) {
        engine.apply_rule(p);
        total += p.result;
        total_error += p.error;
        queue.push(p);
    }
    auto count = static_cast<std::int64_t>(pieces.size());

    auto converged = [&] { return total_error <= spec.relative_tolerance * std::fabs(total); };

    while (!converged()) {
        if (total == 0.0 && total_error == 0.0) return 0.0;
        if (count >= spec.max_subdivisions) {
            throw NonConvergenceError("integrate_decaying: tolerance " +
                                      std::to_string(spec.relative_tolerance) + " unmet after " +
                                      std::to_string(count) + " subdivisions");
        }
        Piece worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NonConvergenceError("integrate_decaying: interval exhausted machine precision");
        }
        Piece left{worst.a, mid, worst.map};
        Piece right{mid, worst.b, worst.map};
        engine.apply_rule(left);
        engine.apply_rule(right);
        total += left.result + right.result - worst.result;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++count;

        if (converged()) {
            // Re-sum from scratch to shed drift in the running totals.
            auto copy = queue;
            total = 0.0;
            total_error = 0.0;
            while (!copy.empty()) {
                total += copy.top().result;
                total_error += copy.top().error;
                copy.pop();
            }
        }
    }
    return total;
}

double log_or_neg_inf(const LogValue& v) { return v.is_zero() ? -INFINITY : v.log_magnitude(); }

LogValue finish(double relative, double scale) {
    if (relative == 0.0) return LogValue::zero();
    return LogValue::from_log(scale + std::log(std::fabs(relative)),
                              relative > 0 ? Sign::positive : Sign::negative);
}

}  // namespace

LogValue integrate_decaying(const LogIntegrand& f, double lower, const QuadratureSpec& spec) {
    spec.validate();

    // Geometric scan lower + 2^j * 1e-9 to locate the bulk of the integrand.
    std::vector<double> xs;
    std::vector<double> logs;
    double scale = -INFINITY;
    std::size_t peak = 0;
    for (int j = 0; j <= 62; ++j) {
        const double x = lower + std::ldexp(1e-9, j);
        const double lv = log_or_neg_inf(f(x));
        if (std::isnan(lv)) throw NonConvergenceError("integrate_decaying: integrand returned NaN");
        xs.push_back(x);
        logs.push_back(lv);
        if (lv > scale) {
            scale = lv;
            peak = xs.size() - 1;
        }
    }
    if (scale == -INFINITY) return LogValue::zero();

    std::size_t cut_index = xs.size();
    for (std::size_t j = peak + 1; j + 1 < xs.size(); ++j) {
        if (logs[j] < scale - kNegligible && logs[j + 1] < scale - kNegligible) {
            cut_index = j;
            break;
        }
    }
    if (cut_index == xs.size())
        throw NonConvergenceError("integrate_decaying: integrand does not decay on the scanned range");

    std::size_t first = 0;
    while (first < peak && logs[first] < scale - kNegligible) ++first;

    const double cut = xs[cut_index];
    const double probe = 1e-3 * std::max(1.0, std::fabs(cut));
    const double rate = (logs[cut_index] - log_or_neg_inf(f(cut + probe))) / probe;
    const double tail_step = (std::isfinite(rate) && rate > 1e-12) ? 1.0 / rate : 1.0;

    std::vector<Piece> pieces;
    double left = lower;
    for (std::size_t j = first; j <= cut_index; ++j) {
        pieces.push_back({left, xs[j], Map::identity});
        left = xs[j];
    }
    pieces.push_back({0.0, 1.0, Map::tail});

    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            Engine engine(f, scale, cut, tail_step);
            return finish(adaptive(engine, pieces, spec), scale);
        } catch (const RescaleNeeded& r) {
            scale = r.new_scale;
        }
    }
    throw NonConvergenceError("integrate_decaying: integrand scale unstable");
}

LogValue integrate_finite(const LogIntegrand& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(b > a)) {
        if (a == b) return LogValue::zero();
        return -integrate_finite(f, b, a, spec);
    }
    constexpr int samples = 64;
    std::vector<Piece> pieces;
    double scale = -INFINITY;
    for (int i = 0; i < samples; ++i) {
        const double x = a + (b - a) * (i + 0.5) / samples;
        scale = std::max(scale, log_or_neg_inf(f(x)));
        pieces.push_back({a + (b - a) * i / samples, a + (b - a) * (i + 1) / samples, Map::identity});
    }
    if (scale == -INFINITY) scale = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            Engine engine(f, scale, b, 1.0);
            return finish(adaptive(engine, pieces, spec), scale);
        } catch (const RescaleNeeded& r) {
            scale = r.new_scale;
        }
    }
    throw NonConvergenceError("integrate_finite: integrand scale unstable");
}

}  // namespace pktilt
