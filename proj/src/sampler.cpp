#include "pktilt/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "pktilt/blocks.hpp"
#include "pktilt/errors.hpp"

namespace pktilt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-thread dense view over the shared memo: rows n, columns k.
class LocalGibbs {
public:
    explicit LocalGibbs(const GibbsWeights& shared) : shared_(shared) {}

    double log_vnk(std::int64_t n, std::int64_t k) {
        if (static_cast<std::size_t>(n) >= rows_.size()) rows_.resize(static_cast<std::size_t>(n) + 1);
        auto& row = rows_[static_cast<std::size_t>(n)];
        if (static_cast<std::size_t>(k) >= row.size()) row.resize(static_cast<std::size_t>(k) + 1, NAN);
        double& slot = row[static_cast<std::size_t>(k)];
        if (std::isnan(slot)) {
            const LogValue v = shared_.log_vnk(n, k);
            slot = v.is_zero() ? -INFINITY : v.log_magnitude();
        }
        return slot;
    }

private:
    const GibbsWeights& shared_;
    std::vector<std::vector<double>> rows_;
};

// Runs the prediction rule for n observations, reporting each assignment.
template <class OnAssign>
std::vector<std::int64_t> run_prediction_rule(std::int64_t n, double alpha, LocalGibbs& gibbs, Rng& rng,
                                              OnAssign&& on_assign) {
    std::vector<std::int64_t> sizes{1};
    on_assign(0);
    for (std::int64_t m = 1; m < n; ++m) {
        const auto k = static_cast<std::int64_t>(sizes.size());
        const double base = gibbs.log_vnk(m, k);
        const double join = std::exp(gibbs.log_vnk(m + 1, k) - base);
        const double fresh = std::exp(gibbs.log_vnk(m + 1, k + 1) - base);
        const double existing_total = join * (static_cast<double>(m) - static_cast<double>(k) * alpha);
        double u = uniform_open(rng) * (existing_total + fresh);
        if (u < fresh) {
            sizes.push_back(1);
            on_assign(sizes.size() - 1);
            continue;
        }
        u = (u - fresh) / join;
        std::size_t j = 0;
        for (; j + 1 < sizes.size(); ++j) {
            u -= static_cast<double>(sizes[j]) - alpha;
            if (u < 0.0) break;
        }
        ++sizes[j];
        on_assign(j);
    }
    return sizes;
}

template <class Body>
void parallel_replicates(std::int64_t replicates, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, std::max<std::int64_t>(1, replicates)));
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                body(t, threads);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

PartitionSample sample_partition(std::int64_t n, const GibbsWeights& weights, Rng& rng) {
    if (n < 1) throw DomainError("sample_partition: n must be >= 1");
    LocalGibbs gibbs(weights);
    PartitionSample out;
    out.n = n;
    out.block_of.reserve(static_cast<std::size_t>(n));
    auto sizes = run_prediction_rule(n, weights.params().alpha, gibbs, rng, [&](std::size_t j) {
        out.block_of.push_back(static_cast<std::int32_t>(j + 1));
    });
    out.block_sizes = Composition(std::move(sizes));
    return out;
}

PartitionSample sample_partition(std::int64_t n, const GGParams& params, Rng& rng) {
    return sample_partition(n, GibbsWeights(params), rng);
}

std::int64_t sample_block_count(std::int64_t n, const GibbsWeights& weights, Rng& rng) {
    if (n < 1) throw DomainError("sample_block_count: n must be >= 1");
    LocalGibbs gibbs(weights);
    return static_cast<std::int64_t>(
        run_prediction_rule(n, weights.params().alpha, gibbs, rng, [](std::size_t) {}).size());
}

std::vector<PathProbability> exact_path_distribution(std::int64_t n, const GibbsWeights& weights) {
    if (n < 1 || n > 10) throw DomainError("exact_path_distribution: n must lie in [1, 10]");
    std::vector<PathProbability> out;
    std::vector<std::int32_t> labels{1};
    std::vector<std::int64_t> sizes{1};

    auto recurse = [&](auto&& self, double probability) -> void {
        if (static_cast<std::int64_t>(labels.size()) == n) {
            out.push_back({labels, probability});
            return;
        }
        const PredictiveDistribution rule = predictive(Composition(sizes), weights);
        const std::size_t k = sizes.size();
        for (std::size_t j = 0; j <= k; ++j) {
            const bool fresh = j == k;
            const double w = fresh ? rule.new_block_weight : rule.existing_block_weights[j];
            if (fresh) sizes.push_back(1);
            else ++sizes[j];
            labels.push_back(static_cast<std::int32_t>(j + 1));
            self(self, probability * w);
            labels.pop_back();
            if (fresh) sizes.pop_back();
            else --sizes[j];
        }
    };
    recurse(recurse, 1.0);
    return out;
}

McReport monte_carlo_blocks(std::int64_t n, const GibbsWeights& weights, std::int64_t replicates,
                            std::uint64_t seed, unsigned threads) {
    if (n < 1) throw DomainError("monte_carlo_blocks: n must be >= 1");
    if (replicates < 1000) throw DomainError("monte_carlo_blocks: replicates must be >= 1000");

    std::vector<std::int64_t> counts(static_cast<std::size_t>(replicates));
    parallel_replicates(replicates, threads, [&](unsigned t, unsigned stride) {
        LocalGibbs gibbs(weights);
        for (auto i = static_cast<std::int64_t>(t); i < replicates; i += stride) {
            Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
            counts[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
                run_prediction_rule(n, weights.params().alpha, gibbs, rng, [](std::size_t) {}).size());
        }
    });

    McReport report;
    report.n = n;
    report.replicates = replicates;
    report.seed = seed;
    report.empirical_pmf.assign(static_cast<std::size_t>(n), 0.0);
    for (auto k : counts) report.empirical_pmf[static_cast<std::size_t>(k - 1)] += 1.0;
    for (auto& p : report.empirical_pmf) p /= static_cast<double>(replicates);
    report.reference_pmf = blocks_pmf(n, weights, StirlingTable(weights.params().alpha, n)).probabilities;
    double tv = 0.0;
    for (std::size_t k = 0; k < report.empirical_pmf.size(); ++k)
        tv += std::fabs(report.empirical_pmf[k] - report.reference_pmf[k]);
    report.tv_distance = 0.5 * tv;
    return report;
}

McReport monte_carlo_blocks(std::int64_t n, const GGParams& params, std::int64_t replicates, std::uint64_t seed) {
    return monte_carlo_blocks(n, GibbsWeights(params), replicates, seed);
}

std::vector<double> empirical_diversity(std::int64_t n, const GibbsWeights& weights, std::int64_t replicates,
                                        std::uint64_t seed, unsigned threads) {
    if (n < 1) throw DomainError("empirical_diversity: n must be >= 1");
    if (replicates < 1) throw DomainError("empirical_diversity: replicates must be >= 1");
    const double scale = std::pow(static_cast<double>(n), weights.params().alpha);
    std::vector<double> out(static_cast<std::size_t>(replicates));
    parallel_replicates(replicates, threads, [&](unsigned t, unsigned stride) {
        LocalGibbs gibbs(weights);
        for (auto i = static_cast<std::int64_t>(t); i < replicates; i += stride) {
            Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
            const auto k = run_prediction_rule(n, weights.params().alpha, gibbs, rng, [](std::size_t) {}).size();
            out[static_cast<std::size_t>(i)] = static_cast<double>(k) / scale;
        }
    });
    return out;
}

std::vector<double> empirical_diversity(std::int64_t n, const GGParams& params, std::int64_t replicates,
                                        std::uint64_t seed) {
    return empirical_diversity(n, GibbsWeights(params), replicates, seed);
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_distance: no samples");
    std::sort(samples.begin(), samples.end());
    const auto total = static_cast<double>(samples.size());
    double worst = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double f = cdf(samples[i]);
        worst = std::max({worst, std::fabs(f - static_cast<double>(i) / total),
                          std::fabs(static_cast<double>(j) / total - f)});
        i = j;
    }
    return worst;
}

}  // namespace pktilt
