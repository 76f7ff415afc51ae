#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pktilt/eppf.hpp"
#include "pktilt/tempered_stable.hpp"

namespace pktilt {

// A partition of [n] as block labels 1..K in order of first appearance.
struct PartitionSample {
    std::int64_t n = 0;
    std::vector<std::int32_t> block_of;
    Composition block_sizes;

    std::int64_t block_count() const { return block_sizes.k(); }
};

struct McReport {
    std::int64_t n = 0;
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
    std::vector<double> empirical_pmf;
    std::vector<double> reference_pmf;
    double tv_distance = 0.0;
};

// Independent random stream for replicate `index` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

// Sequential prediction-rule sampler: observation 1 opens block 1, and each
// later observation joins an existing block or opens a new one with the
// predictive weights of the current composition.
PartitionSample sample_partition(std::int64_t n, const GibbsWeights& weights, Rng& rng);
PartitionSample sample_partition(std::int64_t n, const GGParams& params, Rng& rng);

// Block count K_n only; same draws as sample_partition for the same stream.
std::int64_t sample_block_count(std::int64_t n, const GibbsWeights& weights, Rng& rng);

// Exact law of the sequential sampler over set partitions of [n], found by
// multiplying predictive weights along every path. Entries are in
// restricted-growth order.
struct PathProbability {
    std::vector<std::int32_t> block_of;
    double probability = 0.0;
};
std::vector<PathProbability> exact_path_distribution(std::int64_t n, const GibbsWeights& weights);

// Empirical K_n pmf from `replicates` sampler runs against blocks_pmf.
// Deterministic in (n, params, replicates, seed); `threads` only changes speed.
McReport monte_carlo_blocks(std::int64_t n, const GibbsWeights& weights, std::int64_t replicates,
                            std::uint64_t seed, unsigned threads = 0);
McReport monte_carlo_blocks(std::int64_t n, const GGParams& params, std::int64_t replicates, std::uint64_t seed);

// Replicate values of K_n / n^α.
std::vector<double> empirical_diversity(std::int64_t n, const GibbsWeights& weights, std::int64_t replicates,
                                        std::uint64_t seed, unsigned threads = 0);
std::vector<double> empirical_diversity(std::int64_t n, const GGParams& params, std::int64_t replicates,
                                        std::uint64_t seed);

// Kolmogorov-Smirnov distance sup |F_emp - F| for possibly tied samples.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace pktilt
