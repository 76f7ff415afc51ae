#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "pktilt/blocks.hpp"
#include "pktilt/errors.hpp"
#include "pktilt/oracle.hpp"
#include "pktilt/sampler.hpp"

using namespace pktilt;

namespace {

Composition sizes_of(const std::vector<std::int32_t>& labels) {
    std::vector<std::int64_t> sizes;
    for (auto l : labels) {
        if (static_cast<std::size_t>(l) > sizes.size()) sizes.resize(static_cast<std::size_t>(l), 0);
        ++sizes[static_cast<std::size_t>(l - 1)];
    }
    return Composition(sizes);
}

}  // namespace

TEST_CASE("sequential sampler reproduces the EPPF exactly") {
    for (const GGParams& p : {GGParams{0.5, 1.0, 1.0}, GGParams{0.25, 2.0, 2.0}, GGParams{0.75, 0.5, 0.0}}) {
        const GibbsWeights w(p);
        for (std::int64_t n = 1; n <= 5; ++n) {
            const auto paths = exact_path_distribution(n, w);
            std::int64_t partitions = 0;
            for_each_set_partition(n, [&](const SetPartitionEnumerator&) { ++partitions; });
            CHECK(static_cast<std::int64_t>(paths.size()) == partitions);
            double total = 0.0;
            for (const auto& path : paths) {
                const double eppf = log_eppf(sizes_of(path.block_of), w).to_linear();
                CHECK(std::fabs(path.probability - eppf) < 1e-10);
                total += path.probability;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("single observation") {
    const GibbsWeights w({0.5, 1.0, 1.0});
    Rng rng = make_stream(3, 0);
    const auto s = sample_partition(1, w, rng);
    CHECK(s.block_of == std::vector<std::int32_t>{1});
    CHECK(s.block_count() == 1);
    const McReport r = monte_carlo_blocks(1, w, 1000, 9);
    CHECK(r.tv_distance == 0.0);
    CHECK_THROWS_AS(sample_partition(0, w, rng), DomainError);
    CHECK_THROWS_AS(monte_carlo_blocks(5, w, 999, 1), DomainError);
}

TEST_CASE("n = 2: frequency of one block") {
    const GibbsWeights w({0.5, 1.0, 1.0});
    const std::int64_t reps = 100000;
    std::int64_t one = 0;
    for (std::int64_t i = 0; i < reps; ++i) {
        Rng rng = make_stream(2024, static_cast<std::uint64_t>(i));
        one += sample_block_count(2, w, rng) == 1;
    }
    const double p = log_eppf(Composition{2}, w).to_linear();
    const double se = std::sqrt(p * (1.0 - p) / reps);
    CHECK(std::fabs(static_cast<double>(one) / reps - p) < 3.0 * se);
}

TEST_CASE("n = 5: frequency of {1,2,3}{4,5}") {
    const GibbsWeights w({0.5, 1.0, 1.0});
    const std::int64_t reps = 200000;
    std::int64_t hits = 0;
    const std::vector<std::int32_t> target{1, 1, 1, 2, 2};
    for (std::int64_t i = 0; i < reps; ++i) {
        Rng rng = make_stream(77, static_cast<std::uint64_t>(i));
        hits += sample_partition(5, w, rng).block_of == target;
    }
    const double p = log_eppf(Composition{3, 2}, w).to_linear();
    const double se = std::sqrt(p * (1.0 - p) / reps);
    CHECK(std::fabs(static_cast<double>(hits) / reps - p) < 3.0 * se);
}

TEST_CASE("labels appear in order of first appearance") {
    const GibbsWeights w({0.75, 2.0, 1.0});
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = make_stream(5, i);
        const auto s = sample_partition(60, w, rng);
        std::int32_t highest = 0;
        for (auto l : s.block_of) {
            CHECK(l >= 1);
            CHECK(l <= highest + 1);
            highest = std::max(highest, l);
        }
        CHECK(highest == s.block_count());
        CHECK(s.block_sizes.n() == 60);
        CHECK(s.block_sizes.block_sizes() == sizes_of(s.block_of).block_sizes());
    }
}

TEST_CASE("Monte Carlo K_n at n = 20") {
    const GibbsWeights w({0.5, 1.0, 1.0});
    const McReport r = monte_carlo_blocks(20, w, 100000, 11);
    CHECK(r.tv_distance < 0.01);
    double e = 0.0, q = 0.0, tv = 0.0;
    for (std::size_t k = 0; k < r.empirical_pmf.size(); ++k) {
        e += r.empirical_pmf[k];
        q += r.reference_pmf[k];
        tv += std::fabs(r.empirical_pmf[k] - r.reference_pmf[k]);
    }
    CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.tv_distance == doctest::Approx(0.5 * tv));
    CHECK(r.seed == 11);
    CHECK(r.replicates == 100000);
}

TEST_CASE("reproducibility") {
    const GibbsWeights w({0.25, 1.0, 2.0});
    Rng a = make_stream(42, 7);
    Rng b = make_stream(42, 7);
    CHECK(sample_partition(100, w, a).block_of == sample_partition(100, w, b).block_of);
    Rng c = make_stream(42, 8);
    Rng d = make_stream(43, 7);
    CHECK(c() != make_stream(42, 7)());
    CHECK(d() != make_stream(42, 7)());

    const McReport one = monte_carlo_blocks(30, w, 2000, 5, 1);
    const McReport three = monte_carlo_blocks(30, w, 2000, 5, 3);
    CHECK(one.empirical_pmf == three.empirical_pmf);
    CHECK(empirical_diversity(30, w, 500, 8, 1) == empirical_diversity(30, w, 500, 8, 4));
}

TEST_CASE("empirical diversity range") {
    const GibbsWeights w({0.5, 1.0, 1.0});
    const std::int64_t n = 400;
    for (double s : empirical_diversity(n, w, 300, 1)) {
        CHECK(s > 0.0);
        CHECK(s <= std::pow(double(n), 0.5) + 1e-12);
    }
}

TEST_CASE("Kolmogorov-Smirnov distance") {
    const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_distance({0.5}, uniform) == doctest::Approx(0.5));
    CHECK(ks_distance({0.25, 0.75}, uniform) == doctest::Approx(0.25));
    // ties jump by their multiplicity
    CHECK(ks_distance({0.5, 0.5, 0.5, 0.5}, uniform) == doctest::Approx(0.5));
    CHECK(ks_distance({0.1, 0.9, 0.9}, uniform) == doctest::Approx(0.566666666666667));
    CHECK_THROWS_AS(ks_distance({}, uniform), DomainError);
}

TEST_CASE("mean of K_n / sqrt(n) at n = 2000") {
    const GGParams p{0.5, 1.0, 1.0};
    const auto s = empirical_diversity(2000, GibbsWeights(p), 10000, 17);
    double mean = 0.0;
    for (double x : s) mean += x;
    mean /= static_cast<double>(s.size());
    CHECK(std::fabs(mean / limit_mean(p) - 1.0) < 0.10);
    // the unscaled S is far off
    CHECK(std::fabs(mean / diversity_mean(p) - 1.0) > 0.3);
}
