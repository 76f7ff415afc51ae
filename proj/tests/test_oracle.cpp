#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "pktilt/errors.hpp"
#include "pktilt/oracle.hpp"

using namespace pktilt;

namespace {

// Bell numbers from the Bell triangle.
std::vector<std::int64_t> bell_numbers(int count) {
    std::vector<std::int64_t> out;
    std::vector<std::int64_t> row{1};
    for (int i = 0; i < count; ++i) {
        std::vector<std::int64_t> next{row.back()};
        for (auto x : row) next.push_back(next.back() + x);
        row = next;
        out.push_back(row.front());
    }
    return out;
}

}  // namespace

TEST_CASE("enumeration visits Bell(n) distinct partitions") {
    const auto bell = bell_numbers(10);
    CHECK(bell[0] == 1);
    CHECK(bell[9] == 115975);
    for (std::int64_t n = 1; n <= 10; ++n) {
        std::int64_t count = 0;
        std::set<std::vector<std::int32_t>> seen;
        for_each_set_partition(n, [&](const SetPartitionEnumerator& e) {
            ++count;
            if (n <= 7) seen.insert(e.labels());
            CHECK(e.block_sizes().n() == n);
        });
        CHECK(count == bell[n - 1]);
        if (n <= 7) CHECK(static_cast<std::int64_t>(seen.size()) == count);
    }
}

TEST_CASE("partitions are in canonical form") {
    const auto parts = enumerate_set_partitions(4);
    CHECK(parts.size() == 15);
    CHECK(parts.front().blocks.size() == 1);
    for (const auto& p : parts) {
        std::int32_t previous_least = 0;
        std::int64_t total = 0;
        for (const auto& b : p.blocks) {
            CHECK(b.front() > previous_least);
            previous_least = b.front();
            for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i] > b[i - 1]);
            total += static_cast<std::int64_t>(b.size());
        }
        CHECK(total == 4);
    }
}

TEST_CASE("block-size multiset counts") {
    // number of partitions of [n] with a given size multiset: n! / (Π n_j! Π m_i!)
    std::map<std::vector<std::int64_t>, int> counts;
    for_each_set_partition(6, [&](const SetPartitionEnumerator& e) {
        auto sizes = e.block_sizes().block_sizes();
        std::sort(sizes.begin(), sizes.end());
        ++counts[sizes];
    });
    CHECK(counts[{6}] == 1);
    CHECK(counts[{1, 5}] == 6);
    CHECK(counts[{2, 4}] == 15);
    CHECK(counts[{3, 3}] == 10);
    CHECK(counts[{2, 2, 2}] == 15);
    CHECK(counts[{1, 1, 1, 1, 1, 1}] == 1);
    CHECK(counts[{1, 1, 2, 2}] == 45);
    CHECK(counts.size() == 11);
}

TEST_CASE("enumeration bounds") {
    CHECK_THROWS_AS(SetPartitionEnumerator(0), DomainError);
    CHECK_THROWS_AS(SetPartitionEnumerator(kMaxEnumeration + 1), DomainError);
    CHECK_THROWS_AS(exact_blocks_pmf(9, GGParams{}), DomainError);
}

TEST_CASE("exact blocks pmf") {
    const auto one = exact_blocks_pmf(1, GGParams{});
    CHECK(one.probabilities.size() == 1);
    CHECK(one.probabilities[0] == doctest::Approx(1.0).epsilon(1e-13));
    for (std::int64_t n = 1; n <= 8; ++n) CHECK(exact_blocks_pmf(n, GGParams{0.25, 2.0, 1.0}).total() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("PD closed-form EPPF") {
    CHECK(log_eppf_pd(Composition{1}, 0.3).log_magnitude() == doctest::Approx(0.0));
    // p(2) = 1 - α, p(1,1) = α for PD(α, 0)
    CHECK(log_eppf_pd(Composition{2}, 0.3).to_linear() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(log_eppf_pd(Composition{1, 1}, 0.3).to_linear() == doctest::Approx(0.3).epsilon(1e-14));
    const GGParams p{0.3, 1.0, 0.0};
    for (const auto& c : {Composition{3, 2}, Composition{1, 1, 4}, Composition{2, 2, 2, 1}})
        CHECK(log_eppf_pd(c, 0.3).log_magnitude() == doctest::Approx(log_eppf(c, p).log_magnitude()).epsilon(1e-10));
}
