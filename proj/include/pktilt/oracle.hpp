#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pktilt/blocks.hpp"
#include "pktilt/eppf.hpp"

namespace pktilt {

// Blocks of a set partition of [n] (1-based indices), ordered by least element.
struct SetPartition {
    std::vector<std::vector<std::int32_t>> blocks;

    Composition block_sizes() const;
};

// Restricted-growth-string enumeration of the set partitions of [n], n <= 10.
class SetPartitionEnumerator {
public:
    explicit SetPartitionEnumerator(std::int64_t n);

    // Advances to the next partition; false once all have been visited.
    // The first call yields the one-block partition.
    bool next();
    // Block label (0-based) of each element for the current partition.
    const std::vector<std::int32_t>& labels() const { return labels_; }
    SetPartition partition() const;
    Composition block_sizes() const;

private:
    std::int64_t n_;
    std::vector<std::int32_t> labels_;
    std::vector<std::int32_t> prefix_max_;
    bool started_ = false;
};

inline constexpr std::int64_t kMaxEnumeration = 10;

// Visits every set partition of [n] exactly once.
void for_each_set_partition(std::int64_t n, const std::function<void(const SetPartitionEnumerator&)>& visit);
std::vector<SetPartition> enumerate_set_partitions(std::int64_t n);

// Pr(K_n = k) by summing EPPF values over every partition of [n], n <= 8.
BlockCountPmf exact_blocks_pmf(std::int64_t n, const GibbsWeights& weights);
BlockCountPmf exact_blocks_pmf(std::int64_t n, const GGParams& params, const QuadratureSpec& spec = {});

// Closed-form EPPF of the untilted case (gamma = 0):
// α^(k-1) Γ(k) / Γ(n) Π_j (1-α)_{n_j - 1}.
LogValue log_eppf_pd(const Composition& c, double alpha);

}  // namespace pktilt
