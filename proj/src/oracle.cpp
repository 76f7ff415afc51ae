#include "pktilt/oracle.hpp"

#include <cmath>

#include "pktilt/errors.hpp"
#include "pktilt/specfun.hpp"

namespace pktilt {

Composition SetPartition::block_sizes() const {
    std::vector<std::int64_t> sizes;
    sizes.reserve(blocks.size());
    for (const auto& b : blocks) sizes.push_back(static_cast<std::int64_t>(b.size()));
    return Composition(std::move(sizes));
}

SetPartitionEnumerator::SetPartitionEnumerator(std::int64_t n) : n_(n) {
    if (n < 1 || n > kMaxEnumeration)
        throw DomainError("enumerate_set_partitions: n must lie in [1, 10]");
    labels_.assign(static_cast<std::size_t>(n), 0);
    prefix_max_.assign(static_cast<std::size_t>(n), 0);
}

bool SetPartitionEnumerator::next() {
    if (!started_) {
        started_ = true;
        return true;
    }
    // Increment the rightmost position that may still grow, then reset the
    // suffix to zeros. labels[i] <= 1 + max(labels[0..i-1]).
    for (auto i = static_cast<std::size_t>(n_ - 1); i >= 1; --i) {
        if (labels_[i] <= prefix_max_[i - 1]) {
            ++labels_[i];
            prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
            for (std::size_t j = i + 1; j < labels_.size(); ++j) {
                labels_[j] = 0;
                prefix_max_[j] = prefix_max_[i];
            }
            return true;
        }
    }
    return false;
}

SetPartition SetPartitionEnumerator::partition() const {
    SetPartition p;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const auto b = static_cast<std::size_t>(labels_[i]);
        if (b >= p.blocks.size()) p.blocks.resize(b + 1);
        p.blocks[b].push_back(static_cast<std::int32_t>(i + 1));
    }
    return p;
}

Composition SetPartitionEnumerator::block_sizes() const {
    std::vector<std::int64_t> sizes;
    for (auto label : labels_) {
        const auto b = static_cast<std::size_t>(label);
        if (b >= sizes.size()) sizes.resize(b + 1, 0);
        ++sizes[b];
    }
    return Composition(std::move(sizes));
}

void for_each_set_partition(std::int64_t n, const std::function<void(const SetPartitionEnumerator&)>& visit) {
    SetPartitionEnumerator e(n);
    while (e.next()) visit(e);
}

std::vector<SetPartition> enumerate_set_partitions(std::int64_t n) {
    std::vector<SetPartition> out;
    for_each_set_partition(n, [&](const SetPartitionEnumerator& e) { out.push_back(e.partition()); });
    return out;
}

BlockCountPmf exact_blocks_pmf(std::int64_t n, const GibbsWeights& weights) {
    if (n < 1 || n > 8) throw DomainError("exact_blocks_pmf: n must lie in [1, 8]");
    std::vector<std::vector<LogValue>> by_k(static_cast<std::size_t>(n));
    for_each_set_partition(n, [&](const SetPartitionEnumerator& e) {
        const Composition c = e.block_sizes();
        by_k[static_cast<std::size_t>(c.k() - 1)].push_back(log_eppf(c, weights));
    });
    BlockCountPmf pmf;
    pmf.n = n;
    for (const auto& terms : by_k) {
        const LogValue p = log_sum(terms).value;
        pmf.log_probabilities.push_back(p.is_zero() ? -INFINITY : p.log_magnitude());
        pmf.probabilities.push_back(p.to_linear());
    }
    return pmf;
}

BlockCountPmf exact_blocks_pmf(std::int64_t n, const GGParams& params, const QuadratureSpec& spec) {
    return exact_blocks_pmf(n, GibbsWeights(params, spec));
}

LogValue log_eppf_pd(const Composition& c, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("log_eppf_pd: alpha must lie in (0, 1)");
    if (c.empty()) throw DomainError("log_eppf_pd: composition must be nonempty");
    const auto k = static_cast<double>(c.k());
    double log_p = (k - 1.0) * std::log(alpha) + log_gamma(k) - log_gamma(static_cast<double>(c.n()));
    for (auto s : c.block_sizes()) log_p += log_rising_factorial(1.0 - alpha, s - 1);
    return LogValue::from_log(log_p);
}

}  // namespace pktilt
