#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace gossip::detail {

/// Binary indexed tree over nonnegative integer weights with O(log n) point
/// update and weighted index selection.
class FenwickTree {
public:
    FenwickTree() = default;
    explicit FenwickTree(std::size_t n) : tree_(n + 1, 0), weights_(n, 0) {}

    std::size_t size() const noexcept { return weights_.size(); }
    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t weight(std::size_t i) const { return weights_[i]; }

    void set(std::size_t i, std::uint64_t w)
    {
        if (w == weights_[i])
            return;
        const std::uint64_t delta = w - weights_[i]; // modular arithmetic handles decreases
        weights_[i] = w;
        total_ += delta;
        for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1))
            tree_[k] += delta;
    }

    /// Smallest index i with prefix_sum(i + 1) > target; target < total().
    std::size_t find(std::uint64_t target) const
    {
        std::size_t pos = 0;
        for (std::size_t step = std::bit_floor(tree_.size()); step > 0; step >>= 1) {
            const std::size_t next = pos + step;
            if (next < tree_.size() && tree_[next] <= target) {
                pos = next;
                target -= tree_[next];
            }
        }
        return pos;
    }

private:
    std::vector<std::uint64_t> tree_;
    std::vector<std::uint64_t> weights_;
    std::uint64_t total_ = 0;
};

} // namespace gossip::detail
