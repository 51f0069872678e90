#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mtpattern/tdist.hpp"

namespace mtpattern {

// Binary tree over the day's unit-interval axis. Leaves are w_units wide
// (the last one may be shorter); every node carries the distance matrix of
// its segment. Parent matrices are combined from children, never rebuilt.
class SegmentTree {
public:
    struct Node {
        std::int32_t begin = 0;
        std::int32_t end = 0;
        DistanceMatrix matrix;
        std::unique_ptr<Node> left;
        std::unique_ptr<Node> right;

        bool is_leaf() const { return !left; }
    };

    struct BuildStats {
        std::int64_t leaf_builds = 0;
        std::int64_t leaf_bit_ops = 0;      // 1-bits scanned during leaf tdist
        std::int64_t combine_entry_ops = 0; // entry merges during combines
    };

    SegmentTree() = default;
    SegmentTree(std::vector<Bis> sequences, std::int32_t w_units, int jobs = 1);

    const Node& root() const { return *root_; }
    bool empty() const { return !root_; }

    int sequence_count() const { return static_cast<int>(sequences_.size()); }
    std::int32_t length() const { return length_; }
    std::int32_t w_units() const { return w_units_; }
    std::int32_t lambda_s() const { return lambda_s_; }
    const std::vector<Bis>& sequences() const { return sequences_; }
    const BuildStats& build_stats() const { return stats_; }

    int node_count() const;
    int leaf_count() const;

    // Maximal disjoint node matrices exactly tiling [le, ri); O(log L) of
    // them. Bounds must be aligned to leaf boundaries.
    std::vector<const DistanceMatrix*> query(std::int32_t le, std::int32_t ri) const;

    // Snap outward to leaf boundaries.
    std::int32_t snap_left(std::int32_t le) const;
    std::int32_t snap_right(std::int32_t ri) const;

    // combine(query(le, ri)); equal to a direct build over the window.
    DistanceMatrix window_matrix(std::int32_t le, std::int32_t ri) const;

    // Used by persistence to reassemble a tree without recomputation.
    static SegmentTree from_parts(std::vector<Bis> sequences, std::int32_t w_units,
                                  std::unique_ptr<Node> root);

private:
    std::unique_ptr<Node> build_node(std::int32_t leaf_lo, std::int32_t leaf_hi, int jobs);
    SegmentView view(int i, std::int32_t b, std::int32_t e) const {
        return SegmentView(sequences_[i], b, e);
    }

    std::vector<Bis> sequences_;
    std::int32_t length_ = 0;
    std::int32_t w_units_ = 0;
    std::int32_t lambda_s_ = 0;
    std::int32_t n_leaves_ = 0;
    std::unique_ptr<Node> root_;
    BuildStats stats_;
};

// Exact Eq-style recombination of contiguous parts: sums and pair counts
// add; any infinite part makes the combined entry infinite.
DistanceMatrix combine(const std::vector<const DistanceMatrix*>& parts,
                       std::int64_t* entry_ops = nullptr);

}  // namespace mtpattern
