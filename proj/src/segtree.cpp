#include "mtpattern/segtree.hpp"

#include <algorithm>

namespace mtpattern {

namespace {

int count_nodes(const SegmentTree::Node& node) {
    if (node.is_leaf()) return 1;
    return 1 + count_nodes(*node.left) + count_nodes(*node.right);
}

int count_leaves(const SegmentTree::Node& node) {
    if (node.is_leaf()) return 1;
    return count_leaves(*node.left) + count_leaves(*node.right);
}

void collect(const SegmentTree::Node& node, std::int32_t le, std::int32_t ri,
             std::vector<const DistanceMatrix*>& out) {
    if (node.begin >= ri || node.end <= le) return;
    if (le <= node.begin && node.end <= ri) {
        out.push_back(&node.matrix);
        return;
    }
    collect(*node.left, le, ri, out);
    collect(*node.right, le, ri, out);
}

}  // namespace

DistanceMatrix combine(const std::vector<const DistanceMatrix*>& parts,
                       std::int64_t* entry_ops) {
    if (parts.empty()) throw InputError("combine needs at least one part");
    const int n = parts[0]->size();
    const std::int32_t w = parts[0]->w_units();
    for (std::size_t k = 1; k < parts.size(); ++k) {
        if (parts[k]->size() != n)
            throw InvariantError("combine: sequence count mismatch between parts");
        if (parts[k]->seg_begin() != parts[k - 1]->seg_end())
            throw InvariantError("combine: parts are not contiguous");
    }

    DistanceMatrix out(n, w, parts.front()->seg_begin(), parts.back()->seg_end());
    for (int i = 0; i < n; ++i) {
        std::int64_t ones = 0;
        for (const auto* p : parts) ones += p->ones(i);
        out.set_ones(i, ones);
    }
    if (parts.size() == 1) {
        for (const auto& [k, e] : parts[0]->stored()) {
            const int i = static_cast<int>(k / static_cast<std::uint64_t>(n));
            const int j = static_cast<int>(k % static_cast<std::uint64_t>(n));
            out.set(i, j, e);
        }
        if (entry_ops) *entry_ops += static_cast<std::int64_t>(parts[0]->stored_count());
        return out;
    }

    // A combined entry exists iff the pair is finite in every part. Finite
    // pairs of the combination are a subset of any single part's finite
    // pairs, so walk the smallest part's candidates.
    std::size_t seed = 0;
    for (std::size_t k = 1; k < parts.size(); ++k)
        if (parts[k]->stored_count() < parts[seed]->stored_count()) seed = k;

    std::int64_t ops = 0;
    auto try_pair = [&](int i, int j) {
        std::int64_t sum = 0, cnt = 0;
        for (const auto* p : parts) {
            ++ops;
            const auto e = p->entry(i, j);
            if (!e) return;
            sum += e->sum;
            cnt += e->cnt;
        }
        out.set(i, j, DistanceMatrix::Entry{sum, cnt});
    };

    for (const auto& [k, e] : parts[seed]->stored()) {
        const int i = static_cast<int>(k / static_cast<std::uint64_t>(n));
        const int j = static_cast<int>(k % static_cast<std::uint64_t>(n));
        try_pair(i, j);
    }
    // Pairs empty-empty in the seed part are finite there without being
    // stored; they can still be finite (or not) elsewhere.
    std::vector<int> seed_empty;
    for (int i = 0; i < n; ++i)
        if (parts[seed]->ones(i) == 0) seed_empty.push_back(i);
    for (std::size_t a = 0; a < seed_empty.size(); ++a)
        for (std::size_t b = a + 1; b < seed_empty.size(); ++b)
            try_pair(seed_empty[a], seed_empty[b]);

    if (entry_ops) *entry_ops += ops;
    return out;
}

SegmentTree::SegmentTree(std::vector<Bis> sequences, std::int32_t w_units, int jobs)
    : sequences_(std::move(sequences)), w_units_(w_units) {
    if (sequences_.empty()) throw InputError("segment tree needs at least one sequence");
    if (w_units <= 0) throw InputError("w_units must be positive");
    length_ = static_cast<std::int32_t>(sequences_[0].bits.size());
    lambda_s_ = sequences_[0].lambda_s;
    for (const auto& b : sequences_) {
        if (static_cast<std::int32_t>(b.bits.size()) != length_)
            throw InputError("sequences disagree on BIS length");
        if (b.lambda_s != lambda_s_)
            throw InputError("sequences disagree on lambda");
    }
    n_leaves_ = (length_ + w_units_ - 1) / w_units_;
    root_ = build_node(0, n_leaves_, jobs);
}

std::unique_ptr<SegmentTree::Node> SegmentTree::build_node(std::int32_t leaf_lo,
                                                           std::int32_t leaf_hi, int jobs) {
    auto node = std::make_unique<Node>();
    node->begin = leaf_lo * w_units_;
    node->end = std::min(leaf_hi * w_units_, length_);
    if (leaf_hi - leaf_lo == 1) {
        std::vector<SegmentView> views;
        views.reserve(sequences_.size());
        for (std::size_t i = 0; i < sequences_.size(); ++i)
            views.push_back(view(static_cast<int>(i), node->begin, node->end));
        node->matrix = build_matrix(views, w_units_, jobs);
        ++stats_.leaf_builds;
        for (int i = 0; i < node->matrix.size(); ++i)
            stats_.leaf_bit_ops +=
                node->matrix.ones(i) * static_cast<std::int64_t>(node->matrix.size() - 1);
        return node;
    }
    const std::int32_t mid = leaf_lo + (leaf_hi - leaf_lo) / 2;
    node->left = build_node(leaf_lo, mid, jobs);
    node->right = build_node(mid, leaf_hi, jobs);
    node->matrix =
        combine({&node->left->matrix, &node->right->matrix}, &stats_.combine_entry_ops);
    return node;
}

int SegmentTree::node_count() const { return root_ ? count_nodes(*root_) : 0; }
int SegmentTree::leaf_count() const { return root_ ? count_leaves(*root_) : 0; }

std::int32_t SegmentTree::snap_left(std::int32_t le) const {
    if (le < 0) le = 0;
    return (le / w_units_) * w_units_;
}

std::int32_t SegmentTree::snap_right(std::int32_t ri) const {
    if (ri > length_) ri = length_;
    const std::int32_t snapped = ((ri + w_units_ - 1) / w_units_) * w_units_;
    return std::min(snapped, length_);
}

std::vector<const DistanceMatrix*> SegmentTree::query(std::int32_t le, std::int32_t ri) const {
    if (le < 0 || ri > length_ || le >= ri)
        throw InputError("query window out of range");
    if (snap_left(le) != le || snap_right(ri) != ri)
        throw InputError("query window is not aligned to leaf boundaries");
    std::vector<const DistanceMatrix*> out;
    collect(*root_, le, ri, out);
    return out;
}

DistanceMatrix SegmentTree::window_matrix(std::int32_t le, std::int32_t ri) const {
    return combine(query(snap_left(le), snap_right(ri)));
}

SegmentTree SegmentTree::from_parts(std::vector<Bis> sequences, std::int32_t w_units,
                                    std::unique_ptr<Node> root) {
    SegmentTree t;
    t.sequences_ = std::move(sequences);
    t.w_units_ = w_units;
    t.length_ = t.sequences_.empty()
                    ? 0
                    : static_cast<std::int32_t>(t.sequences_[0].bits.size());
    t.lambda_s_ = t.sequences_.empty() ? 0 : t.sequences_[0].lambda_s;
    t.n_leaves_ = w_units > 0 ? (t.length_ + w_units - 1) / w_units : 0;
    t.root_ = std::move(root);
    return t;
}

}  // namespace mtpattern
