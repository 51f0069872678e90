#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mtpattern/preprocess.hpp"

namespace mtpattern {

// A window of [begin, end) unit intervals over a full-day bit row. Reads
// may extend up to w_units-1 past either bound: inside the day they see
// the row's real bits, past the day edges they see zeros. This is the
// eBIS view; the extension is what keeps boundary matches intact when the
// day is segmented.
struct SegmentView {
    const std::uint8_t* row = nullptr;
    std::int32_t day_length = 0;  // L, unit intervals
    std::int32_t begin = 0;
    std::int32_t end = 0;

    SegmentView() = default;
    SegmentView(const Bis& bis, std::int32_t b, std::int32_t e)
        : row(bis.bits.data()), day_length(static_cast<std::int32_t>(bis.bits.size())),
          begin(b), end(e) {}
    SegmentView(const std::uint8_t* bits, std::int32_t length, std::int32_t b, std::int32_t e)
        : row(bits), day_length(length), begin(b), end(e) {}

    static SegmentView full_day(const Bis& bis) {
        return SegmentView(bis, 0, static_cast<std::int32_t>(bis.bits.size()));
    }

    std::int32_t length() const { return end - begin; }
    // Extended read at an absolute unit index.
    std::uint8_t extended(std::int32_t p) const {
        return (p >= 0 && p < day_length) ? row[p] : 0;
    }
};

// Distance from the 1-bit at absolute index i to the nearest 1-bit of
// `other`, searching outward up to w_units-1 through the extended view.
// nullopt means no match within the window (infinite).
std::optional<std::int32_t> min_itdist(const SegmentView& other, std::int32_t i,
                                       std::int32_t w_units);

// Accumulated nearest-match distances from every 1-bit of `a` into `b`.
struct PartialDistance {
    bool finite = true;
    std::int64_t sum = 0;  // unit-interval counts; meaningful only when finite
    std::int64_t cnt = 0;  // number of 1-bits in a's segment
};

PartialDistance partial_distance(const SegmentView& a, const SegmentView& b,
                                 std::int32_t w_units);

// TDist value as an exact sum/count pair: value = sum / cnt. This is the
// representation the segment tree recombines without rounding.
struct TdistValue {
    bool finite = false;
    std::int64_t sum = 0;
    std::int64_t cnt = 0;  // cnt_a + cnt_b

    double value() const {
        return cnt == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(cnt);
    }
};

// Symmetric bounded dissimilarity: (d(a,b) + d(b,a)) / (cnt_a + cnt_b).
// Infinite when either partial sum is; 0 when both segments are empty.
TdistValue tdist(const SegmentView& a, const SegmentView& b, std::int32_t w_units);

// Symmetric sparse matrix of TDist values for one segment. Entries are
// stored as exact (sum, cnt) pairs for i < j; a missing entry means the
// distance is infinite, except that a pair whose segments both hold zero
// 1-bits is implicitly (0, 0) and never stored. The diagonal is always 0.
class DistanceMatrix {
public:
    struct Entry {
        std::int64_t sum = 0;
        std::int64_t cnt = 0;
    };

    DistanceMatrix() = default;
    DistanceMatrix(int n, std::int32_t w_units, std::int32_t seg_begin, std::int32_t seg_end)
        : n_(n), w_units_(w_units), begin_(seg_begin), end_(seg_end), ones_(n, 0) {}

    int size() const { return n_; }
    std::int32_t w_units() const { return w_units_; }
    std::int32_t seg_begin() const { return begin_; }
    std::int32_t seg_end() const { return end_; }

    std::int64_t ones(int i) const { return ones_[i]; }
    void set_ones(int i, std::int64_t v) { ones_[i] = v; }
    const std::vector<std::int64_t>& ones() const { return ones_; }

    bool finite(int i, int j) const;
    // Exact entry; diagonal and empty-empty pairs are synthesized. nullopt
    // when infinite.
    std::optional<Entry> entry(int i, int j) const;
    std::optional<double> value(int i, int j) const;

    void set(int i, int j, Entry e);

    // Stored off-diagonal entries, keyed by i * n + j with i < j.
    const std::unordered_map<std::uint64_t, Entry>& stored() const { return entries_; }
    std::size_t stored_count() const { return entries_.size(); }

    void reserve(std::size_t m) { entries_.reserve(m); }

private:
    std::uint64_t key(int i, int j) const {
        return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n_) +
               static_cast<std::uint64_t>(j);
    }

    int n_ = 0;
    std::int32_t w_units_ = 0;
    std::int32_t begin_ = 0;
    std::int32_t end_ = 0;
    std::vector<std::int64_t> ones_;
    std::unordered_map<std::uint64_t, Entry> entries_;
};

// Pairwise TDist over segments sharing one window; finite entries stored.
DistanceMatrix build_matrix(const std::vector<SegmentView>& segments, std::int32_t w_units,
                            int jobs = 1);

// Restriction of a matrix to a subset of its sequences, reindexed in the
// given order.
DistanceMatrix submatrix(const DistanceMatrix& m, const std::vector<int>& indices);

// Baseline distances for the distance-measure comparison.
double euclidean(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
std::int64_t dtw(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace mtpattern
