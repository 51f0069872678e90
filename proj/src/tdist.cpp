#include "mtpattern/tdist.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

namespace mtpattern {

std::optional<std::int32_t> min_itdist(const SegmentView& other, std::int32_t i,
                                       std::int32_t w_units) {
    for (std::int32_t d = 0; d < w_units; ++d) {
        if (other.extended(i + d) || other.extended(i - d)) return d;
    }
    return std::nullopt;
}

PartialDistance partial_distance(const SegmentView& a, const SegmentView& b,
                                 std::int32_t w_units) {
    PartialDistance pd;
    for (std::int32_t i = a.begin; i < a.end; ++i) {
        if (!a.row[i]) continue;
        ++pd.cnt;
        const auto d = min_itdist(b, i, w_units);
        if (!d) {
            pd.finite = false;
            pd.sum = 0;
            return pd;
        }
        pd.sum += *d;
    }
    return pd;
}

TdistValue tdist(const SegmentView& a, const SegmentView& b, std::int32_t w_units) {
    if (a.length() != b.length())
        throw InvariantError("tdist requires equal-length segments");
    const PartialDistance ab = partial_distance(a, b, w_units);
    if (!ab.finite) return TdistValue{false, 0, 0};
    const PartialDistance ba = partial_distance(b, a, w_units);
    if (!ba.finite) return TdistValue{false, 0, 0};
    return TdistValue{true, ab.sum + ba.sum, ab.cnt + ba.cnt};
}

bool DistanceMatrix::finite(int i, int j) const {
    if (i == j) return true;
    if (i > j) std::swap(i, j);
    if (entries_.count(key(i, j))) return true;
    return ones_[i] == 0 && ones_[j] == 0;
}

std::optional<DistanceMatrix::Entry> DistanceMatrix::entry(int i, int j) const {
    if (i == j) return Entry{0, 2 * ones_[i]};
    if (i > j) std::swap(i, j);
    const auto it = entries_.find(key(i, j));
    if (it != entries_.end()) return it->second;
    if (ones_[i] == 0 && ones_[j] == 0) return Entry{0, 0};
    return std::nullopt;
}

std::optional<double> DistanceMatrix::value(int i, int j) const {
    const auto e = entry(i, j);
    if (!e) return std::nullopt;
    return e->cnt == 0 ? 0.0 : static_cast<double>(e->sum) / static_cast<double>(e->cnt);
}

void DistanceMatrix::set(int i, int j, Entry e) {
    if (i == j) return;
    if (i > j) std::swap(i, j);
    if (e.sum == 0 && e.cnt == 0) return;  // implicit empty-empty entry
    entries_[key(i, j)] = e;
}

DistanceMatrix build_matrix(const std::vector<SegmentView>& segments, std::int32_t w_units,
                            int jobs) {
    const int n = static_cast<int>(segments.size());
    if (n == 0) throw InputError("build_matrix needs at least one segment");
    const std::int32_t begin = segments[0].begin;
    const std::int32_t end = segments[0].end;
    for (const auto& s : segments)
        if (s.begin != begin || s.end != end)
            throw InvariantError("segments must share one window");

    DistanceMatrix m(n, w_units, begin, end);
    for (int i = 0; i < n; ++i) {
        std::int64_t ones = 0;
        for (std::int32_t p = begin; p < end; ++p) ones += segments[i].row[p];
        m.set_ones(i, ones);
    }

    std::atomic<int> next_row{0};
    std::mutex mu;
    parallel_for(n, jobs, [&](std::int64_t, std::int64_t) {
        std::vector<std::tuple<int, int, DistanceMatrix::Entry>> local;
        for (int i = next_row.fetch_add(1); i < n; i = next_row.fetch_add(1)) {
            for (int j = i + 1; j < n; ++j) {
                const TdistValue t = tdist(segments[i], segments[j], w_units);
                if (t.finite) local.emplace_back(i, j, DistanceMatrix::Entry{t.sum, t.cnt});
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        for (const auto& [i, j, e] : local) m.set(i, j, e);
    });
    return m;
}

DistanceMatrix submatrix(const DistanceMatrix& m, const std::vector<int>& indices) {
    DistanceMatrix out(static_cast<int>(indices.size()), m.w_units(), m.seg_begin(),
                       m.seg_end());
    for (std::size_t a = 0; a < indices.size(); ++a) {
        if (indices[a] < 0 || indices[a] >= m.size())
            throw InputError("submatrix index out of range");
        out.set_ones(static_cast<int>(a), m.ones(indices[a]));
        for (std::size_t b = a + 1; b < indices.size(); ++b) {
            const auto e = m.entry(indices[a], indices[b]);
            if (e) out.set(static_cast<int>(a), static_cast<int>(b), *e);
        }
    }
    return out;
}

double euclidean(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw InputError("euclidean requires equal lengths");
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        sum += d * d;
    }
    return std::sqrt(static_cast<double>(sum));
}

std::int64_t dtw(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.empty() || b.empty()) throw InputError("dtw requires non-empty sequences");
    const std::size_t m = b.size();
    std::vector<std::int64_t> prev(m), cur(m);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::int64_t cost = std::abs(static_cast<int>(a[i]) - static_cast<int>(b[j]));
            std::int64_t best;
            if (i == 0 && j == 0)
                best = 0;
            else if (i == 0)
                best = cur[j - 1];
            else if (j == 0)
                best = prev[j];
            else
                best = std::min({prev[j], cur[j - 1], prev[j - 1]});
            cur[j] = cost + best;
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

}  // namespace mtpattern
