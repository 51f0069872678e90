#include "mtpattern/patterns.hpp"

#include <algorithm>

namespace mtpattern {

std::vector<OmegaCovering> coverings(const DistanceMatrix& m) {
    std::vector<OmegaCovering> out;
    out.reserve(m.size());
    for (int i = 0; i < m.size(); ++i) {
        OmegaCovering c;
        c.center = i;
        double total = 0.0;
        for (int j = 0; j < m.size(); ++j) {
            const auto v = m.value(i, j);
            if (!v) continue;
            c.members.push_back(j);
            total += *v;
        }
        c.avg_distance = c.members.empty() ? 0.0 : total / static_cast<double>(c.members.size());
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Strict dominance order for pruning. A covering loses to a superset that
// is at least as tight, and among equal sets to the tighter (then lower
// centered) one.
bool dominates(const OmegaCovering& y, const OmegaCovering& x) {
    if (!is_subset(x.members, y.members)) return false;
    if (x.members.size() < y.members.size()) return y.avg_distance <= x.avg_distance;
    // equal member sets
    if (y.avg_distance != x.avg_distance) return y.avg_distance < x.avg_distance;
    return y.center < x.center;
}

}  // namespace

std::vector<OmegaCovering> prune(const std::vector<OmegaCovering>& all, int alpha) {
    if (alpha < 1) throw InputError("alpha must be at least 1");
    std::vector<OmegaCovering> out;
    for (const auto& c : all) {
        if (static_cast<int>(c.members.size()) < alpha) continue;
        bool dominated = false;
        for (const auto& other : all) {
            if (other.center == c.center) continue;
            if (dominates(other, c)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(c);
    }
    return out;
}

std::vector<double> Pattern::probabilities() const {
    std::vector<double> p(bin_counts.size(), 0.0);
    if (support > 0)
        for (std::size_t j = 0; j < bin_counts.size(); ++j)
            p[j] = static_cast<double>(bin_counts[j]) / static_cast<double>(support);
    return p;
}

std::vector<Pattern> extract_patterns(const ClusteringResult& result,
                                      const std::vector<SegmentView>& segments) {
    if (result.assignment.size() != segments.size())
        throw InvariantError("clustering does not cover the segment list");
    std::vector<Pattern> out;
    for (const int ex : result.exemplars) {
        Pattern p;
        p.exemplar = ex;
        p.le = segments[ex].begin;
        p.ri = segments[ex].end;
        p.bin_counts.assign(static_cast<std::size_t>(p.ri - p.le), 0);
        for (std::size_t i = 0; i < segments.size(); ++i) {
            if (result.assignment[i] != ex) continue;
            ++p.support;
            for (std::int32_t b = p.le; b < p.ri; ++b)
                p.bin_counts[static_cast<std::size_t>(b - p.le)] += segments[i].row[b];
        }
        if (p.support == 0) throw InvariantError("empty cluster for exemplar");
        out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(), [](const Pattern& a, const Pattern& b) {
        if (a.support != b.support) return a.support > b.support;
        return a.exemplar < b.exemplar;
    });
    return out;
}

DiscoverOutcome discover(const SegmentTree& tree, std::int32_t le, std::int32_t ri,
                         const DiscoverOptions& opts) {
    if (le < 0 || ri > tree.length() || le >= ri)
        throw InputError("discover window out of range");
    DiscoverOutcome out;
    out.le = tree.snap_left(le);
    out.ri = tree.snap_right(ri);

    const DistanceMatrix window = tree.window_matrix(out.le, out.ri);
    SimilarityGraph graph = similarity_from_matrix(window);
    graph.preference = opts.mode == PreferenceMode::kMinimizing
                           ? minimizing_preference(graph)
                           : median_preference(graph);
    out.clustering = cluster(graph, opts.ap);

    std::vector<SegmentView> segments;
    segments.reserve(tree.sequences().size());
    for (const auto& bis : tree.sequences())
        segments.emplace_back(bis, out.le, out.ri);
    out.patterns = extract_patterns(out.clustering, segments);
    out.frequent = prune(coverings(window), opts.alpha);
    return out;
}

}  // namespace mtpattern
