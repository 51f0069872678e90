#pragma once

#include <cstdint>
#include <vector>

#include "mtpattern/appropagation.hpp"
#include "mtpattern/segtree.hpp"

namespace mtpattern {

// One row of the distance matrix read as a cluster: every sequence at
// finite distance from the center, the center included.
struct OmegaCovering {
    int center = 0;
    std::vector<int> members;  // ascending, contains center
    double avg_distance = 0.0;  // mean TDist center -> member (0 for center)
};

std::vector<OmegaCovering> coverings(const DistanceMatrix& m);

// Frequency and redundancy filter: coverings smaller than alpha go; a
// covering also goes when another one contains it with average distance no
// larger (for equal member sets that means the tighter one stays, ties
// resolved toward the lower center index).
std::vector<OmegaCovering> prune(const std::vector<OmegaCovering>& all, int alpha);

// Per-unit-interval presence probability of one cluster, kept as exact
// member counts per bin.
struct Pattern {
    std::int32_t le = 0;
    std::int32_t ri = 0;
    int exemplar = 0;
    int support = 0;
    std::vector<std::int64_t> bin_counts;  // members with bit set, per bin

    std::vector<double> probabilities() const;
};

// One pattern per cluster; bin means are exact counts over members.
std::vector<Pattern> extract_patterns(const ClusteringResult& result,
                                      const std::vector<SegmentView>& segments);

struct DiscoverOptions {
    int alpha = 3;
    PreferenceMode mode = PreferenceMode::kMinimizing;
    ApOptions ap;
};

struct DiscoverOutcome {
    std::int32_t le = 0;  // snapped window
    std::int32_t ri = 0;
    ClusteringResult clustering;
    std::vector<Pattern> patterns;       // ordered by support descending
    std::vector<OmegaCovering> frequent;  // pruned coverings, inspection view
};

// window_matrix -> similarity graph -> affinity propagation -> patterns.
DiscoverOutcome discover(const SegmentTree& tree, std::int32_t le, std::int32_t ri,
                         const DiscoverOptions& opts = {});

}  // namespace mtpattern
