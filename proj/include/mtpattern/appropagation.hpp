#pragma once

#include <cstdint>
#include <vector>

#include "mtpattern/tdist.hpp"

namespace mtpattern {

// Sparse similarity graph: an edge exists exactly where TDist is finite,
// with similarity = -distance. All nodes share one preference s(i,i).
struct SimilarityGraph {
    struct Edge {
        int i, j;   // i < j
        double s;   // similarity, <= 0 for distances
    };

    int n = 0;
    std::vector<Edge> edges;
    double preference = 0.0;
};

SimilarityGraph similarity_from_matrix(const DistanceMatrix& m);

// Dense helper for the baseline distance comparison: values is an n*n
// (or upper-triangular-filled) symmetric distance matrix.
SimilarityGraph similarity_from_dense(int n, const std::vector<double>& distances);

// Preference dominating every inter-point similarity in magnitude; with it
// affinity propagation converges to the fewest clusters that still cover
// every node. -10 * (sum of |s| over edges + 1).
double minimizing_preference(const SimilarityGraph& g);

// Conventional moderate setting: median of the finite similarities.
double median_preference(const SimilarityGraph& g);

enum class PreferenceMode { kMinimizing, kMedian };

struct ApOptions {
    double damping = 0.9;
    int max_iter = 1000;
    int stable_iters = 50;
};

struct ClusteringResult {
    std::vector<int> exemplars;   // ascending
    std::vector<int> assignment;  // node -> exemplar node
    double net_sim = 0.0;
    int iterations = 0;
    bool converged = false;

    int cluster_count() const { return static_cast<int>(exemplars.size()); }
    std::vector<std::vector<int>> members() const;
};

// Sparse message passing restricted to existing edges. Ties break toward
// the lowest index; nodes without edges become singleton exemplars. On
// non-convergence the best assignment seen (by net similarity) is
// returned with converged = false.
ClusteringResult cluster(const SimilarityGraph& g, const ApOptions& opts = {});

// Objective: sum of member-to-exemplar similarities plus one preference
// per exemplar. Throws InvariantError if an assignment uses a missing edge.
double net_similarity(const SimilarityGraph& g, const ClusteringResult& r);

}  // namespace mtpattern
