#pragma once

#include <cstdint>
#include <vector>

#include "mtpattern/patterns.hpp"
#include "mtpattern/tdist.hpp"

namespace mtpattern {

struct LabeledClustering {
    std::vector<int> predicted;  // cluster ids (any labels)
    std::vector<int> truth;      // class ids, same index domain
};

// Pairwise decisions over unordered index pairs.
struct ConfusionCounts {
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
    static ConfusionCounts from(const LabeledClustering& lc);
};

double purity(const LabeledClustering& lc);
double rand_index(const LabeledClustering& lc);
// Pairwise F with beta > 1 weighting recall (false negatives) higher.
double f_measure(const LabeledClustering& lc, double beta = 2.0);

// Prediction-quality score of Eqs.-style reward/penalty over (sequence,
// bin, class) triples; lower is better. With normalize set, each pattern
// vector is scaled to unit L2 norm before scoring.
double accuracy_score(const std::vector<SegmentView>& sequences,
                      const std::vector<int>& pattern_of_sequence,
                      const std::vector<Pattern>& patterns, bool normalize);

struct MinCoverResult {
    int size = 0;
    std::vector<int> exemplars;  // one optimal set, ascending
};

// Exhaustive minimum feasible exemplar set: every index must be, or have
// finite distance to, a chosen exemplar. n <= 20.
MinCoverResult min_cover_oracle(const DistanceMatrix& m);
bool cover_feasible(const DistanceMatrix& m, const std::vector<int>& exemplars);

// Baselines on raw bit vectors. Both return per-sequence cluster ids.
std::vector<int> kmeans_baseline(const std::vector<Bis>& rows, int k, std::uint64_t seed);
std::vector<int> hc_baseline(const std::vector<Bis>& rows, int k);  // complete linkage

}  // namespace mtpattern
