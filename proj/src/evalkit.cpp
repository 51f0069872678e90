#include "mtpattern/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace mtpattern {

namespace {

void check_domain(const LabeledClustering& lc) {
    if (lc.predicted.size() != lc.truth.size())
        throw InputError("predicted and truth must share an index domain");
    if (lc.predicted.empty()) throw InputError("empty labeled clustering");
}

// contingency[cluster][class] -> count
std::map<int, std::map<int, std::int64_t>> contingency(const LabeledClustering& lc) {
    std::map<int, std::map<int, std::int64_t>> table;
    for (std::size_t i = 0; i < lc.predicted.size(); ++i)
        ++table[lc.predicted[i]][lc.truth[i]];
    return table;
}

std::int64_t choose2(std::int64_t x) { return x * (x - 1) / 2; }

}  // namespace

ConfusionCounts ConfusionCounts::from(const LabeledClustering& lc) {
    check_domain(lc);
    const auto n = static_cast<std::int64_t>(lc.predicted.size());
    const auto table = contingency(lc);

    std::int64_t same_both = 0;   // same cluster, same class
    std::int64_t same_pred = 0;   // same cluster
    std::map<int, std::int64_t> class_sizes;
    for (const auto& [cl, row] : table) {
        std::int64_t cluster_size = 0;
        for (const auto& [cls, cnt] : row) {
            same_both += choose2(cnt);
            cluster_size += cnt;
            class_sizes[cls] += cnt;
        }
        same_pred += choose2(cluster_size);
    }
    std::int64_t same_truth = 0;
    for (const auto& [cls, cnt] : class_sizes) same_truth += choose2(cnt);

    ConfusionCounts c;
    c.tp = same_both;
    c.fp = same_pred - same_both;
    c.fn = same_truth - same_both;
    c.tn = choose2(n) - c.tp - c.fp - c.fn;
    return c;
}

double purity(const LabeledClustering& lc) {
    check_domain(lc);
    std::int64_t correct = 0;
    for (const auto& [cl, row] : contingency(lc)) {
        std::int64_t best = 0;
        for (const auto& [cls, cnt] : row) best = std::max(best, cnt);
        correct += best;
    }
    return static_cast<double>(correct) / static_cast<double>(lc.predicted.size());
}

double rand_index(const LabeledClustering& lc) {
    check_domain(lc);
    if (lc.predicted.size() < 2) throw InputError("rand index needs at least two items");
    const ConfusionCounts c = ConfusionCounts::from(lc);
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double f_measure(const LabeledClustering& lc, double beta) {
    check_domain(lc);
    const ConfusionCounts c = ConfusionCounts::from(lc);
    if (c.tp == 0) return 0.0;
    const double p = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    const double r = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    const double b2 = beta * beta;
    const double denom = b2 * p + r;
    return denom == 0.0 ? 0.0 : (1.0 + b2) * p * r / denom;
}

double accuracy_score(const std::vector<SegmentView>& sequences,
                      const std::vector<int>& pattern_of_sequence,
                      const std::vector<Pattern>& patterns, bool normalize) {
    if (sequences.size() != pattern_of_sequence.size())
        throw InputError("every sequence needs an assigned pattern");

    std::vector<std::vector<double>> vecs(patterns.size());
    for (std::size_t c = 0; c < patterns.size(); ++c) {
        vecs[c] = patterns[c].probabilities();
        if (normalize) {
            double norm = 0.0;
            for (const double v : vecs[c]) norm += v * v;
            norm = std::sqrt(norm);
            if (norm > 0.0)
                for (double& v : vecs[c]) v /= norm;
        }
    }

    double score = 0.0;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const int pi = pattern_of_sequence[i];
        if (pi < 0 || pi >= static_cast<int>(patterns.size()))
            throw InputError("sequence assigned to a missing pattern");
        const auto& vec = vecs[pi];
        const auto& seg = sequences[i];
        if (static_cast<std::int32_t>(vec.size()) != seg.length())
            throw InputError("pattern window does not match sequence segment");
        for (std::int32_t b = 0; b < seg.length(); ++b) {
            const bool present = seg.row[seg.begin + b] != 0;
            const double p_present = vec[static_cast<std::size_t>(b)];
            const double p_absent = 1.0 - p_present;
            // class = present
            score += (present ? -1.0 : 1.0) * p_present;
            // class = absent
            score += (present ? 1.0 : -1.0) * p_absent;
        }
    }
    return score;
}

bool cover_feasible(const DistanceMatrix& m, const std::vector<int>& exemplars) {
    std::vector<char> chosen(m.size(), 0);
    for (const int e : exemplars) chosen[e] = 1;
    for (int i = 0; i < m.size(); ++i) {
        if (chosen[i]) continue;
        bool covered = false;
        for (const int e : exemplars) {
            if (m.finite(i, e)) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

MinCoverResult min_cover_oracle(const DistanceMatrix& m) {
    const int n = m.size();
    if (n > 20)
        throw InputError("min_cover_oracle is exhaustive and refuses n > 20 (got " +
                         std::to_string(n) + ")");
    if (n == 0) throw InputError("min_cover_oracle needs a non-empty matrix");

    // Neighborhood masks: vertex i covers itself and its finite neighbors.
    std::vector<std::uint32_t> covers(n, 0);
    for (int i = 0; i < n; ++i) {
        covers[i] |= 1u << i;
        for (int j = 0; j < n; ++j)
            if (j != i && m.finite(i, j)) covers[i] |= 1u << j;
    }
    const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;

    auto similarity_total = [&](const std::vector<int>& exemplars) {
        // best assignment: each non-exemplar joins its most similar exemplar
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            if (std::find(exemplars.begin(), exemplars.end(), i) != exemplars.end()) continue;
            double best = -std::numeric_limits<double>::infinity();
            for (const int e : exemplars) {
                const auto v = m.value(i, e);
                if (v && -*v > best) best = -*v;
            }
            total += best;
        }
        return total;
    };

    for (int size = 1; size <= n; ++size) {
        std::vector<int> best_set;
        double best_total = -std::numeric_limits<double>::infinity();
        std::vector<int> comb(size);
        for (int i = 0; i < size; ++i) comb[i] = i;
        while (true) {
            std::uint32_t covered = 0;
            for (const int v : comb) covered |= covers[v];
            if (covered == all) {
                const double total = similarity_total(comb);
                // ascending combination enumeration makes ties lexicographic
                if (total > best_total) {
                    best_total = total;
                    best_set = comb;
                }
            }
            int pos = size - 1;
            while (pos >= 0 && comb[pos] == n - size + pos) --pos;
            if (pos < 0) break;
            ++comb[pos];
            for (int q = pos + 1; q < size; ++q) comb[q] = comb[q - 1] + 1;
        }
        if (!best_set.empty()) return MinCoverResult{size, best_set};
    }
    throw InvariantError("no feasible cover exists");  // unreachable: all vertices self-cover
}

std::vector<int> kmeans_baseline(const std::vector<Bis>& rows, int k, std::uint64_t seed) {
    const int n = static_cast<int>(rows.size());
    if (k < 1 || k > n) throw InputError("kmeans needs 1 <= k <= n");
    const auto dim = rows[0].bits.size();

    auto sq_dist = [&](const std::vector<double>& center, const Bis& row) {
        double d = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double diff = center[j] - row.bits[j];
            d += diff * diff;
        }
        return d;
    };

    // Forgy initialization: k distinct points drawn at random.
    std::mt19937_64 rng(seed);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    for (int c = 0; c < k; ++c)
        centers.emplace_back(rows[order[c]].bits.begin(), rows[order[c]].bits.end());

    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = assign[i];
            for (int c = 0; c < k; ++c) {
                const double d = sq_dist(centers[c], rows[i]);
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            if (arg != assign[i]) {
                assign[i] = arg;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            ++counts[assign[i]];
            for (std::size_t j = 0; j < dim; ++j) sums[assign[i]][j] += rows[i].bits[j];
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0)
                for (std::size_t j = 0; j < dim; ++j) centers[c][j] = sums[c][j] / counts[c];
    }
    return assign;
}

std::vector<int> hc_baseline(const std::vector<Bis>& rows, int k) {
    const int n = static_cast<int>(rows.size());
    if (k < 1 || k > n) throw InputError("hierarchical clustering needs 1 <= k <= n");

    // Complete-linkage agglomeration on a Euclidean distance matrix.
    std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int i, int j) -> double& { return dist[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = euclidean(rows[i].bits, rows[j].bits);
            at(i, j) = d;
            at(j, i) = d;
        }

    std::vector<int> cluster_of(n);
    for (int i = 0; i < n; ++i) cluster_of[i] = i;
    std::vector<char> active(n, 1);
    int active_count = n;

    while (active_count > k) {
        int bi = -1, bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (at(i, j) < best) {
                    best = at(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        // merge bj into bi; complete linkage keeps the max distance
        for (int t = 0; t < n; ++t) {
            if (!active[t] || t == bi || t == bj) continue;
            const double d = std::max(at(bi, t), at(bj, t));
            at(bi, t) = d;
            at(t, bi) = d;
        }
        active[bj] = 0;
        for (int i = 0; i < n; ++i)
            if (cluster_of[i] == bj) cluster_of[i] = bi;
        --active_count;
    }
    return cluster_of;
}

}  // namespace mtpattern
