#include "mtpattern/appropagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mtpattern {

SimilarityGraph similarity_from_matrix(const DistanceMatrix& m) {
    SimilarityGraph g;
    g.n = m.size();
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            const auto v = m.value(i, j);
            if (v) g.edges.push_back({i, j, -*v});
        }
    }
    return g;
}

SimilarityGraph similarity_from_dense(int n, const std::vector<double>& distances) {
    if (static_cast<std::size_t>(n) * n != distances.size())
        throw InputError("dense distance matrix has wrong size");
    SimilarityGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.edges.push_back({i, j, -distances[static_cast<std::size_t>(i) * n + j]});
    return g;
}

double minimizing_preference(const SimilarityGraph& g) {
    double total = 0.0;
    for (const auto& e : g.edges) total += std::abs(e.s);
    return -10.0 * (total + 1.0);
}

double median_preference(const SimilarityGraph& g) {
    if (g.edges.empty()) return -1.0;
    std::vector<double> sims;
    sims.reserve(g.edges.size());
    for (const auto& e : g.edges) sims.push_back(e.s);
    std::sort(sims.begin(), sims.end());
    const std::size_t m = sims.size();
    return m % 2 ? sims[m / 2] : 0.5 * (sims[m / 2 - 1] + sims[m / 2]);
}

std::vector<std::vector<int>> ClusteringResult::members() const {
    std::vector<std::vector<int>> out(exemplars.size());
    for (std::size_t c = 0; c < exemplars.size(); ++c)
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == exemplars[c]) out[c].push_back(static_cast<int>(i));
    return out;
}

namespace {

struct Message {
    int src, dst;
    double s;
    double r = 0.0;
    double a = 0.0;
};

// Fixed-point assignment given messages: a node is an exemplar when its
// self message wins; everyone else joins the best exemplar it has an edge
// to, falling back to a singleton when none is reachable.
ClusteringResult settle(const SimilarityGraph& g, const std::vector<Message>& msgs,
                        const std::vector<std::vector<int>>& out_edges,
                        const std::vector<int>& choice) {
    const int n = g.n;
    ClusteringResult res;
    res.assignment.assign(n, -1);

    std::vector<char> is_ex(n, 0);
    for (int i = 0; i < n; ++i)
        if (choice[i] == i) is_ex[i] = 1;

    for (int i = 0; i < n; ++i) {
        if (is_ex[i]) {
            res.assignment[i] = i;
            continue;
        }
        int best = -1;
        double best_s = -std::numeric_limits<double>::infinity();
        for (const int e : out_edges[i]) {
            const auto& m = msgs[e];
            if (m.dst == i || !is_ex[m.dst]) continue;
            if (m.s > best_s) {
                best_s = m.s;
                best = m.dst;
            }
        }
        if (best < 0) {
            is_ex[i] = 1;  // unreachable: deterministic singleton
            res.assignment[i] = i;
        } else {
            res.assignment[i] = best;
        }
    }
    for (int i = 0; i < n; ++i)
        if (is_ex[i]) res.exemplars.push_back(i);
    return res;
}

// Greedy ascent on the net-similarity objective: drop an exemplar whenever
// reassigning its whole cluster to the remaining exemplars pays for the
// preference term. With the minimizing preference this is what squeezes out
// the occasional redundant exemplar message passing leaves behind.
void merge_redundant_exemplars(const SimilarityGraph& g, ClusteringResult& r,
                               const std::vector<std::vector<std::pair<int, double>>>& adj) {
    const int n = g.n;
    std::vector<char> is_ex(n, 0);
    for (const int e : r.exemplars) is_ex[e] = 1;

    auto best_other = [&](int node, int banned) {
        int arg = -1;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& [j, s] : adj[node])
            if (j != banned && is_ex[j] && s > best) {
                best = s;
                arg = j;
            }
        return std::pair<int, double>{arg, best};
    };
    auto current_sim = [&](int node) {
        if (r.assignment[node] == node) return 0.0;
        for (const auto& [j, s] : adj[node])
            if (j == r.assignment[node]) return s;
        return -std::numeric_limits<double>::infinity();
    };

    bool improved = true;
    while (improved) {
        improved = false;
        for (int e = 0; e < n; ++e) {
            if (!is_ex[e]) continue;
            double delta = -g.preference;
            std::vector<std::pair<int, int>> moves;
            bool feasible = true;
            for (int m = 0; m < n && feasible; ++m) {
                if (r.assignment[m] != e) continue;
                const auto [arg, s] = best_other(m, e);
                if (arg < 0) {
                    feasible = false;
                    break;
                }
                delta += s - current_sim(m);
                moves.emplace_back(m, arg);
            }
            if (!feasible || !(delta > 0.0)) continue;
            for (const auto& [m, target] : moves) r.assignment[m] = target;
            is_ex[e] = 0;
            improved = true;
        }
    }
    r.exemplars.clear();
    for (int i = 0; i < n; ++i)
        if (is_ex[i]) r.exemplars.push_back(i);
}

}  // namespace

ClusteringResult cluster(const SimilarityGraph& g, const ApOptions& opts) {
    if (g.n <= 0) throw InputError("cluster needs a non-empty graph");
    if (!(opts.damping >= 0.5 && opts.damping < 1.0))
        throw InputError("damping must be in [0.5, 1)");
    const int n = g.n;

    // Directed messages: both directions per edge plus every self loop.
    std::vector<Message> msgs;
    msgs.reserve(2 * g.edges.size() + n);
    for (const auto& e : g.edges) {
        if (e.i == e.j || e.i < 0 || e.j >= n) throw InputError("bad edge in similarity graph");
        msgs.push_back({e.i, e.j, e.s});
        msgs.push_back({e.j, e.i, e.s});
    }
    for (int i = 0; i < n; ++i) msgs.push_back({i, i, g.preference});

    std::vector<std::vector<int>> out_edges(n), in_edges(n);
    for (std::size_t k = 0; k < msgs.size(); ++k) {
        out_edges[msgs[k].src].push_back(static_cast<int>(k));
        in_edges[msgs[k].dst].push_back(static_cast<int>(k));
    }
    // Deterministic order: ascending destination / source, self message last
    // has no special role since updates scan explicitly.
    for (int i = 0; i < n; ++i) {
        std::sort(out_edges[i].begin(), out_edges[i].end(),
                  [&](int a, int b) { return msgs[a].dst < msgs[b].dst; });
        std::sort(in_edges[i].begin(), in_edges[i].end(),
                  [&](int a, int b) { return msgs[a].src < msgs[b].src; });
    }

    const double lam = opts.damping;
    double max_delta = 0.0;
    auto damp = [lam, &max_delta](double& var, double value) {
        const double next = lam * var + (1.0 - lam) * value;
        max_delta = std::max(max_delta, std::abs(next - var));
        var = next;
    };
    // Extreme preferences produce long transients in which the exemplar
    // estimate sits still while messages are far from their fixed point, so
    // stability alone would stop too early.
    const double quiescent = 1e-9 * std::max(1.0, std::abs(g.preference));

    // Adjacency for objective evaluation, built once; ascending neighbor
    // order keeps similarity ties on the lowest index.
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : g.edges) {
        adj[e.i].emplace_back(e.j, e.s);
        adj[e.j].emplace_back(e.i, e.s);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    auto eval_net = [&](const ClusteringResult& r) {
        double total = static_cast<double>(r.exemplars.size()) * g.preference;
        for (int i = 0; i < n; ++i) {
            const int ex = r.assignment[i];
            if (ex == i) continue;
            for (const auto& [j, s] : adj[i]) {
                if (j == ex) {
                    total += s;
                    break;
                }
            }
        }
        return total;
    };

    std::vector<int> choice(n, -1);
    ClusteringResult best;
    double best_net = -std::numeric_limits<double>::infinity();
    int stable = 0;
    int it = 0;

    for (it = 1; it <= opts.max_iter; ++it) {
        max_delta = 0.0;
        // responsibilities
        for (int i = 0; i < n; ++i) {
            double max1 = -std::numeric_limits<double>::infinity(), max2 = max1;
            int arg1 = -1;
            for (const int e : out_edges[i]) {
                const double v = msgs[e].s + msgs[e].a;
                if (v > max1) {
                    max2 = max1;
                    max1 = v;
                    arg1 = e;
                } else if (v > max2) {
                    max2 = v;
                }
            }
            for (const int e : out_edges[i])
                damp(msgs[e].r, msgs[e].s - (e == arg1 ? max2 : max1));
        }
        // availabilities
        for (int k = 0; k < n; ++k) {
            double pos_sum = 0.0;
            double rkk = 0.0;
            for (const int e : in_edges[k]) {
                if (msgs[e].src == k)
                    rkk = msgs[e].r;
                else
                    pos_sum += std::max(0.0, msgs[e].r);
            }
            for (const int e : in_edges[k]) {
                if (msgs[e].src == k) {
                    damp(msgs[e].a, pos_sum);
                } else {
                    const double without = pos_sum - std::max(0.0, msgs[e].r);
                    damp(msgs[e].a, std::min(0.0, rkk + without));
                }
            }
        }
        // exemplar estimate; ties go to the lowest destination index, which
        // the ascending scan order provides via strict comparison.
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            double best_v = -std::numeric_limits<double>::infinity();
            int arg = i;
            for (const int e : out_edges[i]) {
                const double v = msgs[e].a + msgs[e].r;
                if (v > best_v) {
                    best_v = v;
                    arg = msgs[e].dst;
                }
            }
            if (arg != choice[i]) changed = true;
            choice[i] = arg;
        }

        if (changed) {
            stable = 0;
            // Occasional snapshots so the best-so-far survives oscillation.
            if (it % 10 == 0) {
                ClusteringResult cand = settle(g, msgs, out_edges, choice);
                merge_redundant_exemplars(g, cand, adj);
                cand.net_sim = eval_net(cand);
                if (cand.net_sim > best_net) {
                    best_net = cand.net_sim;
                    best = std::move(cand);
                }
            }
        } else if (++stable >= opts.stable_iters && max_delta < quiescent) {
            break;
        }
    }

    ClusteringResult res = settle(g, msgs, out_edges, choice);
    merge_redundant_exemplars(g, res, adj);
    res.net_sim = eval_net(res);
    res.converged = stable >= opts.stable_iters && max_delta < quiescent;
    res.iterations = std::min(it, opts.max_iter);
    if (!res.converged && best_net > res.net_sim) {
        best.converged = false;
        best.iterations = res.iterations;
        return best;
    }
    return res;
}

double net_similarity(const SimilarityGraph& g, const ClusteringResult& r) {
    if (static_cast<int>(r.assignment.size()) != g.n)
        throw InvariantError("assignment size mismatch");
    std::vector<char> is_ex(g.n, 0);
    for (const int e : r.exemplars) is_ex[e] = 1;

    // similarity lookup restricted to edges
    std::vector<std::vector<std::pair<int, double>>> adj(g.n);
    for (const auto& e : g.edges) {
        adj[e.i].emplace_back(e.j, e.s);
        adj[e.j].emplace_back(e.i, e.s);
    }

    double total = static_cast<double>(r.exemplars.size()) * g.preference;
    for (int i = 0; i < g.n; ++i) {
        const int ex = r.assignment[i];
        if (ex == i) {
            if (!is_ex[i]) throw InvariantError("self-assigned node is not an exemplar");
            continue;
        }
        if (!is_ex[ex]) throw InvariantError("node assigned to a non-exemplar");
        bool found = false;
        for (const auto& [j, s] : adj[i]) {
            if (j == ex) {
                total += s;
                found = true;
                break;
            }
        }
        if (!found)
            throw InvariantError("assignment uses a pair with undefined distance");
    }
    return total;
}

}  // namespace mtpattern
