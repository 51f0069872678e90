// Acceptance suite: one line per criterion, non-zero exit if any fails.
// Run with a criterion number (1..8) to restrict the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mtpattern/evalkit.hpp"
#include "mtpattern/patterns.hpp"
#include "mtpattern/synth.hpp"

using namespace mtpattern;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
    int id;
    bool ok = true;
    std::string detail;
    Clock::time_point started = Clock::now();

    explicit Criterion(int id_) : id(id_) {}

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }

    void finish(const char* title) {
        const double secs =
            std::chrono::duration<double>(Clock::now() - started).count();
        std::printf("C%d %s — %s (%.1fs)%s%s\n", id, ok ? "PASS" : "FAIL", title, secs,
                    detail.empty() ? "" : " — ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// ---------- shared planted-data machinery for criteria 2, 3, 7 ----------

// Reference protocol for the metric reproduction runs: sigma = 4*lambda/3,
// p = 0.2, n = 1000, lambda = 450 s, L = 192, the library's default
// four-mode layout, fixed seeds. The config is echoed per run.
SynthParams reference_params() {
    SynthParams p;
    p.modes = default_modes();
    p.n = 1000;
    p.false_neg_p = 0.2;
    p.lambda_s = 450;
    p.length = 192;
    p.seed = 7;
    return p;
}

std::string params_line(const SynthParams& p) {
    std::string out = "generator: n=" + std::to_string(p.n) + " p=" + fmt(p.false_neg_p) +
                      " seed=" + std::to_string(p.seed) + " modes=";
    for (const auto& m : p.modes)
        out += "[" + std::to_string(m.mean_start) + "," + std::to_string(m.mean_end) +
               ")x" + fmt(m.weight) + " ";
    return out;
}

struct Scores {
    double purity = 0, rand = 0, f = 0;
    int clusters = 0;
};

Scores score(const std::vector<int>& predicted, const std::vector<int>& truth) {
    LabeledClustering lc{predicted, truth};
    Scores s;
    s.purity = purity(lc);
    s.rand = rand_index(lc);
    s.f = f_measure(lc, 2.0);
    std::set<int> ids(predicted.begin(), predicted.end());
    s.clusters = static_cast<int>(ids.size());
    return s;
}

ClusteringResult cluster_tdist(const std::vector<Bis>& rows, std::int32_t w_units,
                               PreferenceMode mode) {
    std::vector<SegmentView> views;
    views.reserve(rows.size());
    for (const auto& r : rows) views.push_back(SegmentView::full_day(r));
    const auto matrix = build_matrix(views, w_units, 0);
    auto g = similarity_from_matrix(matrix);
    g.preference = mode == PreferenceMode::kMinimizing ? minimizing_preference(g)
                                                       : median_preference(g);
    return cluster(g);
}

// Dense baseline arms: with no infinite entries the minimizing preference
// says nothing about distance quality (any dense graph covers with one
// exemplar), so these arms use a scaled-minimum preference. ED merges the
// whole corpus at any scale beyond its shallow structure; DTW keeps its
// duration families apart. Scale 80 is the protocol constant.
ClusteringResult cluster_dense(const std::vector<double>& dist, int n, double alpha) {
    auto g = similarity_from_dense(n, dist);
    double lowest = 0.0;
    for (const auto& e : g.edges) lowest = std::min(lowest, e.s);
    g.preference = alpha <= 0.0 ? minimizing_preference(g) : alpha * lowest;
    return cluster(g);
}

std::vector<double> euclidean_matrix(const std::vector<Bis>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    parallel_for(n, 0, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i)
            for (int j = 0; j < n; ++j)
                d[i * n + j] = euclidean(rows[i].bits, rows[j].bits);
    });
    return d;
}

std::vector<double> dtw_matrix(const std::vector<Bis>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    parallel_for(n, 0, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i)
            for (int j = static_cast<int>(i) + 1; j < n; ++j)
                d[i * n + j] = static_cast<double>(dtw(rows[i].bits, rows[j].bits));
    });
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) d[static_cast<std::size_t>(i) * n + j] =
            d[static_cast<std::size_t>(j) * n + i];
    return d;
}

// ---------- criteria ----------

void criterion1() {
    Criterion c(1);
    const auto m = testfx::worked_example_matrix();

    const auto cov = coverings(m);
    const auto expected = testfx::worked_example_coverings();
    bool cov_ok = cov.size() == 7;
    for (int i = 0; cov_ok && i < 7; ++i)
        cov_ok = cov[i].center == i && cov[i].members == expected[i];
    c.expect(cov_ok, "coverings do not reproduce the listed sets");

    const auto kept = prune(cov, 3);
    std::set<int> centers;
    for (const auto& k : kept) centers.insert(k.center);
    c.expect(centers == std::set<int>{0, 2, 4, 5},
             "prune(3) should drop exactly {S-2, S-4, S-7}");

    const auto oracle = min_cover_oracle(m);
    c.expect(oracle.size == 2, "minimum cover size must be 2");
    c.expect(cover_feasible(m, {2, 4}), "{S-3, S-5} must be feasible");

    auto g = similarity_from_matrix(m);
    g.preference = minimizing_preference(g);
    const auto r = cluster(g);
    c.expect(r.exemplars == std::vector<int>{2, 4}, "exemplars must be S-3 and S-5");
    c.expect(r.assignment == std::vector<int>{2, 4, 2, 2, 4, 2, 2},
             "members must split {S-1,S-3,S-4,S-6,S-7} / {S-2,S-5}");

    const double secs = std::chrono::duration<double>(Clock::now() - c.started).count();
    c.expect(secs < 1.0, "must finish under a second");
    c.finish("worked example golden test");
}

void criterion2() {
    Criterion c(2);
    const auto params = reference_params();
    const auto ds = generate(params);
    std::printf("   %s\n", params_line(params).c_str());

    const auto mt = cluster_tdist(ds.sequences, 4, PreferenceMode::kMinimizing);  // 30 min
    const auto mt_scores = score(mt.assignment, ds.labels);
    c.note("mtpattern p=" + fmt(mt_scores.purity) + " ri=" + fmt(mt_scores.rand) +
           " f=" + fmt(mt_scores.f) + " k=" + std::to_string(mt_scores.clusters));
    c.expect(mt_scores.purity >= 0.93, "purity >= 0.93");
    c.expect(mt_scores.rand >= 0.88, "rand index >= 0.88");
    c.expect(mt_scores.f >= 0.87, "f-measure >= 0.87");

    const int k = static_cast<int>(params.modes.size());
    const auto km_scores = score(kmeans_baseline(ds.sequences, k, 1), ds.labels);
    const auto hc_scores = score(hc_baseline(ds.sequences, k), ds.labels);
    c.note("kmeans p=" + fmt(km_scores.purity) + " ri=" + fmt(km_scores.rand) +
           " f=" + fmt(km_scores.f));
    c.note("hc p=" + fmt(hc_scores.purity) + " ri=" + fmt(hc_scores.rand) +
           " f=" + fmt(hc_scores.f));
    // The 0.63..0.69 reference band covers baseline purity and Rand; the
    // F-measure is pinned only by the strictly-below requirement.
    for (const auto& [name, s] : {std::pair<const char*, Scores>{"kmeans", km_scores},
                                  std::pair<const char*, Scores>{"hc", hc_scores}}) {
        for (const auto& [metric, value, ours] :
             {std::tuple<const char*, double, double>{"purity", s.purity, mt_scores.purity},
              std::tuple<const char*, double, double>{"rand", s.rand, mt_scores.rand},
              std::tuple<const char*, double, double>{"f", s.f, mt_scores.f}}) {
            if (std::string(metric) != "f")
                c.expect(value >= 0.53 && value <= 0.79,
                         std::string(name) + " " + metric + " within 0.63..0.69 +-0.10");
            c.expect(value < ours, std::string(name) + " " + metric + " strictly below");
        }
    }

    const double secs = std::chrono::duration<double>(Clock::now() - c.started).count();
    c.expect(secs < 300.0, "must finish under 5 minutes");
    c.finish("external-metric reproduction at 30 min");
}

void criterion3() {
    Criterion c(3);
    const auto params = reference_params();
    const auto ds = generate(params);
    std::printf("   %s\n", params_line(params).c_str());

    const double td_center[3] = {0.92, 0.95, 0.97};
    const std::int32_t w_units[3] = {4, 6, 8};  // 30, 45, 60 min
    double td_f[3];
    for (int i = 0; i < 3; ++i) {
        const auto r = cluster_tdist(ds.sequences, w_units[i], PreferenceMode::kMinimizing);
        td_f[i] = score(r.assignment, ds.labels).f;
        c.expect(std::abs(td_f[i] - td_center[i]) <= 0.05 + 1e-9,
                 "tdist f at " + std::to_string(w_units[i] * 450 / 60) + " min = " +
                     fmt(td_f[i]) + " (want " + fmt(td_center[i]) + " +-0.05)");
    }
    c.note("td f=" + fmt(td_f[0]) + "/" + fmt(td_f[1]) + "/" + fmt(td_f[2]));

    // ED and DTW do not depend on omega; their clustering is computed once.
    const auto ed = cluster_dense(euclidean_matrix(ds.sequences),
                                  static_cast<int>(ds.sequences.size()), 0.0);
    const double ed_f = score(ed.assignment, ds.labels).f;
    const auto dt = cluster_dense(dtw_matrix(ds.sequences),
                                  static_cast<int>(ds.sequences.size()), 80.0);
    const double dtw_f = score(dt.assignment, ds.labels).f;
    c.note("ed f=" + fmt(ed_f) + " dtw f=" + fmt(dtw_f));

    const double ed_center[3] = {0.56, 0.62, 0.69};
    const double dtw_center[3] = {0.67, 0.73, 0.78};
    for (int i = 0; i < 3; ++i) {
        c.expect(std::abs(ed_f - ed_center[i]) <= 0.10 + 1e-9,
                 "ed f within +-0.10 of " + fmt(ed_center[i]));
        c.expect(std::abs(dtw_f - dtw_center[i]) <= 0.10 + 1e-9,
                 "dtw f within +-0.10 of " + fmt(dtw_center[i]));
        c.expect(td_f[i] > ed_f, "tdist beats ed at every omega");
        c.expect(td_f[i] > dtw_f, "tdist beats dtw at every omega");
    }
    c.finish("distance-measure comparison across windows");
}

void criterion4() {
    Criterion c(4);
    std::mt19937_64 rng(42);
    int matched = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const int n = 3 + static_cast<int>(rng() % 10);  // <= 12
        std::bernoulli_distribution has_edge(0.15 + 0.5 * ((t % 10) / 10.0));
        std::uniform_int_distribution<int> dist_units(1, 39);

        DistanceMatrix m(n, 4, 0, 4);
        for (int i = 0; i < n; ++i) m.set_ones(i, 1);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (has_edge(rng)) m.set(i, j, DistanceMatrix::Entry{dist_units(rng), 10});

        auto g = similarity_from_matrix(m);
        g.preference = minimizing_preference(g);
        const auto r = cluster(g);
        const auto oracle = min_cover_oracle(m);

        c.expect(r.cluster_count() >= oracle.size, "clustering must never undercut the oracle");
        c.expect(cover_feasible(m, r.exemplars), "exemplar set must be feasible");
        std::vector<char> is_ex(n, 0);
        for (const int e : r.exemplars) is_ex[e] = 1;
        for (int i = 0; i < n; ++i) {
            c.expect(is_ex[r.assignment[i]], "assignment must point at an exemplar");
            if (r.assignment[i] != i)
                c.expect(m.finite(i, r.assignment[i]), "member must be omega-covered");
        }
        if (r.cluster_count() == oracle.size) ++matched;
    }
    c.note("matched " + std::to_string(matched) + "/" + std::to_string(trials));
    c.expect(matched * 100 >= trials * 95, "must match the oracle in at least 95%");
    const double secs = std::chrono::duration<double>(Clock::now() - c.started).count();
    c.expect(secs < 120.0, "must finish under 2 minutes");
    c.finish("minimality against the exact cover oracle");
}

void criterion5() {
    Criterion c(5);
    std::mt19937_64 rng(43);
    for (int t = 0; t < 500; ++t) {
        const int n = 2 + static_cast<int>(rng() % 29);
        const int length = 8 + static_cast<int>(rng() % 249);
        const std::int32_t w = 1 + static_cast<std::int32_t>(rng() % 8);
        std::bernoulli_distribution bit(0.05 + 0.4 * ((t % 7) / 7.0));

        std::vector<Bis> rows(n);
        for (auto& r : rows) {
            r.lambda_s = 450;
            r.bits.assign(length, 0);
            for (auto& v : r.bits) v = bit(rng);
        }
        SegmentTree tree(rows, w);

        const std::int32_t leaves = (length + w - 1) / w;
        std::int32_t a = static_cast<std::int32_t>(rng() % leaves) * w;
        std::int32_t b = static_cast<std::int32_t>(rng() % leaves) * w;
        if (a == b) b += w;
        const std::int32_t le = std::min(a, b);
        const std::int32_t ri = std::min(std::max(a, b), length);

        const auto fast = tree.window_matrix(le, ri);
        std::vector<SegmentView> views;
        for (const auto& r : rows) views.emplace_back(r, le, ri);
        const auto direct = build_matrix(views, w);

        bool equal = fast.size() == direct.size();
        for (int i = 0; equal && i < fast.size(); ++i) {
            if (fast.ones(i) != direct.ones(i)) equal = false;
            for (int j = i + 1; equal && j < fast.size(); ++j) {
                const auto ea = fast.entry(i, j), eb = direct.entry(i, j);
                if (ea.has_value() != eb.has_value()) equal = false;
                else if (ea && (ea->sum != eb->sum || ea->cnt != eb->cnt)) equal = false;
            }
        }
        c.expect(equal, "window " + std::to_string(le) + ":" + std::to_string(ri) +
                            " differs from direct computation at trial " + std::to_string(t));
        if (!equal) break;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - c.started).count();
    c.expect(secs < 120.0, "must finish under 2 minutes");
    c.finish("exact window recombination, zero tolerance");
}

void criterion6() {
    Criterion c(6);
    std::mt19937_64 rng(44);
    auto random_bits = [&rng](int length, double density) {
        std::bernoulli_distribution bit(density);
        std::vector<std::uint8_t> b(length, 0);
        for (auto& v : b) v = bit(rng);
        return b;
    };
    auto view = [](const std::vector<std::uint8_t>& b) {
        return SegmentView(b.data(), static_cast<std::int32_t>(b.size()), 0,
                           static_cast<std::int32_t>(b.size()));
    };

    int oracle_checked = 0;
    for (int t = 0; t < 10000; ++t) {
        const int length = 1 + static_cast<int>(rng() % 16);
        const std::int32_t w = 1 + static_cast<std::int32_t>(rng() % 8);
        const auto a = random_bits(length, 0.35);
        const auto b = random_bits(length, 0.35);

        const auto ab = tdist(view(a), view(b), w);
        const auto ba = tdist(view(b), view(a), w);
        c.expect(ab.finite == ba.finite, "symmetry of finiteness");
        if (ab.finite) {
            c.expect(ab.value() == ba.value(), "symmetry of value");
            c.expect(ab.value() < static_cast<double>(w), "finite values stay below w");
        }
        const auto aa = tdist(view(a), view(a), w);
        c.expect(aa.finite && aa.value() == 0.0, "identity");

        // exhaustive oracle
        std::vector<int> ones_a, ones_b;
        for (int i = 0; i < length; ++i) {
            if (a[i]) ones_a.push_back(i);
            if (b[i]) ones_b.push_back(i);
        }
        bool finite = true;
        std::int64_t total = 0;
        for (const int i : ones_a) {
            int best = 1 << 20;
            for (const int j : ones_b) best = std::min(best, std::abs(i - j));
            if (best >= w) finite = false;
            else total += best;
        }
        for (const int j : ones_b) {
            int best = 1 << 20;
            for (const int i : ones_a) best = std::min(best, std::abs(i - j));
            if (best >= w) finite = false;
            else total += best;
        }
        c.expect(ab.finite == finite, "oracle finiteness agreement");
        if (finite && ab.finite) {
            const auto cnt = static_cast<std::int64_t>(ones_a.size() + ones_b.size());
            const double want = cnt == 0 ? 0.0 : static_cast<double>(total) / cnt;
            c.expect(std::abs(ab.value() - want) < 1e-12, "oracle value agreement");
            ++oracle_checked;
        }

        // transitivity: finite (a,x) and (x,b) bound composed matches by 2w
        const auto x = random_bits(length, 0.5);
        if (tdist(view(a), view(x), w).finite && tdist(view(x), view(b), w).finite) {
            for (const int i : ones_a) {
                const auto d = min_itdist(view(b), i, 2 * w);
                c.expect(d.has_value() && *d < 2 * w, "2-omega transitivity");
            }
        }
        if (!c.ok) break;
    }
    c.note(std::to_string(oracle_checked) + " finite pairs oracle-checked");
    c.finish("tdist property suite");
}

void criterion7() {
    Criterion c(7);
    const auto params = reference_params();
    const auto ds = generate(params);

    int prev_min = 1 << 20, prev_med = 1 << 20;
    std::string counts;
    for (const std::int32_t w : {2, 4, 6, 8}) {  // omega = delta .. 4 delta
        const auto lo = cluster_tdist(ds.sequences, w, PreferenceMode::kMinimizing);
        const auto med = cluster_tdist(ds.sequences, w, PreferenceMode::kMedian);
        counts += " w" + std::to_string(w) + "=" + std::to_string(lo.cluster_count()) + "/" +
                  std::to_string(med.cluster_count());
        c.expect(lo.cluster_count() <= prev_min, "minimizing count nonincreasing in omega");
        c.expect(med.cluster_count() <= prev_med, "median count nonincreasing in omega");
        c.expect(lo.cluster_count() <= med.cluster_count(),
                 "minimizing count <= median count at every omega");
        prev_min = lo.cluster_count();
        prev_med = med.cluster_count();
    }
    c.note("min/median:" + counts);
    c.finish("monotone omega sweep");
}

void criterion8() {
    Criterion c(8);
    auto params = reference_params();
    params.seed = 7;
    const auto ds = generate(params);

    std::int64_t ones = 0, flipped = 0;
    std::int64_t windows4 = 0, lost4 = 0;
    for (std::size_t i = 0; i < ds.sequences.size(); ++i) {
        const auto& clean = ds.clean_sequences[i].bits;
        const auto& noisy = ds.sequences[i].bits;
        for (std::size_t j = 0; j < clean.size(); ++j) {
            if (!clean[j]) continue;
            ++ones;
            if (!noisy[j]) ++flipped;
        }
        for (std::size_t j = 0; j + 4 <= clean.size(); ++j) {
            bool all_clean = true, all_lost = true;
            for (std::size_t k = j; k < j + 4; ++k) {
                if (!clean[k]) all_clean = false;
                if (noisy[k]) all_lost = false;
            }
            if (!all_clean) continue;
            ++windows4;
            if (all_lost) ++lost4;
        }
    }
    const double rate = static_cast<double>(flipped) / static_cast<double>(ones);
    const double loss4 = static_cast<double>(lost4) / static_cast<double>(windows4);
    c.note("flip rate " + fmt(rate) + ", 4-bin loss " + fmt(loss4) + " over " +
           std::to_string(windows4) + " windows");
    c.expect(std::abs(rate - 0.20) <= 0.02, "flip rate 0.20 +- 0.02");
    c.expect(loss4 <= 0.005, "consecutive 4-bin loss <= 0.005");
    c.finish("generator calibration");
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    auto want = [only](int id) { return only == 0 || only == id; };

    if (want(1)) criterion1();
    if (want(2)) criterion2();
    if (want(3)) criterion3();
    if (want(4)) criterion4();
    if (want(5)) criterion5();
    if (want(6)) criterion6();
    if (want(7)) criterion7();
    if (want(8)) criterion8();

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
