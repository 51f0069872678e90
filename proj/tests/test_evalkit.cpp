#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mtpattern/evalkit.hpp"

using namespace mtpattern;

namespace {

LabeledClustering lc_of(std::vector<int> pred, std::vector<int> truth) {
    return LabeledClustering{std::move(pred), std::move(truth)};
}

std::vector<int> random_labels(std::mt19937_64& rng, int n, int k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> out(n);
    for (auto& v : out) v = pick(rng);
    return out;
}

// Pair-enumeration oracle for the metrics.
ConfusionCounts pair_oracle(const LabeledClustering& lc) {
    ConfusionCounts c;
    const int n = static_cast<int>(lc.predicted.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool same_pred = lc.predicted[i] == lc.predicted[j];
            const bool same_truth = lc.truth[i] == lc.truth[j];
            if (same_pred && same_truth) ++c.tp;
            if (same_pred && !same_truth) ++c.fp;
            if (!same_pred && same_truth) ++c.fn;
            if (!same_pred && !same_truth) ++c.tn;
        }
    }
    return c;
}

}  // namespace

TEST_CASE("perfect clusterings score one") {
    const auto lc = lc_of({0, 0, 1, 1, 2}, {5, 5, 9, 9, 7});
    CHECK(purity(lc) == 1.0);
    CHECK(rand_index(lc) == 1.0);
    CHECK(f_measure(lc) == 1.0);
}

TEST_CASE("purity hand case") {
    // clusters {a,b,c} and {d}: classes a:1 b:1 c:2 d:2 -> (2+1)/4
    const auto lc = lc_of({0, 0, 0, 1}, {1, 1, 2, 2});
    CHECK(purity(lc) == doctest::Approx(0.75));
}

TEST_CASE("rand index and f-measure agree with the pair oracle") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const int n = 4 + static_cast<int>(rng() % 30);
        const auto lc = lc_of(random_labels(rng, n, 4), random_labels(rng, n, 3));
        const auto want = pair_oracle(lc);
        const auto got = ConfusionCounts::from(lc);
        CHECK(got.tp == want.tp);
        CHECK(got.tn == want.tn);
        CHECK(got.fp == want.fp);
        CHECK(got.fn == want.fn);
        CHECK(got.total() == static_cast<std::int64_t>(n) * (n - 1) / 2);
        CHECK(rand_index(lc) ==
              doctest::Approx(static_cast<double>(want.tp + want.tn) / want.total()));
        if (want.tp > 0) {
            const double p = static_cast<double>(want.tp) / (want.tp + want.fp);
            const double r = static_cast<double>(want.tp) / (want.tp + want.fn);
            const double beta2 = 4.0;
            CHECK(f_measure(lc, 2.0) ==
                  doctest::Approx((1 + beta2) * p * r / (beta2 * p + r)));
        }
    }
}

TEST_CASE("metrics are permutation invariant in cluster ids and bounded") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        const int n = 6 + static_cast<int>(rng() % 20);
        auto pred = random_labels(rng, n, 4);
        const auto truth = random_labels(rng, n, 3);
        const auto lc = lc_of(pred, truth);

        // relabel clusters by a fixed permutation
        auto relabeled = pred;
        for (auto& v : relabeled) v = (v * 7 + 3) % 29;
        const auto lc2 = lc_of(relabeled, truth);

        for (const double v : {purity(lc), rand_index(lc), f_measure(lc)}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(purity(lc) == purity(lc2));
        CHECK(rand_index(lc) == rand_index(lc2));
        CHECK(f_measure(lc) == f_measure(lc2));
    }
}

TEST_CASE("f-measure conventions") {
    // no true-positive pairs at all -> 0 by convention
    const auto lc = lc_of({0, 1}, {3, 3});
    CHECK(f_measure(lc) == 0.0);
}

TEST_CASE("accuracy score rewards deterministic agreement") {
    std::vector<std::uint8_t> bits{1, 0, 1, 1};
    const auto seq = SegmentView(bits.data(), 4, 0, 4);

    Pattern match;
    match.le = 0;
    match.ri = 4;
    match.support = 1;
    match.bin_counts = {1, 0, 1, 1};
    CHECK(accuracy_score({seq}, {0}, {match}, false) == doctest::Approx(-4.0));

    Pattern opposite;
    opposite.le = 0;
    opposite.ri = 4;
    opposite.support = 1;
    opposite.bin_counts = {0, 1, 0, 0};
    CHECK(accuracy_score({seq}, {0}, {opposite}, false) == doctest::Approx(4.0));
}

TEST_CASE("accuracy score matches a brute-force triple loop") {
    std::mt19937_64 rng(7);
    std::bernoulli_distribution bit(0.5);
    std::vector<std::vector<std::uint8_t>> rows(5, std::vector<std::uint8_t>(6, 0));
    for (auto& r : rows)
        for (auto& v : r) v = bit(rng);

    Pattern p0;
    p0.le = 0;
    p0.ri = 6;
    p0.support = 2;
    p0.bin_counts = {2, 1, 0, 2, 1, 0};
    Pattern p1;
    p1.le = 0;
    p1.ri = 6;
    p1.support = 3;
    p1.bin_counts = {0, 3, 2, 1, 0, 3};
    const std::vector<Pattern> patterns = {p0, p1};
    const std::vector<int> assign = {0, 0, 1, 1, 1};

    std::vector<SegmentView> segs;
    for (const auto& r : rows) segs.emplace_back(r.data(), 6, 0, 6);

    for (const bool normalize : {false, true}) {
        double want = 0.0;
        for (int i = 0; i < 5; ++i) {
            auto probs = patterns[assign[i]].probabilities();
            if (normalize) {
                double norm = 0.0;
                for (const double v : probs) norm += v * v;
                norm = std::sqrt(norm);
                if (norm > 0)
                    for (double& v : probs) v /= norm;
            }
            for (int j = 0; j < 6; ++j) {
                for (int c = 0; c < 2; ++c) {  // c=0 present, c=1 absent
                    const bool belongs = c == 0 ? rows[i][j] == 1 : rows[i][j] == 0;
                    const double flag = belongs ? -1.0 : 1.0;
                    const double value = c == 0 ? probs[j] : 1.0 - probs[j];
                    want += flag * value;
                }
            }
        }
        CHECK(accuracy_score(segs, assign, patterns, normalize) == doctest::Approx(want));
    }
}

TEST_CASE("min cover oracle on a diagonal-only matrix needs everyone") {
    DistanceMatrix m(5, 4, 0, 4);
    for (int i = 0; i < 5; ++i) m.set_ones(i, 1);
    const auto r = min_cover_oracle(m);
    CHECK(r.size == 5);
    CHECK(r.exemplars == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("min cover oracle solves the worked example at size two") {
    const auto m = testfx::worked_example_matrix();
    const auto r = min_cover_oracle(m);
    CHECK(r.size == 2);
    CHECK(cover_feasible(m, {2, 4}));  // the S-3 / S-5 pair is optimal
    CHECK(cover_feasible(m, r.exemplars));
}

TEST_CASE("min cover oracle matches an independent branch enumeration") {
    // Second oracle: depth-first set growth, entirely separate code path.
    struct Brute {
        static int solve(const DistanceMatrix& m) {
            const int n = m.size();
            for (int size = 1; size <= n; ++size) {
                std::vector<int> comb;
                if (grow(m, comb, -1, size)) return size;
            }
            return n;
        }
        static bool grow(const DistanceMatrix& m, std::vector<int>& comb, int last, int size) {
            if (static_cast<int>(comb.size()) == size) return cover_feasible(m, comb);
            for (int v = last + 1; v < m.size(); ++v) {
                comb.push_back(v);
                if (grow(m, comb, v, size)) return true;
                comb.pop_back();
            }
            return false;
        }
    };

    std::mt19937_64 rng(11);
    for (int t = 0; t < 60; ++t) {
        const int n = 8;
        DistanceMatrix m(n, 4, 0, 4);
        for (int i = 0; i < n; ++i) m.set_ones(i, 1);
        std::bernoulli_distribution edge(0.3);
        std::uniform_int_distribution<int> d(1, 39);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (edge(rng)) m.set(i, j, DistanceMatrix::Entry{d(rng), 10});
        const auto r = min_cover_oracle(m);
        CHECK(r.size == Brute::solve(m));
        CHECK(cover_feasible(m, r.exemplars));
    }
}

TEST_CASE("min cover oracle refuses large instances") {
    DistanceMatrix m(21, 4, 0, 4);
    CHECK_THROWS_AS(min_cover_oracle(m), InputError);
}

TEST_CASE("baselines behave at the extremes") {
    std::mt19937_64 rng(13);
    std::bernoulli_distribution bit(0.4);
    std::vector<Bis> rows;
    for (int i = 0; i < 12; ++i) {
        Bis b;
        b.lambda_s = 450;
        b.bits.assign(24, 0);
        for (auto& v : b.bits) v = bit(rng);
        rows.push_back(std::move(b));
    }
    std::vector<int> ids(12);
    for (int i = 0; i < 12; ++i) ids[i] = i;

    SUBCASE("k equal to n is perfectly pure") {
        // distinct rows required for all-singleton clusters
        for (int i = 0; i < 12; ++i) rows[i].bits[i] = 1, rows[i].bits[23 - i] = 0;
        const auto km = kmeans_baseline(rows, 12, 1);
        CHECK(purity(lc_of(km, ids)) == doctest::Approx(1.0).epsilon(0.2));
        const auto hc = hc_baseline(rows, 12);
        CHECK(purity(lc_of(hc, ids)) == 1.0);
    }
    SUBCASE("k equal to one is a single cluster") {
        const auto km = kmeans_baseline(rows, 1, 1);
        CHECK(std::all_of(km.begin(), km.end(), [&](int c) { return c == km[0]; }));
        const auto hc = hc_baseline(rows, 1);
        CHECK(std::all_of(hc.begin(), hc.end(), [&](int c) { return c == hc[0]; }));
    }
    SUBCASE("k beyond n is rejected") {
        CHECK_THROWS_AS(kmeans_baseline(rows, 13, 1), InputError);
        CHECK_THROWS_AS(hc_baseline(rows, 13), InputError);
    }
}

TEST_CASE("baselines separate well-separated blocks") {
    // two obvious groups; both baselines should find them
    std::vector<Bis> rows;
    std::vector<int> truth;
    std::mt19937_64 rng(17);
    std::bernoulli_distribution keep(0.9);
    for (int i = 0; i < 30; ++i) {
        Bis b;
        b.lambda_s = 450;
        b.bits.assign(40, 0);
        const int lo = (i % 2) ? 2 : 24;
        for (int j = lo; j < lo + 12; ++j) b.bits[j] = keep(rng);
        truth.push_back(i % 2);
        rows.push_back(std::move(b));
    }
    CHECK(purity(lc_of(kmeans_baseline(rows, 2, 3), truth)) == 1.0);
    CHECK(purity(lc_of(hc_baseline(rows, 2), truth)) == 1.0);
}
