#pragma once

#include <utility>
#include <vector>

#include "mtpattern/tdist.hpp"

namespace mtpattern::testfx {

// The seven-sequence worked example. Finite structure matches the listed
// coverings; values are chosen so the tight coverings (S-1, S-3, S-5, S-6)
// survive pruning, ties in the final assignment resolve toward S-3, and
// the second cluster settles on S-5 rather than S-2.
inline DistanceMatrix worked_example_matrix() {
    DistanceMatrix m(7, 4, 0, 16);
    for (int i = 0; i < 7; ++i) m.set_ones(i, 4);
    auto set = [&m](int i, int j, double value) {
        m.set(i, j, DistanceMatrix::Entry{static_cast<std::int64_t>(value * 10), 10});
    };
    set(0, 2, 0.3);  // S-1, S-3
    set(0, 4, 3.0);  // S-1, S-5
    set(0, 5, 0.1);  // S-1, S-6
    set(0, 6, 0.1);  // S-1, S-7
    set(1, 4, 0.5);  // S-2, S-5
    set(2, 3, 0.3);  // S-3, S-4
    set(2, 4, 3.2);  // S-3, S-5
    set(2, 5, 0.3);  // S-3, S-6
    set(2, 6, 0.3);  // S-3, S-7
    set(3, 4, 2.5);  // S-4, S-5
    set(3, 5, 0.4);  // S-4, S-6
    set(4, 6, 2.8);  // S-5, S-7
    return m;
}

// Coverings listed in the worked example, 0-indexed.
inline std::vector<std::vector<int>> worked_example_coverings() {
    return {{0, 2, 4, 5, 6}, {1, 4},          {0, 2, 3, 4, 5, 6}, {2, 3, 4, 5},
            {0, 1, 2, 3, 4, 6}, {0, 2, 3, 5}, {0, 2, 4, 6}};
}

}  // namespace mtpattern::testfx
