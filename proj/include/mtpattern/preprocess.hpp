#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mtpattern/ingest.hpp"

namespace mtpattern {

// Presence intervals for one (individual, day); half-open seconds, sorted,
// pairwise disjoint.
struct IntervalSequence {
    std::string subject_id;
    std::int64_t day = 0;
    std::vector<std::pair<std::int32_t, std::int32_t>> intervals;
};

// Discretized interval sequence: one bit per unit interval of width
// lambda seconds. 1 = deterministic presence, 0 = absent or undetected.
struct Bis {
    std::string subject_id;
    std::int64_t day = 0;
    std::int32_t lambda_s = 450;
    std::vector<std::uint8_t> bits;
};

inline std::int32_t bis_length(std::int32_t lambda_s,
                               std::int32_t day_length_s = kSecondsPerDay) {
    return (day_length_s + lambda_s - 1) / lambda_s;
}

// Merges consecutive detections with gap <= delta into one interval; an
// isolated detection at t becomes [t, t+1).
IntervalSequence sessionize(const PointSequence& ps, std::int64_t delta_s);

// Bit j is set iff [j*lambda, (j+1)*lambda) overlaps any interval.
Bis discretize(const IntervalSequence& is, std::int32_t lambda_s,
               std::int32_t day_length_s = kSecondsPerDay);

}  // namespace mtpattern
