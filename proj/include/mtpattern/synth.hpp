#pragma once

#include <cstdint>
#include <vector>

#include "mtpattern/preprocess.hpp"

namespace mtpattern {

// One planted visiting mode: a block of presence whose endpoints jitter
// normally from day to day.
struct ModeSpec {
    std::int32_t mean_start = 0;  // unit intervals
    std::int32_t mean_end = 0;    // exclusive
    double sigma_units = 4.0 / 3.0;
    double weight = 1.0;
};

struct SynthParams {
    std::vector<ModeSpec> modes;
    int n = 1000;
    double false_neg_p = 0.2;
    std::int32_t lambda_s = 450;
    std::int32_t length = 192;
    std::uint64_t seed = 1;
};

struct PlantedDataset {
    std::vector<Bis> sequences;
    std::vector<int> labels;            // sequence -> mode id
    std::vector<Bis> clean_sequences;   // pre-noise masks, for calibration
    SynthParams params;
};

// Four modes mirroring a typical day over 192 bins: three broad visiting
// patterns and one short localized one.
std::vector<ModeSpec> default_modes();

// Deterministic in (params, seed); each sequence draws from its own
// sub-seeded engine so generation order never matters.
PlantedDataset generate(const SynthParams& params);

}  // namespace mtpattern
