#include "mtpattern/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace mtpattern {

std::vector<ModeSpec> default_modes() {
    // Three broad visiting patterns with staggered arrivals and a common
    // departure, plus one short localized visit. The 16-unit stagger keeps
    // the modes apart under the bounded temporal distance at omega up to
    // 8 units, while their heavy overlap keeps them entangled for plain
    // per-bin measures.
    return {
        ModeSpec{28, 160, 4.0 / 3.0, 0.26},   // early arrival
        ModeSpec{44, 160, 4.0 / 3.0, 0.26},   // mid arrival
        ModeSpec{60, 160, 4.0 / 3.0, 0.26},   // late arrival
        ModeSpec{132, 148, 4.0 / 3.0, 0.22},  // short localized visit
    };
}

PlantedDataset generate(const SynthParams& params) {
    if (params.n < 1) throw InputError("generate needs n >= 1");
    if (!(params.false_neg_p >= 0.0 && params.false_neg_p < 1.0))
        throw InputError("false_neg_p must be in [0, 1)");
    if (params.modes.empty()) throw InputError("generate needs at least one mode");
    double weight_sum = 0.0;
    for (const auto& m : params.modes) {
        if (m.mean_start >= m.mean_end) throw InputError("mode has empty mean span");
        if (!(m.sigma_units > 0.0)) throw InputError("mode sigma must be positive");
        if (!(m.weight >= 0.0)) throw InputError("mode weight must be non-negative");
        weight_sum += m.weight;
    }
    if (!(weight_sum > 0.0)) throw InputError("mode weights sum to zero");

    PlantedDataset ds;
    ds.params = params;
    ds.sequences.reserve(params.n);
    ds.labels.reserve(params.n);

    const std::int32_t length = params.length;
    for (int idx = 0; idx < params.n; ++idx) {
        // Independent engine per sequence keyed on (seed, index).
        std::seed_seq sseq{params.seed, static_cast<std::uint64_t>(idx) + 1};
        std::mt19937_64 rng(sseq);

        std::uniform_real_distribution<double> pick(0.0, weight_sum);
        double roll = pick(rng);
        std::size_t mode_id = 0;
        for (; mode_id + 1 < params.modes.size(); ++mode_id) {
            roll -= params.modes[mode_id].weight;
            if (roll < 0.0) break;
        }
        const ModeSpec& mode = params.modes[mode_id];

        std::normal_distribution<double> start_jitter(mode.mean_start, mode.sigma_units);
        std::normal_distribution<double> end_jitter(mode.mean_end, mode.sigma_units);
        std::int32_t start = 0, end = 0;
        bool ok = false;
        for (int attempt = 0; attempt < 16; ++attempt) {
            start = static_cast<std::int32_t>(std::lround(start_jitter(rng)));
            end = static_cast<std::int32_t>(std::lround(end_jitter(rng)));
            start = std::clamp(start, 0, length - 1);
            end = std::clamp(end, 1, length);
            if (start < end) {
                ok = true;
                break;
            }
        }
        if (!ok) {  // degenerate draw: clamp to a 1-unit interval at the mean
            start = std::clamp(mode.mean_start, 0, length - 1);
            end = start + 1;
        }

        char name[16];
        std::snprintf(name, sizeof(name), "s%05d", idx);
        Bis clean;
        clean.subject_id = name;
        clean.day = 0;
        clean.lambda_s = params.lambda_s;
        clean.bits.assign(length, 0);
        for (std::int32_t b = start; b < end; ++b) clean.bits[b] = 1;

        Bis noisy = clean;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::int32_t b = 0; b < length; ++b)
            if (noisy.bits[b] && unit(rng) < params.false_neg_p) noisy.bits[b] = 0;

        ds.labels.push_back(static_cast<int>(mode_id));
        ds.clean_sequences.push_back(std::move(clean));
        ds.sequences.push_back(std::move(noisy));
    }
    return ds;
}

}  // namespace mtpattern
