#include "mtpattern/preprocess.hpp"

#include <algorithm>

namespace mtpattern {

IntervalSequence sessionize(const PointSequence& ps, std::int64_t delta_s) {
    if (delta_s <= 0) throw InputError("delta must be positive");
    IntervalSequence is;
    is.subject_id = ps.subject_id;
    is.day = ps.day;
    if (ps.seconds.empty()) return is;

    std::int32_t first = ps.seconds.front();
    std::int32_t last = first;
    for (std::size_t i = 1; i < ps.seconds.size(); ++i) {
        const std::int32_t t = ps.seconds[i];
        if (static_cast<std::int64_t>(t) - last <= delta_s) {
            last = t;
        } else {
            is.intervals.emplace_back(first, last + 1);
            first = t;
            last = t;
        }
    }
    is.intervals.emplace_back(first, last + 1);
    return is;
}

Bis discretize(const IntervalSequence& is, std::int32_t lambda_s,
               std::int32_t day_length_s) {
    if (lambda_s <= 0) throw InputError("lambda must be positive");
    Bis bis;
    bis.subject_id = is.subject_id;
    bis.day = is.day;
    bis.lambda_s = lambda_s;
    bis.bits.assign(bis_length(lambda_s, day_length_s), 0);
    const auto length = static_cast<std::int32_t>(bis.bits.size());
    for (const auto& [start, end] : is.intervals) {
        if (start >= end) throw InvariantError("empty interval in interval sequence");
        const std::int32_t lo = std::max<std::int32_t>(0, start / lambda_s);
        const std::int32_t hi =
            std::min<std::int32_t>(length - 1, (end - 1) / lambda_s);
        for (std::int32_t j = lo; j <= hi; ++j) bis.bits[j] = 1;
    }
    return bis;
}

}  // namespace mtpattern
