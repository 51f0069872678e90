#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtpattern/common.hpp"

namespace mtpattern {

struct SensorRecord {
    std::string device_id;
    std::string subject_id;   // anonymized upstream
    std::int64_t timestamp;   // seconds since epoch
    std::optional<int> rssi;  // dBm
    std::optional<double> latitude;
    std::optional<double> longitude;
};

// Detection timestamps of one individual on one day, as seconds within
// the day, strictly increasing.
struct PointSequence {
    std::string subject_id;
    std::int64_t day = 0;  // days since epoch
    std::vector<std::int32_t> seconds;
};

using SequenceKey = std::pair<std::string, std::int64_t>;

struct GapHistogram {
    std::vector<std::int64_t> gaps;  // positive inter-packet deltas, seconds
};

// Column mapping for delimited trace files. Delimiter 0 means autodetect
// (comma vs tab, from the header row).
struct TraceSchema {
    std::string subject_col = "subject";
    std::string timestamp_col = "timestamp";
    std::optional<std::string> rssi_col;
    std::optional<std::string> device_col;
    char delimiter = 0;
};

struct ParseStats {
    std::size_t rows = 0;     // data rows seen
    std::size_t skipped = 0;  // malformed rows dropped
};

// Reads a header-first delimited trace. Malformed rows are counted and
// skipped; more than 50% malformed rows is a SchemaError.
std::vector<SensorRecord> parse_trace(std::istream& in, const TraceSchema& schema,
                                      ParseStats* stats = nullptr);

struct SequenceStats {
    std::size_t duplicates = 0;  // records collapsed by set semantics
};

// Partitions records into per-(subject, day) sequences; timestamps are
// deduplicated and sorted. Day boundaries fall at local midnight for the
// given fixed UTC offset.
std::map<SequenceKey, PointSequence> build_point_sequences(
    const std::vector<SensorRecord>& records, std::int32_t utc_offset_s = 0,
    SequenceStats* stats = nullptr);

GapHistogram gap_histogram(const std::map<SequenceKey, PointSequence>& sequences);
GapHistogram gap_histogram_for_subject(const std::map<SequenceKey, PointSequence>& sequences,
                                       const std::string& subject_id);

// Smallest gap g such that the fraction of gaps <= g is at least
// `quantile`. Throws InputError on an empty histogram.
std::int64_t estimate_delta(const GapHistogram& hist, double quantile = 0.95);

}  // namespace mtpattern
