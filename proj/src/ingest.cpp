#include "mtpattern/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace mtpattern {

namespace {

int find_column(const std::vector<std::string_view>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

bool parse_int_field(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<SensorRecord> parse_trace(std::istream& in, const TraceSchema& schema,
                                      ParseStats* stats) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("trace source is empty or unreadable");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    char delim = schema.delimiter;
    if (delim == 0) delim = line.find('\t') != std::string::npos ? '\t' : ',';

    const auto header = split(line, delim);
    const int subject_idx = find_column(header, schema.subject_col);
    const int ts_idx = find_column(header, schema.timestamp_col);
    if (subject_idx < 0)
        throw SchemaError("missing subject column '" + schema.subject_col + "'");
    if (ts_idx < 0)
        throw SchemaError("missing timestamp column '" + schema.timestamp_col + "'");
    const int rssi_idx = schema.rssi_col ? find_column(header, *schema.rssi_col) : -1;
    const int device_idx = schema.device_col ? find_column(header, *schema.device_col) : -1;

    std::vector<SensorRecord> records;
    ParseStats local;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++local.rows;
        const auto fields = split(line, delim);
        const int needed = std::max(subject_idx, ts_idx);
        if (static_cast<int>(fields.size()) <= needed) {
            ++local.skipped;
            continue;
        }
        SensorRecord rec;
        rec.subject_id = std::string(fields[subject_idx]);
        if (rec.subject_id.empty()) {
            ++local.skipped;
            continue;
        }
        try {
            rec.timestamp = parse_timestamp(fields[ts_idx]);
        } catch (const InputError&) {
            ++local.skipped;
            continue;
        }
        if (rec.timestamp < 0) {
            ++local.skipped;
            continue;
        }
        if (device_idx >= 0 && device_idx < static_cast<int>(fields.size()))
            rec.device_id = std::string(fields[device_idx]);
        if (rssi_idx >= 0 && rssi_idx < static_cast<int>(fields.size())) {
            int rssi = 0;
            if (parse_int_field(fields[rssi_idx], rssi)) rec.rssi = rssi;
        }
        records.push_back(std::move(rec));
    }

    if (local.rows > 0 && local.skipped * 2 > local.rows)
        throw SchemaError("more than half of the rows are malformed (" +
                          std::to_string(local.skipped) + "/" + std::to_string(local.rows) +
                          "); check the column mapping");
    if (stats) *stats = local;
    return records;
}

std::map<SequenceKey, PointSequence> build_point_sequences(
    const std::vector<SensorRecord>& records, std::int32_t utc_offset_s,
    SequenceStats* stats) {
    std::map<SequenceKey, std::vector<std::int32_t>> buckets;
    for (const auto& rec : records) {
        const std::int64_t local = rec.timestamp + utc_offset_s;
        std::int64_t day = local / kSecondsPerDay;
        if (local < 0 && local % kSecondsPerDay != 0) --day;  // floor
        const auto in_day = static_cast<std::int32_t>(local - day * kSecondsPerDay);
        buckets[{rec.subject_id, day}].push_back(in_day);
    }
    std::map<SequenceKey, PointSequence> out;
    SequenceStats local_stats;
    for (auto& [key, seconds] : buckets) {
        std::sort(seconds.begin(), seconds.end());
        const auto last = std::unique(seconds.begin(), seconds.end());
        local_stats.duplicates += static_cast<std::size_t>(seconds.end() - last);
        seconds.erase(last, seconds.end());
        PointSequence ps;
        ps.subject_id = key.first;
        ps.day = key.second;
        ps.seconds = std::move(seconds);
        out.emplace(key, std::move(ps));
    }
    if (stats) *stats = local_stats;
    return out;
}

GapHistogram gap_histogram(const std::map<SequenceKey, PointSequence>& sequences) {
    GapHistogram hist;
    for (const auto& [key, ps] : sequences)
        for (std::size_t i = 1; i < ps.seconds.size(); ++i)
            hist.gaps.push_back(static_cast<std::int64_t>(ps.seconds[i]) - ps.seconds[i - 1]);
    return hist;
}

GapHistogram gap_histogram_for_subject(const std::map<SequenceKey, PointSequence>& sequences,
                                       const std::string& subject_id) {
    GapHistogram hist;
    for (const auto& [key, ps] : sequences) {
        if (key.first != subject_id) continue;
        for (std::size_t i = 1; i < ps.seconds.size(); ++i)
            hist.gaps.push_back(static_cast<std::int64_t>(ps.seconds[i]) - ps.seconds[i - 1]);
    }
    return hist;
}

std::int64_t estimate_delta(const GapHistogram& hist, double quantile) {
    if (hist.gaps.empty()) throw InputError("cannot estimate delta from an empty gap histogram");
    if (!(quantile > 0.0 && quantile <= 1.0))
        throw InputError("delta quantile must be in (0, 1]");
    std::vector<std::int64_t> sorted = hist.gaps;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(quantile * n));
    if (rank == 0) rank = 1;
    return sorted[rank - 1];
}

}  // namespace mtpattern
