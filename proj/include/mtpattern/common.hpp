#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mtpattern {

inline constexpr std::int32_t kSecondsPerDay = 86400;

// Error taxonomy maps onto CLI exit codes: InputError -> 2,
// InvariantError -> 4. Non-convergence is reported in-band.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class SchemaError : public InputError {
public:
    using InputError::InputError;
};

class InvariantError : public Error {
public:
    using Error::Error;
};

// --- calendar helpers (proleptic Gregorian, days since 1970-01-01) ---

struct CivilDate {
    int year;
    unsigned month;  // 1..12
    unsigned day;    // 1..31
};

std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

std::string format_day(std::int64_t epoch_days);            // YYYY-MM-DD
std::int64_t parse_day(std::string_view text);              // inverse of format_day

// Accepts integer epoch seconds or ISO-8601 (YYYY-MM-DDTHH:MM:SS, optional
// trailing 'Z'). Throws InputError on anything else.
std::int64_t parse_timestamp(std::string_view text);

// --- small utilities ---

std::vector<std::string_view> split(std::string_view line, char sep);

// FNV-1a, used for input digests in run sidecars.
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64_file(const std::string& path);

// Runs fn(begin, end) over [0, n) split across at most `jobs` threads.
// jobs <= 0 means hardware concurrency.
void parallel_for(std::int64_t n, int jobs,
                  const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace mtpattern
