#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ufn {

// One measured or checked quantity.  `pass` must be consistent with how
// `value` relates to `bound` for the metric's direction (documented per row
// by the experiment that emits it).  Exact rows carry err = 0 and are
// serialized with "exact" in the err column.
struct ReportRow {
    uint32_t N = 0;
    std::string metric;
    double value = 0.0;
    bool exact = false;
    double err = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> params;  // insertion order
    uint64_t seed = 0;
    std::vector<ReportRow> rows;
    double wall_clock_seconds = 0.0;
    bool include_timestamp = true;  // --no-timestamp clears this

    void add_param(const std::string& key, const std::string& value);
    void add_row(uint32_t N, const std::string& metric, double value,
                 bool exact, double err, double bound, bool pass);

    bool pass() const;  // true iff every row passes
    std::string to_json() const;
    std::string to_csv() const;
};

// Shortest decimal form that round-trips; shared by JSON and CSV so both
// serializations carry identical numeric text.
std::string format_double(double v);

// Decimal form of a 128-bit count (exact rational numerators).
std::string format_u128(unsigned __int128 v);

// Writes via a temp file in the same directory plus rename, so a failed run
// never leaves a partial file at `path`.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ufn
