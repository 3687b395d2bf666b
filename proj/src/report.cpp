#include "ufn/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace ufn {
namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (uint8_t(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void append_row_json(std::string& out, const ReportRow& row) {
    out += "    {\"N\": ";
    out += std::to_string(row.N);
    out += ", \"metric\": \"";
    out += json_escape(row.metric);
    out += "\", \"value\": ";
    out += format_double(row.value);
    out += ", \"err\": ";
    if (row.exact) {
        out += "\"exact\"";
    } else {
        out += format_double(row.err);
    }
    out += ", \"bound\": ";
    out += format_double(row.bound);
    out += ", \"pass\": ";
    out += row.pass ? "true" : "false";
    out += "}";
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf.data(), ptr);
}

std::string format_u128(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v != 0) {
        out += char('0' + int(v % 10));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void ExperimentReport::add_param(const std::string& key,
                                 const std::string& value) {
    params.emplace_back(key, value);
}

void ExperimentReport::add_row(uint32_t row_n, const std::string& metric,
                               double value, bool exact, double err,
                               double bound, bool pass) {
    rows.push_back(ReportRow{row_n, metric, value, exact, err, bound, pass});
}

bool ExperimentReport::pass() const {
    for (const ReportRow& row : rows) {
        if (!row.pass) return false;
    }
    return true;
}

std::string ExperimentReport::to_json() const {
    std::string out = "{\n  \"experiment\": \"";
    out += json_escape(experiment);
    out += "\",\n  \"params\": {";
    bool first = true;
    for (const auto& [key, value] : params) {
        if (!first) out += ", ";
        first = false;
        out += "\"" + json_escape(key) + "\": \"" + json_escape(value) + "\"";
    }
    out += "},\n  \"seed\": ";
    out += std::to_string(seed);
    out += ",\n  \"rows\": [\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        append_row_json(out, rows[i]);
        if (i + 1 < rows.size()) out += ",";
        out += "\n";
    }
    out += "  ]";
    if (include_timestamp) {
        out += ",\n  \"wall_clock_seconds\": ";
        out += format_double(wall_clock_seconds);
        out += ",\n  \"timestamp\": \"" + utc_timestamp() + "\"";
    }
    out += "\n}\n";
    return out;
}

std::string ExperimentReport::to_csv() const {
    std::string out = "N,metric,value,err,bound,pass\n";
    for (const ReportRow& row : rows) {
        out += std::to_string(row.N);
        out += ",";
        out += row.metric;
        out += ",";
        out += format_double(row.value);
        out += ",";
        out += row.exact ? "exact" : format_double(row.err);
        out += ",";
        out += format_double(row.bound);
        out += ",";
        out += row.pass ? "true" : "false";
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move report into place at " + path);
    }
}

}  // namespace ufn
