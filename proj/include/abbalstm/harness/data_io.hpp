#pragma once

#include "abbalstm/series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace abbalstm::harness {

struct LabeledSeries {
    std::string label;
    TimeSeries series;
};

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::runtime_error parse_error(const std::string& source, std::size_t line, const std::string& what) {
    return std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

// Parses a whole field as a double (NaN accepted); false on junk.
inline bool parse_double(const std::string& field, double& out) {
    if (field.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(field, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == field.size();
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_fields(const std::string& line) {
    const char sep = line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return in;
}

} // namespace detail

/// UCR archive rows: class label, then samples separated by tabs (commas in
/// the older archive). Trailing NaN padding is trimmed.
inline std::vector<LabeledSeries> parse_ucr(std::istream& in, const std::string& source = "<input>") {
    std::vector<LabeledSeries> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(detail::trim(line));
        std::vector<double> values;
        for (std::size_t f = 1; f < fields.size(); ++f) {
            double v = 0.0;
            if (!detail::parse_double(fields[f], v)) {
                throw detail::parse_error(source, lineno, "bad sample '" + fields[f] + "' in column " + std::to_string(f + 1));
            }
            values.push_back(v);
        }
        while (!values.empty() && std::isnan(values.back())) values.pop_back();
        if (values.empty()) throw detail::parse_error(source, lineno, "row has no samples");
        for (double v : values) {
            if (!std::isfinite(v)) throw detail::parse_error(source, lineno, "non-finite sample before the padding");
        }
        out.push_back({fields[0], TimeSeries(std::move(values))});
    }
    if (out.empty()) throw std::runtime_error(source + ": no series found");
    return out;
}

inline std::vector<LabeledSeries> load_ucr(const std::string& path) {
    auto in = detail::open_input(path);
    return parse_ucr(in, path);
}

/// One value per line; a non-numeric first line is taken as a header.
inline TimeSeries parse_csv(std::istream& in, const std::string& source = "<input>") {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        const auto field = detail::trim(line);
        if (field.empty()) continue;
        double v = 0.0;
        const bool ok = detail::parse_double(field, v) && std::isfinite(v);
        if (!ok && first) {
            first = false;
            continue;
        }
        first = false;
        if (!ok) throw detail::parse_error(source, lineno, "expected one number, got '" + field + "'");
        values.push_back(v);
    }
    if (values.empty()) throw std::runtime_error(source + ": no values found");
    return TimeSeries(std::move(values));
}

inline TimeSeries load_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return parse_csv(in, path);
}

} // namespace abbalstm::harness
