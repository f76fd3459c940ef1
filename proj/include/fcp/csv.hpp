#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fcp/types.hpp"

namespace fcp {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_number(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    std::size_t end = s.find_last_not_of(" \t\r");
    if (begin == std::string::npos) throw validation_error("empty numeric field");
    const char* first = s.data() + begin;
    const char* last = s.data() + end + 1;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw validation_error("cannot parse number: '" + s + "'");
    return value;
}

// Shortest round-trip decimal representation; keeps exports byte-stable.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace detail

/// Parses the `t,x1,...,xd,y` format. Rows need not be pre-sorted.
inline Series read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw empty_input("empty CSV");
    // Header row is required; tolerate a UTF-8 BOM.
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
    auto header = detail::split_csv_line(line);
    if (header.size() < 3 || header.front() != "t" || header.back() != "y")
        throw validation_error("expected header t,x1,...,xd,y");
    const std::size_t d = header.size() - 2;
    std::vector<RawRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != d + 2)
            throw dimension_mismatch("line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(d + 2) + " fields");
        RawRow r;
        r.t_label = detail::parse_number(fields.front());
        r.x.reserve(d);
        for (std::size_t j = 1; j + 1 < fields.size(); ++j)
            r.x.push_back(detail::parse_number(fields[j]));
        r.y = detail::parse_number(fields.back());
        rows.push_back(std::move(r));
    }
    return validate_series(std::move(rows));
}

inline Series read_series_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    return read_series_csv(in);
}

inline void write_series_csv(std::ostream& out, const Series& series) {
    out << "t";
    for (std::size_t j = 1; j <= series.d; ++j) out << ",x" << j;
    out << ",y\n";
    for (std::size_t i = 0; i < series.n(); ++i) {
        out << detail::format_double(series.labels[i]);
        for (double v : series.obs[i].x) out << ',' << detail::format_double(v);
        out << ',' << detail::format_double(series.obs[i].y) << '\n';
    }
}

}  // namespace fcp
