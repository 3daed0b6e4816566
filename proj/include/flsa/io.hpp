#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace flsa {

/// Malformed or unreadable input; the message carries a line number when one
/// applies.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal string that parses back to exactly the same double.
/// Locale-independent ('.' decimal separator).
inline std::string format_double(double v) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    const auto result = std::from_chars(s.data(), s.data() + s.size(), out);
    return result.ec == std::errc() && result.ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

}  // namespace detail

/// Reads an observation vector: either one real per line, or CSV whose
/// header names a `y` column. Blank lines are skipped. Throws InputError
/// with a line number on malformed content, and on empty input.
inline std::vector<double> read_signal_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file: " + path);

    std::vector<double> y;
    std::string line;
    std::size_t line_no = 0;
    std::ptrdiff_t y_column = -1;  // -1: plain reals; >= 0: CSV column index
    bool saw_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = detail::trim(line);
        if (text.empty()) continue;

        double value;
        if (!saw_header && y.empty() && y_column < 0 && !detail::parse_double(text, value)) {
            // First content line is not a number: treat it as a CSV header.
            const auto fields = detail::split_csv(text);
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (detail::trim(fields[i]) == "y") {
                    y_column = static_cast<std::ptrdiff_t>(i);
                    break;
                }
            }
            if (y_column < 0) {
                throw InputError("line " + std::to_string(line_no) +
                                 ": header has no 'y' column and is not a number");
            }
            saw_header = true;
            continue;
        }

        if (y_column >= 0) {
            const auto fields = detail::split_csv(text);
            if (static_cast<std::size_t>(y_column) >= fields.size()) {
                throw InputError("line " + std::to_string(line_no) + ": missing 'y' field");
            }
            if (!detail::parse_double(fields[static_cast<std::size_t>(y_column)], value)) {
                throw InputError("line " + std::to_string(line_no) + ": cannot parse 'y' value");
            }
        } else if (!detail::parse_double(text, value)) {
            throw InputError("line " + std::to_string(line_no) + ": cannot parse number");
        }
        if (!std::isfinite(value)) {
            throw InputError("line " + std::to_string(line_no) + ": non-finite value");
        }
        y.push_back(value);
    }

    if (y.empty()) throw InputError("input contains no data: " + path);
    return y;
}

/// Writes `columns` as an RFC-4180-style CSV: header row, LF line endings,
/// '.' decimal separator, shortest round-trip number formatting.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<const std::vector<double>*>& columns) {
    if (header.size() != columns.size() || columns.empty()) {
        throw std::invalid_argument("write_csv: header/column mismatch");
    }
    const std::size_t rows = columns.front()->size();
    for (const auto* col : columns) {
        if (col->size() != rows) throw std::invalid_argument("write_csv: ragged columns");
    }

    std::ostringstream out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j > 0) out << ',';
        out << header[j];
    }
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j > 0) out << ',';
            out << format_double((*columns[j])[i]);
        }
        out << '\n';
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot open output file: " + path);
    file << out.str();
    if (!file) throw InputError("failed writing output file: " + path);
}

}  // namespace flsa
