#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stratmob::csv {

/// One parsed CSV file: header plus rows of string cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(const std::string& name) const;
};

/// Parses RFC-4180-ish CSV (quoted fields, embedded commas/quotes/newlines).
/// Throws std::runtime_error on unreadable files.
Table read_file(const std::string& path);
Table read_string(const std::string& text);

/// Quotes a cell only when needed.
std::string escape(const std::string& cell);
std::string format_row(const std::vector<std::string>& cells);

/// Writes header + rows; throws on I/O failure.
void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

/// Fixed-format double with trailing-zero trimming (display use).
std::string format_double(double v, int precision = 9);

/// Shortest representation that round-trips exactly (machine-readable files).
std::string format_exact(double v);

}  // namespace stratmob::csv
