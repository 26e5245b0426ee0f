#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace faircompass {

using CsvRow = std::vector<std::string>;

// RFC 4180 reader: quoted fields may contain delimiters, doubled quotes and
// line breaks. Accepts LF or CRLF record terminators. Blank lines are skipped.
std::vector<CsvRow> parse_csv(std::string_view text, char delimiter = ',');

// Quotes a field only when it contains the delimiter, a quote, CR or LF.
std::string csv_field(std::string_view field, char delimiter = ',');
std::string csv_line(const CsvRow& row, char delimiter = ',');

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);
std::optional<double> parse_number(std::string_view text);

std::string trim(std::string_view text);

std::string sha256_hex(std::string_view data);

// UTC wall clock as 2024-05-01T12:00:00Z.
std::string utc_timestamp_now();

}  // namespace faircompass
