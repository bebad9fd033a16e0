#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coughcount::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

// Reads a comma-separated table whose first line must equal `header`
// (whitespace around fields ignored). Blank lines are skipped. Fields may be
// double-quoted. Throws kParse naming `source` on any malformed line.
std::vector<Row> read(std::istream& in, const std::vector<std::string>& header,
                      const std::string& source);

double parse_double(std::string_view text, const std::string& where);
long long parse_int(std::string_view text, const std::string& where);

// Shortest representation that round-trips exactly.
std::string format_double(double value);
std::string format_optional(const std::optional<double>& value);

// Quotes the field only when it contains a comma, quote or newline.
std::string escape(const std::string& field);

}  // namespace coughcount::csv
