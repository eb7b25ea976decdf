#pragma once

// Minimal delimited-table reading and writing for the command line tool.

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace klconc::cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or nullopt.
  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g; non-finite values print as nan, inf, -inf.
std::string format_number(double x);
/// Empty string for nullopt.
std::string format_optional(std::optional<double> x);

/// Writes header and rows separated by `sep`, '\n' line endings. Fields
/// containing the separator, quotes or newlines are quoted.
void write_table(std::ostream& os, const Table& t, char sep = ',');

/// RFC-4180 style parse (quoted fields, "" escapes, CRLF tolerated). The
/// first record is the header; throws TableError on ragged rows.
Table parse_csv(std::string_view text, char sep = ',');

}  // namespace klconc::cli
