#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ambivox::csv {

struct Row {
  std::vector<std::string> fields;
  /// 1-based physical line on which the record starts.
  std::size_t line = 0;
};

/// RFC 4180 reader: comma separated, double-quote escaping, quoted fields
/// may span lines. Lines starting with '#' outside a record are skipped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input. Throws FormatError on an
  /// unterminated quote.
  std::optional<Row> next();

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

/// Header-addressed view over a whole CSV document.
class Table {
 public:
  /// Reads the header and all rows. Throws FormatError if a row's field
  /// count differs from the header's.
  static Table read(std::istream& in, std::string_view what);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::optional<std::size_t> column(std::string_view name) const;
  /// Throws FormatError naming the missing column.
  std::size_t require_column(std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::vector<Row> rows_;
  std::string what_;
};

/// Quotes a field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Strict full-string parse. Throws FormatError with `context` on failure.
double parse_double(std::string_view text, std::string_view context);
long parse_long(std::string_view text, std::string_view context);

}  // namespace ambivox::csv
