#include "ambivox/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ambivox/error.hpp"

namespace ambivox::csv {

std::optional<Row> Reader::next() {
  std::string line;
  while (true) {
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    break;
  }

  Row row;
  row.line = line_;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!quoted) break;
      // Quoted field continues on the next physical line.
      if (!std::getline(in_, line)) {
        throw FormatError("line " + std::to_string(row.line) + ": unterminated quoted field");
      }
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      field.push_back('\n');
      i = 0;
      continue;
    }
    const char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  row.fields.push_back(std::move(field));
  return row;
}

Table Table::read(std::istream& in, std::string_view what) {
  Table t;
  t.what_ = what;
  Reader reader(in);
  auto header = reader.next();
  if (!header) throw FormatError(std::string(what) + ": missing header line");
  t.header_ = std::move(header->fields);
  for (auto& h : t.header_) {
    h.erase(0, h.find_first_not_of(" \t"));
    h.erase(h.find_last_not_of(" \t") + 1);
  }
  // Strip a UTF-8 byte order mark.
  if (!t.header_.empty() && t.header_[0].rfind("\xEF\xBB\xBF", 0) == 0) t.header_[0].erase(0, 3);
  while (auto row = reader.next()) {
    if (row->fields.size() != t.header_.size()) {
      throw FormatError(std::string(what) + " line " + std::to_string(row->line) + ": expected " +
                        std::to_string(t.header_.size()) + " fields, found " +
                        std::to_string(row->fields.size()));
    }
    t.rows_.push_back(std::move(*row));
  }
  return t;
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  const auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header_.begin());
}

std::size_t Table::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw FormatError(what_ + " line 1: missing column '" + std::string(name) + "'");
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view context) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw FormatError(std::string(context) + ": invalid number '" + std::string(text) + "'");
  }
  return v;
}

long parse_long(std::string_view text, std::string_view context) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw FormatError(std::string(context) + ": invalid integer '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace ambivox::csv
