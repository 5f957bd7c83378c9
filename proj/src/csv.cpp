// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/csv.hpp"

#include <cmath>
#include <cstdio>

namespace mcasim {

std::string CsvWriter::escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string CsvWriter::format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter& CsvWriter::field(const std::string& s) {
  if (row_open_) out_ += ',';
  out_ += escape(s);
  row_open_ = true;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(std::int64_t v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(std::uint64_t v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
  out_ += '\n';
  row_open_ = false;
}

void CsvWriter::raw_row(std::initializer_list<std::string> fields) {
  for (const auto& f : fields) field(f);
  end_row();
}

}  // namespace mcasim
