// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace mcasim {

// RFC-4180-style CSV assembly: comma separated, CRLF-free ('\n' rows),
// fields quoted only when they contain a comma, quote or newline. Numbers
// print with '.' as the decimal separator regardless of locale.
class CsvWriter {
 public:
  void header(std::initializer_list<std::string> columns) { raw_row(columns); }

  CsvWriter& field(const std::string& s);
  CsvWriter& field(double v);
  CsvWriter& field(std::int64_t v);
  CsvWriter& field(std::uint64_t v);
  CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
  void end_row();

  const std::string& str() const { return out_; }

  static std::string escape(const std::string& s);
  static std::string format_double(double v);

 private:
  void raw_row(std::initializer_list<std::string> fields);

  std::string out_;
  bool row_open_ = false;
};

}  // namespace mcasim
