#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace databound::csv {

using Row = std::vector<std::string>;

/// RFC-4180 reader: quoted fields, doubled quotes, embedded separators and
/// newlines, CRLF or LF line endings. A UTF-8 BOM on the first line is skipped.
class Reader {
 public:
  explicit Reader(std::istream& in, char separator = ',');

  /// Reads the next record. Returns false at end of input.
  /// Throws DataError on an unterminated quoted field.
  bool next(Row& row);

  /// 1-based physical line number where the last record returned started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  char sep_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

/// Reads a whole file into records. Throws DataError if the file cannot be opened.
std::vector<Row> read_file(const std::string& path);

/// Quotes a field if it contains a separator, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const Row& row);

}  // namespace databound::csv
