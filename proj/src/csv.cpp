#include "databound/csv.hpp"

#include <fstream>

#include "databound/error.hpp"

namespace databound::csv {

Reader::Reader(std::istream& in, char separator) : in_(in), sep_(separator) {}

bool Reader::next(Row& row) {
  row.clear();
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return false;

  if (first_) {
    first_ = false;
    if (c == 0xEF) {
      const int b = in_.get();
      const int d = in_.get();
      if (b != 0xBB || d != 0xBF) throw DataError("malformed CSV: invalid byte order mark");
      c = in_.get();
      if (c == std::char_traits<char>::eof()) return false;
    }
  }

  record_line_ = line_;
  std::string field;
  bool quoted = false;
  bool after_quote = false;  // closing quote seen, only a separator or EOL may follow

  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        throw DataError("malformed CSV: unterminated quoted field starting on line " +
                        std::to_string(record_line_));
      }
      row.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == sep_) {
      row.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (ch == '\r' || ch == '\n') {
      if (ch == '\r' && in_.peek() == '\n') in_.get();
      ++line_;
      row.push_back(std::move(field));
      return true;
    } else if (ch == '"' && field.empty() && !after_quote) {
      quoted = true;
    } else {
      if (after_quote) {
        throw DataError("malformed CSV: unexpected character after closing quote on line " +
                        std::to_string(line_));
      }
      field.push_back(ch);
    }
  }
}

std::vector<Row> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  Reader reader(in);
  std::vector<Row> rows;
  Row row;
  while (reader.next(row)) {
    // A trailing blank line is not a record.
    if (row.size() == 1 && row[0].empty() && in.peek() == std::char_traits<char>::eof()) break;
    rows.push_back(row);
  }
  return rows;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << escape(row[i]);
  }
  out << '\n';
}

}  // namespace databound::csv
