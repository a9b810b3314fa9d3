#include "databound/pattern_table.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "databound/csv.hpp"
#include "databound/error.hpp"

namespace databound {

std::size_t PatternKeyHash::operator()(const PatternKey& key) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& token : key) {
    h ^= std::hash<std::string>{}(token) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

PatternTable::PatternTable(std::vector<PatternEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const PatternEntry& a, const PatternEntry& b) { return a.key < b.key; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.total() == 0) throw DataError("pattern '" + join_key(e.key) + "' has zero samples");
    if (i > 0 && entries_[i - 1].key == e.key) {
      throw DataError("duplicate pattern '" + join_key(e.key) + "'");
    }
    n_plus_ += e.pos;
    n_minus_ += e.neg;
  }
}

void PatternTable::require_both_classes() const {
  if (!has_both_classes()) throw SingleClassError();
}

void PatternTable::require_nonempty() const {
  if (m() == 0) throw DataError("empty pattern table");
}

std::optional<std::size_t> PatternTable::find(const PatternKey& key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const PatternEntry& e, const PatternKey& k) { return e.key < k; });
  if (it == entries_.end() || it->key != key) return std::nullopt;
  return static_cast<std::size_t>(it - entries_.begin());
}

bool operator==(const PatternEntry& a, const PatternEntry& b) {
  return a.key == b.key && a.pos == b.pos && a.neg == b.neg;
}

bool operator==(const PatternTable& a, const PatternTable& b) { return a.entries_ == b.entries_; }

void PatternTableBuilder::add(const PatternKey& key, Label label, Count n) {
  auto& c = counts_[key];
  (label == Label::positive ? c.first : c.second) += n;
}

void PatternTableBuilder::add(const PatternKey& key, Count pos, Count neg) {
  auto& c = counts_[key];
  c.first += pos;
  c.second += neg;
}

void PatternTableBuilder::merge(const PatternTableBuilder& other) {
  for (const auto& [key, c] : other.counts_) add(key, c.first, c.second);
}

PatternTable PatternTableBuilder::build() const {
  std::vector<PatternEntry> entries;
  entries.reserve(counts_.size());
  for (const auto& [key, c] : counts_) {
    if (c.first + c.second > 0) entries.push_back({key, c.first, c.second});
  }
  return PatternTable(std::move(entries));
}

std::string join_key(const PatternKey& key) {
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i].find('|') != std::string::npos) {
      throw DataError("token '" + key[i] + "' contains the pattern separator '|'");
    }
    if (i) out.push_back('|');
    out += key[i];
  }
  return out;
}

PatternKey split_key(const std::string& joined) {
  PatternKey key;
  std::size_t start = 0;
  for (;;) {
    const auto pos = joined.find('|', start);
    if (pos == std::string::npos) {
      key.push_back(joined.substr(start));
      return key;
    }
    key.push_back(joined.substr(start, pos - start));
    start = pos + 1;
  }
}

void write_pattern_table_csv(std::ostream& out, const PatternTable& table) {
  out << "pattern,pos,neg\n";
  for (const auto& e : table.entries()) {
    csv::write_row(out, {join_key(e.key), std::to_string(e.pos), std::to_string(e.neg)});
  }
}

namespace {

Count parse_count(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (s.empty() || s[0] == '-' || s[0] == '+') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line) + ": invalid count '" + s + "'");
  }
  if (used != s.size()) throw DataError("line " + std::to_string(line) + ": invalid count '" + s + "'");
  return static_cast<Count>(v);
}

}  // namespace

PatternTable read_pattern_table_csv(std::istream& in) {
  csv::Reader reader(in);
  csv::Row row;
  if (!reader.next(row)) throw DataError("pattern table: no rows");
  if (row != csv::Row{"pattern", "pos", "neg"}) {
    throw DataError("pattern table: expected header 'pattern,pos,neg'");
  }
  PatternTableBuilder builder;
  std::vector<PatternKey> seen;
  std::size_t rows = 0;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 3) {
      throw DataError("pattern table line " + std::to_string(reader.line()) + ": expected 3 fields");
    }
    builder.add(split_key(row[0]), parse_count(row[1], reader.line()), parse_count(row[2], reader.line()));
    ++rows;
  }
  if (rows == 0) throw DataError("pattern table: no rows");
  auto table = builder.build();
  if (table.size() != rows) throw DataError("pattern table: duplicate or empty pattern rows");
  return table;
}

PatternTable read_pattern_table_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return read_pattern_table_csv(in);
}

nlohmann::json pattern_table_to_json(const PatternTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : table.entries()) {
    entries.push_back({{"pattern", join_key(e.key)}, {"pos", e.pos}, {"neg", e.neg}});
  }
  return {{"entries", std::move(entries)},
          {"n_plus", table.n_plus()},
          {"n_minus", table.n_minus()},
          {"m", table.m()}};
}

PatternTable pattern_table_from_json(const nlohmann::json& j) {
  try {
    std::vector<PatternEntry> entries;
    for (const auto& e : j.at("entries")) {
      entries.push_back({split_key(e.at("pattern").get<std::string>()), e.at("pos").get<Count>(),
                         e.at("neg").get<Count>()});
    }
    PatternTable table(std::move(entries));
    if (j.contains("n_plus") && j.at("n_plus").get<Count>() != table.n_plus()) {
      throw DataError("pattern table JSON: n_plus does not match entries");
    }
    if (j.contains("n_minus") && j.at("n_minus").get<Count>() != table.n_minus()) {
      throw DataError("pattern table JSON: n_minus does not match entries");
    }
    return table;
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("pattern table JSON: ") + ex.what());
  }
}

}  // namespace databound
