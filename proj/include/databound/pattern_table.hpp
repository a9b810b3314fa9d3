#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace databound {

using Count = std::uint64_t;

/// Binary class label.
enum class Label : std::int8_t { negative = -1, positive = 1 };

/// A distinct feature vector, one token per selected column.
using PatternKey = std::vector<std::string>;

struct PatternKeyHash {
  std::size_t operator()(const PatternKey& key) const noexcept;
};

/// One distinct pattern x with its class counts P(x) and N(x).
struct PatternEntry {
  PatternKey key;
  Count pos = 0;
  Count neg = 0;

  Count total() const { return pos + neg; }
  /// Fraction of positives among samples carrying this pattern.
  double p_plus() const { return static_cast<double>(pos) / static_cast<double>(pos + neg); }
  double p_minus() const { return static_cast<double>(neg) / static_cast<double>(pos + neg); }
};

/// Distinct patterns with positive/negative counts, ordered lexicographically
/// by key. This is the only input every bound formula needs.
///
/// Invariants: keys pairwise distinct, every entry has pos + neg >= 1, and the
/// totals are the column sums of the entries. Immutable after construction.
class PatternTable {
 public:
  PatternTable() = default;

  /// Sorts entries into canonical order. Throws DataError on a duplicate key
  /// or an entry with zero total count.
  explicit PatternTable(std::vector<PatternEntry> entries);

  const std::vector<PatternEntry>& entries() const { return entries_; }
  const PatternEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Count n_plus() const { return n_plus_; }
  Count n_minus() const { return n_minus_; }
  Count m() const { return n_plus_ + n_minus_; }

  bool has_both_classes() const { return n_plus_ > 0 && n_minus_ > 0; }
  /// Throws SingleClassError unless both classes are present.
  void require_both_classes() const;
  /// Throws DataError if the table holds no samples.
  void require_nonempty() const;

  std::optional<std::size_t> find(const PatternKey& key) const;

  friend bool operator==(const PatternTable& a, const PatternTable& b);

 private:
  std::vector<PatternEntry> entries_;
  Count n_plus_ = 0;
  Count n_minus_ = 0;
};

bool operator==(const PatternEntry& a, const PatternEntry& b);

/// Commutative, associative count accumulator. Partial builders over row
/// shards may be merged in any order and yield the same table.
class PatternTableBuilder {
 public:
  void add(const PatternKey& key, Label label, Count n = 1);
  void add(const PatternKey& key, Count pos, Count neg);
  void merge(const PatternTableBuilder& other);
  PatternTable build() const;

 private:
  std::unordered_map<PatternKey, std::pair<Count, Count>, PatternKeyHash> counts_;
};

// Serialization. Patterns are written as their tokens joined by '|'.

/// Joins key tokens with '|'. Throws DataError if a token contains '|'.
std::string join_key(const PatternKey& key);
PatternKey split_key(const std::string& joined);

/// CSV with header `pattern,pos,neg`, rows in canonical order.
void write_pattern_table_csv(std::ostream& out, const PatternTable& table);
PatternTable read_pattern_table_csv(std::istream& in);
PatternTable read_pattern_table_csv_file(const std::string& path);

/// JSON object with fields `entries` ([{pattern,pos,neg}]), `n_plus`, `n_minus`, `m`.
nlohmann::json pattern_table_to_json(const PatternTable& table);
PatternTable pattern_table_from_json(const nlohmann::json& j);

}  // namespace databound
