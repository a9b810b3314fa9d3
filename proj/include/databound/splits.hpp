#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "databound/dataset.hpp"
#include "databound/pattern_table.hpp"

namespace databound {

/// Train and test counts of one pattern.
struct SplitEntry {
  PatternKey key;
  Count p_train = 0;
  Count n_train = 0;
  Count p_test = 0;
  Count n_test = 0;

  std::int64_t q_train() const { return static_cast<std::int64_t>(p_train) - static_cast<std::int64_t>(n_train); }
  std::int64_t q_test() const { return static_cast<std::int64_t>(p_test) - static_cast<std::int64_t>(n_test); }
  Count pos() const { return p_train + p_test; }
  Count neg() const { return n_train + n_test; }
};

/// Patterns of a train/test division in canonical key order. Every entry
/// carries at least one sample on one side.
class SplitTable {
 public:
  SplitTable() = default;
  /// Throws DataError on duplicate keys or an entry without samples.
  explicit SplitTable(std::vector<SplitEntry> entries, std::optional<double> ratio = std::nullopt);

  /// Aligns two tables on the union of their patterns.
  static SplitTable from_tables(const PatternTable& train, const PatternTable& test);

  const std::vector<SplitEntry>& entries() const { return entries_; }
  const SplitEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  /// Train probability the split was drawn with, if it was generated.
  std::optional<double> ratio() const { return ratio_; }

  Count m() const;
  Count m_train() const;
  Count m_test() const;

  PatternTable parent() const;
  PatternTable train() const;
  PatternTable test() const;

 private:
  std::vector<SplitEntry> entries_;
  std::optional<double> ratio_;
};

struct RandomSplit {
  Dataset train;
  Dataset test;
  SplitTable table;
};

/// Sends each row to train independently with probability p. Patterns are
/// taken over all columns of `data`. Throws ArgumentError unless 0 < p < 1.
RandomSplit split_random(const Dataset& data, double p, std::uint64_t seed);

/// Same division law applied directly to pattern counts: each of the P(x)
/// and N(x) samples goes to train with probability p.
SplitTable split_table_random(const PatternTable& table, double p, std::uint64_t seed);

/// Lower bound on the sum of training loss and test error over all classifiers.
struct DeltaReport {
  double delta = 0;                 ///< (1/m) sum of per_pattern_raw
  std::vector<Count> per_pattern_raw;  ///< Delta(x) in sample counts, table order
  std::vector<double> per_pattern;  ///< Delta(x) / m
  Count raw = 0;                    ///< sum of per_pattern_raw
  bool perfect = true;              ///< Delta = 0: train and test agree in sign on every pattern
};

/// Delta(x) = 0 when Q_train * Q_test >= 0, else min{|Q_train|, |Q_test|}.
DeltaReport delta_lower_bound(const SplitTable& split);

struct ClassifierGaps {
  double delta_train = 0;  ///< training hinge loss above the minimum, / m
  double delta_test = 0;   ///< test accuracy below the maximum, / m
};

/// Gaps of the classifier assigning labeling[i] to pattern i of `split`.
/// Throws ArgumentError on a length mismatch.
ClassifierGaps delta_of_classifier(const SplitTable& split, std::span<const Label> labeling);
/// Throws ArgumentError naming any pattern missing from `labeling`.
ClassifierGaps delta_of_classifier(const SplitTable& split, const std::map<PatternKey, Label>& labeling);

/// E[min] and E[max] of X ~ Bin(pos, q) and Y ~ Bin(neg, q), independent.
struct BinomialPairMoments {
  double e_min = 0;
  double e_max = 0;
};

/// Exact up to rounding: E[min] = sum_{k>=1} P(X >= k) P(Y >= k), and
/// E[max] = q (pos + neg) - E[min]. Binomial masses come from the ratio
/// recurrence anchored at the mode, so large counts neither overflow nor
/// underflow. O(pos + neg).
BinomialPairMoments binomial_pair_moments(Count pos, Count neg, double q);

/// (1 / (m p)) sum_x E[min{P_train, N_train}] under Bernoulli(p) division.
/// m p is the expected training size; the denominator is not random.
double expected_min_hinge(const PatternTable& table, double p);
/// (1 / (m (1 - p))) sum_x E[max{P_test, N_test}].
double expected_accuracy_upper(const PatternTable& table, double p);
/// (1 / m) sum_x (E[max test] + E[max train] - max{P, N}); symmetric in p <-> 1 - p.
double expected_delta(const PatternTable& table, double p);

}  // namespace databound
