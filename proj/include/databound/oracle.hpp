#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "databound/pattern_table.hpp"
#include "databound/splits.hpp"

namespace databound::oracle {

/// Enumeration limits; exceeding one throws BudgetExceeded.
struct OracleBudget {
  std::size_t max_patterns_orderings = 8;   ///< d! orderings
  std::size_t max_patterns_labelings = 12;  ///< 2^d labelings
  std::uint64_t max_outcomes = 1000000;     ///< binomial double-sum terms per pattern
};

/// An exact rational result num / den together with its double value.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct BestOrdering {
  Fraction auc;
  std::vector<std::size_t> ordering;  ///< first maximizer in lexicographic permutation order
};

/// Maximum over all d! pattern orderings of the AUC, counted pair by pair
/// over individual positive/negative samples (ties earn half).
BestOrdering brute_best_auc(const PatternTable& table, const OracleBudget& budget = {});

/// Maximum over all 2^d labelings of the fraction classified correctly.
Fraction brute_best_accuracy(const PatternTable& table, const OracleBudget& budget = {});
/// Minimum over all 2^d labelings of the mean hinge loss of a +-1 classifier,
/// scaled by 1/2 so a misclassified sample costs 1.
Fraction brute_min_hinge(const PatternTable& table, const OracleBudget& budget = {});

/// Maximum over orderings of the trapezoidal PR area. Samples inside a
/// pattern are tied, so each of the w samples of a pattern adds P/w expected
/// true positives; precision at recall 0 is P/w of the first pattern.
double brute_best_pr_area(const PatternTable& table, const OracleBudget& budget = {});

/// Minimum over all 2^d labelings of (training loss above its minimum) +
/// (test correct count below its maximum), in samples.
std::uint64_t brute_min_delta_raw(const SplitTable& split, const OracleBudget& budget = {});
/// brute_min_delta_raw / m.
double brute_min_delta(const SplitTable& split, const OracleBudget& budget = {});

struct Estimate {
  double mean = 0;
  double standard_error = 0;
};

struct ExpectedEstimates {
  Estimate min_hinge;  ///< sum min{P_train, N_train} / (m p)
  Estimate ac_upper;   ///< sum max{P_test, N_test} / (m (1 - p))
  Estimate delta;      ///< sum Delta(x) / m
  std::uint64_t trials = 0;
};

/// Averages over `trials` seeded Bernoulli(p) divisions of the table.
/// Throws ArgumentError unless trials >= 1000 and 0 < p < 1.
ExpectedEstimates mc_expected(const PatternTable& table, double p, std::uint64_t trials, std::uint64_t seed);

struct ExpectedValues {
  double min_hinge = 0;
  double ac_upper = 0;
  double delta = 0;
};

/// The same three expectations by the literal double sum over (P_train,
/// N_train) outcomes with long double binomial masses. Throws BudgetExceeded
/// if some pattern has more than max_outcomes outcome pairs.
ExpectedValues double_sum_expected(const PatternTable& table, double p, const OracleBudget& budget = {});

/// Random table with 1..max_patterns patterns keyed "k0", "k1", ..., each
/// count uniform in 0..max_count. Empty patterns are dropped and the draw is
/// repeated until both classes appear.
PatternTable random_table(std::mt19937_64& rng, std::size_t max_patterns, Count max_count);

/// Random split with 1..max_patterns patterns and each of the four counts
/// uniform in 0..max_count (every pattern holds at least one sample).
SplitTable random_split(std::mt19937_64& rng, std::size_t max_patterns, Count max_count);

}  // namespace databound::oracle
