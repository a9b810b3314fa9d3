#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "databound/dataset.hpp"

namespace databound {

/// AR^u and overlap of the table built on a column subset.
struct SubsetScore {
  std::vector<std::string> subset;  ///< in dataset column order
  double ar_upper = 0;
  double overlap = 0;
  std::size_t d_patterns = 0;
};

/// Throws ArgumentError on an empty subset, DataError on an unknown column,
/// SingleClassError if the dataset has one class.
SubsetScore bounds_for_subset(const Dataset& data, const std::vector<std::string>& subset);

struct SearchOptions {
  std::uint64_t budget = 100000;  ///< most subsets one exhaustive pass may score
  std::size_t threads = 1;
};

/// Best k0-subset by ar_upper; ties go to lower overlap, then to the subset
/// whose column indices compare lexicographically smaller. Throws
/// BudgetExceeded when C(K, k0) exceeds the budget, ArgumentError unless 1 <= k0 <= K.
SubsetScore exhaustive_best_subset(const Dataset& data, std::size_t k0, const SearchOptions& options = {});

/// Forward selection: each round adds the column giving the highest ar_upper
/// (ties: lower overlap, then lower column index). Returns the k0-th round.
SubsetScore greedy_best_subset(const Dataset& data, std::size_t k0);
/// All rounds 1..k0 of the forward selection.
std::vector<SubsetScore> greedy_trace(const Dataset& data, std::size_t k0);

enum class SearchMode { exhaustive, greedy };

struct SelectionResult {
  SearchMode mode = SearchMode::exhaustive;
  /// Entry k-1: the ar-best subset with k columns (same tie order as above).
  std::vector<SubsetScore> best_by_ar;
  /// Entry k-1: the subset with k columns of least overlap (ties: higher
  /// ar_upper, then column order). In greedy mode both lists hold the greedy rounds.
  std::vector<SubsetScore> best_by_overlap;
  double full_overlap = 0;
  /// Smallest k whose least overlap is within tolerance of full_overlap.
  std::size_t k_star = 0;
  /// best_by_overlap[k_star - 1].
  SubsetScore global;
};

/// Throws BudgetExceeded in exhaustive mode if some k needs more than the budget.
SelectionResult optimal_dimension_kstar(const Dataset& data, double tolerance = 1e-12,
                                        SearchMode mode = SearchMode::exhaustive,
                                        const SearchOptions& options = {});

/// Token of the new column computed from the row's feature tokens.
using RowTransform = std::function<std::string(std::span<const std::string> tokens)>;

/// Appends a categorical column `name` computed row by row from the existing
/// features. Throws DataError if `name` is already a column.
Dataset augment_transform(const Dataset& data, const RowTransform& transform, const std::string& name);

enum class NeighborAggregate { mean, count, sum };
enum class NeighborMetric { hamming, euclidean };

/// For every row, aggregates over all rows whose feature vector lies within
/// distance r (inclusive) of its own. `count` appends one column holding the
/// neighbor count; `mean` and `sum` append one column per feature, named
/// "<column>_<aggregate>_r", over values parsed as numbers. Rows sharing a
/// pattern receive identical values. Throws ArgumentError if r < 0, if
/// euclidean is requested on a non-numeric column, or if mean/sum meets a
/// token that does not parse as a number.
Dataset augment_neighborhood(const Dataset& data, double r, NeighborAggregate aggregate, NeighborMetric metric);

}  // namespace databound
