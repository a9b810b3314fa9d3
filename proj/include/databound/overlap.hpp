#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "databound/pattern_table.hpp"

namespace databound {

/// Normalized positive and negative pattern distributions over a common
/// index set: p_hat(x) = P(x) / n+, n_hat(x) = N(x) / n-.
struct DistributionPair {
  std::vector<double> p_hat;
  std::vector<double> n_hat;

  static DistributionPair from_table(const PatternTable& table);

  std::size_t size() const { return p_hat.size(); }
  /// Throws ArgumentError unless both vectors are nonnegative, equally long,
  /// and sum to 1 within `tolerance`.
  void validate(double tolerance = 1e-12) const;
};

/// D_S = 1 - JS(P || N), base-2 logarithms, 0 log 0 = 0. Evaluated in the
/// closed form -1/2 sum [p log2(p / (p + n)) + n log2(n / (p + n))].
double overlap_index(const DistributionPair& pair);
/// Throws SingleClassError if either class is absent.
double overlap_index(const PatternTable& table);

/// Jensen-Shannon divergence in bits through the mixture M = (P + N) / 2.
double js_divergence(const DistributionPair& pair);

/// 1/2 sum_{i,j} max{p_i n_j, p_j n_i}: the AUC-ROC upper bound of any
/// dataset whose class-conditional pattern distributions are `pair`.
double ar_upper_of_distributions(const DistributionPair& pair);

/// Overlap of the two-pattern family p = (1 - b, b), n = (0, 1):
/// D(b) = -1/2 (b log2 b - (b + 1) log2 (b + 1)), increasing from D(0) = 0 to D(1) = 1.
double heuristic_overlap(double b);

/// Lower envelope of AR^u at overlap D: 1 - b/2 where D(b) = D, b found by
/// bisection to 1e-12. Endpoints are exact: D = 0 gives 1, D = 1 gives 0.5.
double ar_min_heuristic(double overlap);

struct OptimizerConfig {
  std::size_t starts = 16;
  std::size_t max_iters = 2000;  ///< inner projected-gradient iterations per subproblem
  std::size_t max_outer = 60;    ///< augmented-Lagrangian multiplier updates
  double tolerance = 1e-6;       ///< accepted |overlap - D|
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct NumericBound {
  double value = 0;      ///< best AR^u among feasible starts
  double violation = 0;  ///< |overlap - D| at the reported point
  bool feasible = false;
  std::size_t best_start = 0;
  DistributionPair argbest;
};

/// Maximizes AR^u over pairs of distributions on `d` patterns subject to
/// overlap = D, by multi-start augmented Lagrangian with spectral projected
/// gradient steps on the product of simplices. Throws ArgumentError unless
/// 0 < D < 1 and d >= 2; throws Error if no start reaches the tolerance.
NumericBound ar_max_numeric(double overlap, std::size_t d, const OptimizerConfig& config = {});

/// The minimization counterpart, used to check the heuristic lower envelope.
NumericBound ar_min_numeric(double overlap, std::size_t d, const OptimizerConfig& config = {});

struct EnvelopeSample {
  double d_s = 0;
  double ar_min = 0;
  double ar_max = 0;
};

struct OverlapEnvelope {
  std::vector<EnvelopeSample> samples;
  std::size_t m_used = 0;
  /// Grid indices i > 0 where ar_max rose above the previous sample. Reported
  /// as optimizer artifacts; the values are left as computed.
  std::vector<std::size_t> non_monotone;
};

/// Throws ArgumentError unless the grid is sorted and inside (0, 1).
OverlapEnvelope envelope(std::span<const double> grid, std::size_t d, const OptimizerConfig& config = {});

}  // namespace databound
