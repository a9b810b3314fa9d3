#pragma once

#include <span>
#include <vector>

#include "databound/pattern_table.hpp"

namespace databound {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

/// Exact 128-bit quotient num / den, converted to double only at the end.
struct ExactRatio {
  u128 num = 0;
  u128 den = 1;

  double value() const;
};

/// Performance ceilings and minimum losses of one pattern table.
struct BoundsReport {
  double ar_upper = 0;     ///< upper bound of AUC-ROC
  double ap_upper = 0;     ///< upper bound of AUC-PR
  double ac_upper = 0;     ///< upper bound of accuracy
  double min_square = 0;   ///< minimum mean square loss
  double min_hinge = 0;    ///< minimum mean hinge loss, 1 - ac_upper
  double min_softmax = 0;  ///< minimum mean cross-entropy, nats
  double overlap = 0;      ///< Jensen-Shannon overlap index D_S
  Count n_plus = 0;
  Count n_minus = 0;
  Count m = 0;
  std::size_t d = 0;  ///< distinct patterns
};

/// Optimal score of one pattern: f* = 2 p_plus - 1 = (P - N) / (P + N),
/// stored as 2 p_plus - 1.
struct PatternScore {
  PatternKey key;
  double p_plus = 0;
  double f_star = 0;
  Count weight = 0;  ///< P + N

  /// Discrete decision: +1 when f* >= 0.
  Label label() const { return f_star >= 0 ? Label::positive : Label::negative; }
};

struct CurvePoint {
  double x = 0;
  double y = 0;
};

struct CurvePoints {
  enum class Kind { roc, pr };
  Kind kind = Kind::roc;
  std::vector<CurvePoint> points;
  double area = 0;  ///< trapezoidal integral of `points`
};

double trapezoid_area(std::span<const CurvePoint> points);

enum class LossKind { square, hinge, softmax };

/// Pattern indices sorted by p_plus descending; ties keep canonical
/// (lexicographic) order. Comparisons are exact integer cross-products.
std::vector<std::size_t> optimal_order(const PatternTable& table);

/// Upper bound of AUC-ROC via the sorted prefix-sum form, O(d log d).
/// Throws SingleClassError if either class is absent.
double auc_roc_upper(const PatternTable& table);
/// Numerator and denominator 2 n+ n- of the same bound.
ExactRatio auc_roc_upper_exact(const PatternTable& table);
/// Literal O(d^2) double sum over ordered pattern pairs (i = j included).
ExactRatio auc_roc_upper_pairwise(const PatternTable& table);

/// AUC of any classifier that ranks patterns in `ordering` (first = highest
/// score); samples sharing a pattern are tied and earn half credit.
/// Throws ArgumentError unless `ordering` is a permutation of the pattern indices.
double ranking_auc(const PatternTable& table, std::span<const std::size_t> ordering);
ExactRatio ranking_auc_exact(const PatternTable& table, std::span<const std::size_t> ordering);

/// Upper bound of AUC-PR: trapezoidal area of the per-sample precision/recall
/// sequence in optimal order, with the precision at recall 0 taken as the
/// p_plus of the first pattern. Evaluated per pattern run in closed form.
double auc_pr_upper(const PatternTable& table);
/// The same quantity summed literally one sample at a time (O(m)).
double auc_pr_upper_per_sample(const PatternTable& table);

/// (1/m) sum max{P, N}, evaluated as 1 - min_hinge so that the two add to
/// exactly 1 in floating point.
double accuracy_upper(const PatternTable& table);
ExactRatio accuracy_upper_exact(const PatternTable& table);

double min_loss(const PatternTable& table, LossKind kind);
/// (1/m) sum min{P, N}; the complement of accuracy_upper.
ExactRatio min_hinge_exact(const PatternTable& table);

/// Per-pattern optimal scores in canonical table order.
std::vector<PatternScore> optimal_scores(const PatternTable& table);

/// Origin plus one vertex per distinct score in optimal order at cumulative
/// (sum N / n-, sum P / n+). Patterns without negatives come first and form a
/// vertical segment, so x is non-decreasing rather than strictly increasing.
CurvePoints optimal_roc_curve(const PatternTable& table);

/// Optimal PR curve with one vertex per sample (m + 1 points, the first at
/// recall 0). Precision is hyperbolic in recall inside a pattern run, so
/// per-pattern vertices alone would not integrate to auc_pr_upper.
CurvePoints optimal_pr_curve(const PatternTable& table);

/// All bounds plus the overlap index. Throws SingleClassError.
BoundsReport bounds_report(const PatternTable& table);

}  // namespace databound
