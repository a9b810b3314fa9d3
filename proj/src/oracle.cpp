#include "databound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "databound/error.hpp"

namespace databound::oracle {

namespace {

void check_orderings(const PatternTable& table, const OracleBudget& budget) {
  if (table.size() > budget.max_patterns_orderings) {
    throw BudgetExceeded("ordering oracle limited to " + std::to_string(budget.max_patterns_orderings) +
                         " patterns, table has " + std::to_string(table.size()));
  }
}

void check_labelings(std::size_t d, const OracleBudget& budget) {
  if (d > budget.max_patterns_labelings) {
    throw BudgetExceeded("labeling oracle limited to " + std::to_string(budget.max_patterns_labelings) +
                         " patterns, got " + std::to_string(d));
  }
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("p must lie strictly between 0 and 1");
}

std::vector<std::size_t> identity(std::size_t d) {
  std::vector<std::size_t> v(d);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// One score per sample: patterns earlier in `ordering` score higher.
void expand(const PatternTable& table, const std::vector<std::size_t>& ordering, std::vector<int>& pos,
            std::vector<int>& neg) {
  pos.clear();
  neg.clear();
  const int d = static_cast<int>(ordering.size());
  for (int rank = 0; rank < d; ++rank) {
    const auto& e = table[ordering[static_cast<std::size_t>(rank)]];
    pos.insert(pos.end(), e.pos, d - rank);
    neg.insert(neg.end(), e.neg, d - rank);
  }
}

// Number of correctly classified samples of labeling `mask` (bit i set = pattern i positive).
std::uint64_t correct_count(const PatternTable& table, std::uint64_t mask) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < table.size(); ++i) c += (mask >> i & 1) ? table[i].pos : table[i].neg;
  return c;
}

// Trapezoid area of the per-sample PR path for one ordering.
long double pr_area(const PatternTable& table, const std::vector<std::size_t>& ordering) {
  const long double np = static_cast<long double>(table.n_plus());
  long double tp_before = 0;
  std::uint64_t seen = 0;
  const auto& first = table[ordering.front()];
  long double prev_recall = 0;
  long double prev_precision = static_cast<long double>(first.pos) / static_cast<long double>(first.total());
  long double area = 0;
  for (auto idx : ordering) {
    const auto& e = table[idx];
    const long double share = static_cast<long double>(e.pos) / static_cast<long double>(e.total());
    for (std::uint64_t t = 1; t <= e.total(); ++t) {
      const long double tp = tp_before + share * static_cast<long double>(t);
      const long double recall = tp / np;
      const long double precision = tp / static_cast<long double>(seen + t);
      area += (recall - prev_recall) * (precision + prev_precision) / 2;
      prev_recall = recall;
      prev_precision = precision;
    }
    tp_before += static_cast<long double>(e.pos);
    seen += e.total();
  }
  return area;
}

long double binomial_pmf(std::uint64_t n, std::uint64_t k, long double q) {
  // C(n, k) by the multiplicative formula, then q^k (1-q)^(n-k).
  long double c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return c * std::pow(q, static_cast<long double>(k)) * std::pow(1 - q, static_cast<long double>(n - k));
}

}  // namespace

BestOrdering brute_best_auc(const PatternTable& table, const OracleBudget& budget) {
  table.require_both_classes();
  check_orderings(table, budget);
  auto ordering = identity(table.size());
  BestOrdering best;
  bool first = true;
  std::vector<int> pos;
  std::vector<int> neg;
  do {
    expand(table, ordering, pos, neg);
    std::uint64_t twice_correct = 0;
    for (int a : pos) {
      for (int b : neg) twice_correct += a > b ? 2 : a == b ? 1 : 0;
    }
    if (first || twice_correct > best.auc.num) {
      best.auc.num = twice_correct;
      best.ordering = ordering;
      first = false;
    }
  } while (std::next_permutation(ordering.begin(), ordering.end()));
  best.auc.den = 2 * static_cast<std::uint64_t>(pos.size()) * neg.size();
  return best;
}

Fraction brute_best_accuracy(const PatternTable& table, const OracleBudget& budget) {
  table.require_nonempty();
  check_labelings(table.size(), budget);
  std::uint64_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << table.size()); ++mask) {
    best = std::max(best, correct_count(table, mask));
  }
  return {best, table.m()};
}

Fraction brute_min_hinge(const PatternTable& table, const OracleBudget& budget) {
  table.require_nonempty();
  check_labelings(table.size(), budget);
  // Hinge of a +-1 output: max(0, 1 - y f) is 0 when right and 2 when wrong.
  std::uint64_t best = UINT64_MAX;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << table.size()); ++mask) {
    std::uint64_t twice_loss = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      const int f = (mask >> i & 1) ? 1 : -1;
      twice_loss += table[i].pos * static_cast<std::uint64_t>(std::max(0, 1 - f));
      twice_loss += table[i].neg * static_cast<std::uint64_t>(std::max(0, 1 + f));
    }
    best = std::min(best, twice_loss / 2);
  }
  return {best, table.m()};
}

double brute_best_pr_area(const PatternTable& table, const OracleBudget& budget) {
  table.require_both_classes();
  check_orderings(table, budget);
  auto ordering = identity(table.size());
  long double best = -1;
  do {
    best = std::max(best, pr_area(table, ordering));
  } while (std::next_permutation(ordering.begin(), ordering.end()));
  return static_cast<double>(best);
}

std::uint64_t brute_min_delta_raw(const SplitTable& split, const OracleBudget& budget) {
  check_labelings(split.size(), budget);
  std::uint64_t best_train_loss = 0;
  std::uint64_t best_test_correct = 0;
  for (const auto& e : split.entries()) {
    best_train_loss += std::min(e.p_train, e.n_train);
    best_test_correct += std::max(e.p_test, e.n_test);
  }
  std::uint64_t best = UINT64_MAX;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << split.size()); ++mask) {
    std::uint64_t train_loss = 0;
    std::uint64_t test_correct = 0;
    for (std::size_t i = 0; i < split.size(); ++i) {
      const bool positive = mask >> i & 1;
      train_loss += positive ? split[i].n_train : split[i].p_train;
      test_correct += positive ? split[i].p_test : split[i].n_test;
    }
    best = std::min(best, (train_loss - best_train_loss) + (best_test_correct - test_correct));
  }
  return best;
}

double brute_min_delta(const SplitTable& split, const OracleBudget& budget) {
  const std::uint64_t raw = brute_min_delta_raw(split, budget);
  const std::uint64_t m = split.m();
  return m ? static_cast<double>(raw) / static_cast<double>(m) : 0.0;
}

ExpectedEstimates mc_expected(const PatternTable& table, double p, std::uint64_t trials, std::uint64_t seed) {
  check_p(p);
  if (trials < 1000) throw ArgumentError("Monte Carlo needs at least 1000 trials");
  table.require_nonempty();
  const double m = static_cast<double>(table.m());
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution to_train(p);

  struct Running {
    double sum = 0;
    double sum_sq = 0;
    void add(double v) {
      sum += v;
      sum_sq += v * v;
    }
    Estimate finish(double n) const {
      const double mean = sum / n;
      const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
      return {mean, std::sqrt(var / n)};
    }
  } hinge, acc, delta;

  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t min_train = 0;
    std::uint64_t max_test = 0;
    std::uint64_t gap = 0;
    for (const auto& e : table.entries()) {
      std::int64_t p_train = 0;
      std::int64_t n_train = 0;
      for (Count s = 0; s < e.pos; ++s) p_train += to_train(rng);
      for (Count s = 0; s < e.neg; ++s) n_train += to_train(rng);
      const std::int64_t p_test = static_cast<std::int64_t>(e.pos) - p_train;
      const std::int64_t n_test = static_cast<std::int64_t>(e.neg) - n_train;
      min_train += static_cast<std::uint64_t>(std::min(p_train, n_train));
      max_test += static_cast<std::uint64_t>(std::max(p_test, n_test));
      const std::int64_t a = p_train - n_train;
      const std::int64_t b = p_test - n_test;
      if ((a > 0 && b < 0) || (a < 0 && b > 0)) gap += static_cast<std::uint64_t>(std::min(std::abs(a), std::abs(b)));
    }
    hinge.add(static_cast<double>(min_train) / (m * p));
    acc.add(static_cast<double>(max_test) / (m * (1 - p)));
    delta.add(static_cast<double>(gap) / m);
  }
  const double n = static_cast<double>(trials);
  return {hinge.finish(n), acc.finish(n), delta.finish(n), trials};
}

ExpectedValues double_sum_expected(const PatternTable& table, double p, const OracleBudget& budget) {
  check_p(p);
  table.require_nonempty();
  const long double q = p;
  long double min_train = 0;
  long double max_test = 0;
  long double gap = 0;
  for (const auto& e : table.entries()) {
    if ((e.pos + 1) * (e.neg + 1) > budget.max_outcomes) {
      throw BudgetExceeded("double-sum oracle limited to " + std::to_string(budget.max_outcomes) +
                           " outcomes per pattern");
    }
    std::vector<long double> px(e.pos + 1);
    std::vector<long double> py(e.neg + 1);
    for (Count a = 0; a <= e.pos; ++a) px[a] = binomial_pmf(e.pos, a, q);
    for (Count b = 0; b <= e.neg; ++b) py[b] = binomial_pmf(e.neg, b, q);
    for (Count a = 0; a <= e.pos; ++a) {
      for (Count b = 0; b <= e.neg; ++b) {
        const long double w = px[a] * py[b];
        const Count pa = e.pos - a;
        const Count nb = e.neg - b;
        min_train += w * static_cast<long double>(std::min(a, b));
        max_test += w * static_cast<long double>(std::max(pa, nb));
        const bool conflict = (a > b && pa < nb) || (a < b && pa > nb);
        if (conflict) {
          const Count qa = a > b ? a - b : b - a;
          const Count qb = pa > nb ? pa - nb : nb - pa;
          gap += w * static_cast<long double>(std::min(qa, qb));
        }
      }
    }
  }
  const long double m = static_cast<long double>(table.m());
  return {static_cast<double>(min_train / (m * q)), static_cast<double>(max_test / (m * (1 - q))),
          static_cast<double>(gap / m)};
}

PatternTable random_table(std::mt19937_64& rng, std::size_t max_patterns, Count max_count) {
  if (max_patterns == 0 || max_count == 0) throw ArgumentError("random table needs at least one pattern and count");
  std::uniform_int_distribution<std::size_t> size(1, max_patterns);
  std::uniform_int_distribution<Count> count(0, max_count);
  while (true) {
    const std::size_t d = size(rng);
    std::vector<PatternEntry> entries;
    for (std::size_t i = 0; i < d; ++i) {
      PatternEntry e{{"k" + std::to_string(i)}, count(rng), count(rng)};
      if (e.total() > 0) entries.push_back(std::move(e));
    }
    if (entries.empty()) continue;
    PatternTable t(std::move(entries));
    if (t.has_both_classes()) return t;
  }
}

SplitTable random_split(std::mt19937_64& rng, std::size_t max_patterns, Count max_count) {
  if (max_patterns == 0 || max_count == 0) throw ArgumentError("random split needs at least one pattern and count");
  std::uniform_int_distribution<std::size_t> size(1, max_patterns);
  std::uniform_int_distribution<Count> count(0, max_count);
  const std::size_t d = size(rng);
  std::vector<SplitEntry> entries;
  for (std::size_t i = 0; i < d; ++i) {
    SplitEntry e;
    e.key = {"k" + std::to_string(i)};
    do {
      e.p_train = count(rng);
      e.n_train = count(rng);
      e.p_test = count(rng);
      e.n_test = count(rng);
    } while (e.pos() + e.neg() == 0);
    entries.push_back(std::move(e));
  }
  return SplitTable(std::move(entries));
}

}  // namespace databound::oracle
