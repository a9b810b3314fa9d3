#include "databound/splits.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "databound/error.hpp"

namespace databound {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("split probability p must lie strictly between 0 and 1");
}

}  // namespace

SplitTable::SplitTable(std::vector<SplitEntry> entries, std::optional<double> ratio)
    : entries_(std::move(entries)), ratio_(ratio) {
  std::sort(entries_.begin(), entries_.end(), [](const SplitEntry& a, const SplitEntry& b) { return a.key < b.key; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0 && entries_[i].key == entries_[i - 1].key) throw DataError("duplicate pattern in split table");
    if (entries_[i].pos() + entries_[i].neg() == 0) throw DataError("split table entry without samples");
  }
}

SplitTable SplitTable::from_tables(const PatternTable& train, const PatternTable& test) {
  std::map<PatternKey, SplitEntry> merged;
  for (const auto& e : train.entries()) {
    auto& s = merged[e.key];
    s.key = e.key;
    s.p_train = e.pos;
    s.n_train = e.neg;
  }
  for (const auto& e : test.entries()) {
    auto& s = merged[e.key];
    s.key = e.key;
    s.p_test = e.pos;
    s.n_test = e.neg;
  }
  std::vector<SplitEntry> entries;
  entries.reserve(merged.size());
  for (auto& [key, s] : merged) entries.push_back(std::move(s));
  return SplitTable(std::move(entries));
}

Count SplitTable::m() const { return m_train() + m_test(); }

Count SplitTable::m_train() const {
  Count s = 0;
  for (const auto& e : entries_) s += e.p_train + e.n_train;
  return s;
}

Count SplitTable::m_test() const {
  Count s = 0;
  for (const auto& e : entries_) s += e.p_test + e.n_test;
  return s;
}

PatternTable SplitTable::parent() const {
  std::vector<PatternEntry> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back({e.key, e.pos(), e.neg()});
  return PatternTable(std::move(out));
}

PatternTable SplitTable::train() const {
  std::vector<PatternEntry> out;
  for (const auto& e : entries_) {
    if (e.p_train + e.n_train > 0) out.push_back({e.key, e.p_train, e.n_train});
  }
  return PatternTable(std::move(out));
}

PatternTable SplitTable::test() const {
  std::vector<PatternEntry> out;
  for (const auto& e : entries_) {
    if (e.p_test + e.n_test > 0) out.push_back({e.key, e.p_test, e.n_test});
  }
  return PatternTable(std::move(out));
}

RandomSplit split_random(const Dataset& data, double p, std::uint64_t seed) {
  check_probability(p);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution to_train(p);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t r = 0; r < data.size(); ++r) (to_train(rng) ? train_rows : test_rows).push_back(r);

  RandomSplit out{data.select_rows(train_rows), data.select_rows(test_rows), {}};
  const PatternTable train = out.train.size() ? build_pattern_table(out.train) : PatternTable{};
  const PatternTable test = out.test.size() ? build_pattern_table(out.test) : PatternTable{};
  const SplitTable aligned = SplitTable::from_tables(train, test);
  out.table = SplitTable(aligned.entries(), p);
  return out;
}

SplitTable split_table_random(const PatternTable& table, double p, std::uint64_t seed) {
  check_probability(p);
  std::mt19937_64 rng(seed);
  std::vector<SplitEntry> entries;
  entries.reserve(table.size());
  for (const auto& e : table.entries()) {
    std::binomial_distribution<Count> pos(e.pos, p);
    std::binomial_distribution<Count> neg(e.neg, p);
    SplitEntry s;
    s.key = e.key;
    s.p_train = pos(rng);
    s.n_train = neg(rng);
    s.p_test = e.pos - s.p_train;
    s.n_test = e.neg - s.n_train;
    entries.push_back(std::move(s));
  }
  return SplitTable(std::move(entries), p);
}

DeltaReport delta_lower_bound(const SplitTable& split) {
  DeltaReport r;
  r.per_pattern_raw.reserve(split.size());
  for (const auto& e : split.entries()) {
    const auto qa = e.q_train();
    const auto qb = e.q_test();
    Count d = 0;
    if ((qa > 0 && qb < 0) || (qa < 0 && qb > 0)) {
      d = static_cast<Count>(std::min(std::abs(qa), std::abs(qb)));
    }
    r.per_pattern_raw.push_back(d);
    r.raw += d;
  }
  const Count m = split.m();
  const double md = m ? static_cast<double>(m) : 1.0;
  r.per_pattern.reserve(split.size());
  for (auto d : r.per_pattern_raw) r.per_pattern.push_back(static_cast<double>(d) / md);
  r.delta = static_cast<double>(r.raw) / md;
  r.perfect = r.raw == 0;
  return r;
}

ClassifierGaps delta_of_classifier(const SplitTable& split, std::span<const Label> labeling) {
  if (labeling.size() != split.size()) {
    throw ArgumentError("labeling has " + std::to_string(labeling.size()) + " entries for " +
                        std::to_string(split.size()) + " patterns");
  }
  Count train_gap = 0;
  Count test_gap = 0;
  for (std::size_t i = 0; i < split.size(); ++i) {
    const auto& e = split[i];
    const bool positive = labeling[i] == Label::positive;
    train_gap += (positive ? e.n_train : e.p_train) - std::min(e.p_train, e.n_train);
    test_gap += std::max(e.p_test, e.n_test) - (positive ? e.p_test : e.n_test);
  }
  const double m = split.m() ? static_cast<double>(split.m()) : 1.0;
  return {static_cast<double>(train_gap) / m, static_cast<double>(test_gap) / m};
}

ClassifierGaps delta_of_classifier(const SplitTable& split, const std::map<PatternKey, Label>& labeling) {
  std::vector<Label> ordered;
  ordered.reserve(split.size());
  for (const auto& e : split.entries()) {
    auto it = labeling.find(e.key);
    if (it == labeling.end()) throw ArgumentError("labeling misses pattern '" + join_key(e.key) + "'");
    ordered.push_back(it->second);
  }
  return delta_of_classifier(split, ordered);
}

namespace {

// Survival function S(k) = P(X >= k) for k = 0..n of X ~ Bin(n, q).
std::vector<double> binomial_survival(Count n, double q) {
  std::vector<double> pmf(n + 1, 0.0);
  const Count mode = std::min<Count>(n, static_cast<Count>(std::floor((static_cast<double>(n) + 1) * q)));
  const double odds = q / (1 - q);
  pmf[mode] = 1.0;
  for (Count k = mode; k < n; ++k) {
    pmf[k + 1] = pmf[k] * static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
  }
  for (Count k = mode; k > 0; --k) {
    pmf[k - 1] = pmf[k] * static_cast<double>(k) / static_cast<double>(n - k + 1) / odds;
  }
  double total = 0;
  for (double v : pmf) total += v;
  std::vector<double> surv(n + 2, 0.0);
  for (Count k = n + 1; k-- > 0;) surv[k] = surv[k + 1] + pmf[k] / total;
  surv.pop_back();
  return surv;
}

}  // namespace

BinomialPairMoments binomial_pair_moments(Count pos, Count neg, double q) {
  check_probability(q);
  const Count lo = std::min(pos, neg);
  double e_min = 0;
  if (lo > 0) {
    const auto sx = binomial_survival(pos, q);
    const auto sy = binomial_survival(neg, q);
    for (Count k = 1; k <= lo; ++k) e_min += sx[k] * sy[k];
  }
  return {e_min, q * static_cast<double>(pos + neg) - e_min};
}

double expected_min_hinge(const PatternTable& table, double p) {
  check_probability(p);
  table.require_nonempty();
  double s = 0;
  for (const auto& e : table.entries()) s += binomial_pair_moments(e.pos, e.neg, p).e_min;
  return s / (static_cast<double>(table.m()) * p);
}

double expected_accuracy_upper(const PatternTable& table, double p) {
  check_probability(p);
  table.require_nonempty();
  double s = 0;
  for (const auto& e : table.entries()) s += binomial_pair_moments(e.pos, e.neg, 1 - p).e_max;
  return s / (static_cast<double>(table.m()) * (1 - p));
}

double expected_delta(const PatternTable& table, double p) {
  check_probability(p);
  table.require_nonempty();
  double s = 0;
  for (const auto& e : table.entries()) {
    const double train = binomial_pair_moments(e.pos, e.neg, p).e_max;
    const double test = binomial_pair_moments(e.pos, e.neg, 1 - p).e_max;
    // Each term is an expectation of a nonnegative count; clamp rounding noise.
    s += std::max(0.0, (std::min(train, test) + std::max(train, test)) - static_cast<double>(std::max(e.pos, e.neg)));
  }
  return s / static_cast<double>(table.m());
}

}  // namespace databound
