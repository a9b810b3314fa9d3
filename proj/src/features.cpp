#include "databound/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <map>
#include <optional>

#include "databound/bounds.hpp"
#include "databound/error.hpp"
#include "databound/overlap.hpp"

namespace databound {

namespace {

SubsetScore score_columns(const Dataset& data, std::span<const std::size_t> cols) {
  const PatternTable table = build_pattern_table(data, cols);
  SubsetScore s;
  for (auto c : cols) s.subset.push_back(data.schema()[c].name);
  s.ar_upper = auc_roc_upper(table);
  s.overlap = overlap_index(table);
  s.d_patterns = table.size();
  return s;
}

// Strict "a beats b" for the ar-first order; equal scores keep the earlier subset.
bool beats_by_ar(const SubsetScore& a, const SubsetScore& b) {
  if (a.ar_upper != b.ar_upper) return a.ar_upper > b.ar_upper;
  return a.overlap < b.overlap;
}

bool beats_by_overlap(const SubsetScore& a, const SubsetScore& b) {
  if (a.overlap != b.overlap) return a.overlap < b.overlap;
  return a.ar_upper > b.ar_upper;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<SubsetScore> score_all(const Dataset& data, const std::vector<std::vector<std::size_t>>& subsets,
                                   std::size_t threads) {
  std::vector<SubsetScore> scores(subsets.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, subsets.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < subsets.size(); ++i) scores[i] = score_columns(data, subsets[i]);
    return scores;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < subsets.size(); i += workers) scores[i] = score_columns(data, subsets[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return scores;
}

void check_k(const Dataset& data, std::size_t k0) {
  if (k0 == 0 || k0 > data.columns()) {
    throw ArgumentError("subset size must lie in 1.." + std::to_string(data.columns()));
  }
}

std::vector<SubsetScore> exhaustive_scores(const Dataset& data, std::size_t k0, const SearchOptions& options) {
  check_k(data, k0);
  const std::uint64_t n = binomial_saturating(data.columns(), k0);
  if (n > options.budget) {
    throw BudgetExceeded("exhaustive search over " + std::to_string(k0) + "-subsets of " +
                         std::to_string(data.columns()) + " columns needs " + std::to_string(n) +
                         " evaluations, above the budget of " + std::to_string(options.budget) +
                         "; raise the budget or use greedy mode");
  }
  return score_all(data, combinations(data.columns(), k0), options.threads);
}

template <class Better>
SubsetScore pick(const std::vector<SubsetScore>& scores, Better better) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (better(scores[i], scores[best])) best = i;
  }
  return scores[best];
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

SubsetScore bounds_for_subset(const Dataset& data, const std::vector<std::string>& subset) {
  if (subset.empty()) throw ArgumentError("feature subset must not be empty");
  std::vector<std::size_t> cols;
  for (const auto& name : subset) cols.push_back(data.column_index(name));
  std::sort(cols.begin(), cols.end());
  if (std::adjacent_find(cols.begin(), cols.end()) != cols.end()) throw ArgumentError("feature subset repeats a column");
  return score_columns(data, cols);
}

SubsetScore exhaustive_best_subset(const Dataset& data, std::size_t k0, const SearchOptions& options) {
  return pick(exhaustive_scores(data, k0, options), beats_by_ar);
}

std::vector<SubsetScore> greedy_trace(const Dataset& data, std::size_t k0) {
  check_k(data, k0);
  std::vector<std::size_t> chosen;
  std::vector<bool> used(data.columns(), false);
  std::vector<SubsetScore> trace;
  for (std::size_t round = 0; round < k0; ++round) {
    std::optional<SubsetScore> best;
    std::size_t best_col = 0;
    for (std::size_t c = 0; c < data.columns(); ++c) {
      if (used[c]) continue;
      auto cols = chosen;
      cols.insert(std::upper_bound(cols.begin(), cols.end(), c), c);
      SubsetScore s = score_columns(data, cols);
      if (!best || beats_by_ar(s, *best)) {
        best = std::move(s);
        best_col = c;
      }
    }
    used[best_col] = true;
    chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), best_col), best_col);
    trace.push_back(std::move(*best));
  }
  return trace;
}

SubsetScore greedy_best_subset(const Dataset& data, std::size_t k0) { return greedy_trace(data, k0).back(); }

SelectionResult optimal_dimension_kstar(const Dataset& data, double tolerance, SearchMode mode,
                                        const SearchOptions& options) {
  const std::size_t K = data.columns();
  if (K == 0) throw ArgumentError("dataset has no feature columns");
  SelectionResult r;
  r.mode = mode;
  if (mode == SearchMode::exhaustive) {
    for (std::size_t k = 1; k <= K; ++k) {
      if (binomial_saturating(K, k) > options.budget) exhaustive_scores(data, k, options);  // throws
    }
    for (std::size_t k = 1; k <= K; ++k) {
      const auto scores = exhaustive_scores(data, k, options);
      r.best_by_ar.push_back(pick(scores, beats_by_ar));
      r.best_by_overlap.push_back(pick(scores, beats_by_overlap));
    }
  } else {
    r.best_by_ar = greedy_trace(data, K);
    r.best_by_overlap = r.best_by_ar;
  }
  r.full_overlap = r.best_by_overlap.back().overlap;
  for (std::size_t k = 1; k <= K; ++k) {
    if (r.best_by_overlap[k - 1].overlap <= r.full_overlap + tolerance) {
      r.k_star = k;
      break;
    }
  }
  r.global = r.best_by_overlap[r.k_star - 1];
  return r;
}

Dataset augment_transform(const Dataset& data, const RowTransform& transform, const std::string& name) {
  if (data.has_column(name)) throw DataError("column '" + name + "' already exists");
  std::vector<std::string> values;
  values.reserve(data.size());
  std::vector<std::string> tokens(data.columns());
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.columns(); ++c) tokens[c] = data.token(r, c);
    values.push_back(transform(tokens));
  }
  return data.with_column(ColumnSchema::categorical(name), values);
}

Dataset augment_neighborhood(const Dataset& data, double r, NeighborAggregate aggregate, NeighborMetric metric) {
  if (!(r >= 0)) throw ArgumentError("neighborhood radius must be nonnegative");
  const std::size_t K = data.columns();
  if (metric == NeighborMetric::euclidean) {
    for (const auto& col : data.schema()) {
      if (col.kind != ColumnKind::numeric) {
        throw ArgumentError("euclidean metric needs numeric columns; '" + col.name + "' is categorical");
      }
    }
  }

  // Distinct code tuples with their sample counts, in first-seen order.
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  std::vector<std::vector<std::uint32_t>> patterns;
  std::vector<double> weight;
  std::vector<std::size_t> row_pattern(data.size());
  std::vector<std::uint32_t> key(K);
  for (std::size_t row = 0; row < data.size(); ++row) {
    for (std::size_t c = 0; c < K; ++c) key[c] = data.code(row, c);
    auto [it, fresh] = index.try_emplace(key, patterns.size());
    if (fresh) {
      patterns.push_back(key);
      weight.push_back(0);
    }
    weight[it->second] += 1;
    row_pattern[row] = it->second;
  }
  const std::size_t d = patterns.size();

  const bool needs_numbers = metric == NeighborMetric::euclidean || aggregate != NeighborAggregate::count;
  std::vector<std::vector<double>> values;
  if (needs_numbers) {
    values.assign(d, std::vector<double>(K));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = 0; c < K; ++c) {
        const auto& tok = data.dictionary(c)[patterns[i][c]];
        auto v = parse_number(tok);
        if (!v) throw ArgumentError("column '" + data.schema()[c].name + "': token '" + tok + "' is not a number");
        values[i][c] = *v;
      }
    }
  }

  auto within = [&](std::size_t i, std::size_t j) {
    if (metric == NeighborMetric::hamming) {
      std::size_t diff = 0;
      for (std::size_t c = 0; c < K; ++c) diff += patterns[i][c] != patterns[j][c];
      return static_cast<double>(diff) <= r;
    }
    double s = 0;
    for (std::size_t c = 0; c < K; ++c) {
      const double t = values[i][c] - values[j][c];
      s += t * t;
    }
    return std::sqrt(s) <= r;
  };

  const std::size_t outputs = aggregate == NeighborAggregate::count ? 1 : K;
  std::vector<std::vector<std::string>> tokens(d, std::vector<std::string>(outputs));
  for (std::size_t i = 0; i < d; ++i) {
    double total = 0;
    std::vector<double> sums(K, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      if (!within(i, j)) continue;
      total += weight[j];
      if (aggregate != NeighborAggregate::count) {
        for (std::size_t c = 0; c < K; ++c) sums[c] += weight[j] * values[j][c];
      }
    }
    if (aggregate == NeighborAggregate::count) {
      tokens[i][0] = format_number(total);
    } else {
      for (std::size_t c = 0; c < K; ++c) {
        tokens[i][c] = format_number(aggregate == NeighborAggregate::mean ? sums[c] / total : sums[c]);
      }
    }
  }

  const std::string radius = std::isinf(r) ? "inf" : format_number(r);
  const char* agg = aggregate == NeighborAggregate::mean ? "mean" : aggregate == NeighborAggregate::sum ? "sum" : "count";
  Dataset out = data;
  for (std::size_t o = 0; o < outputs; ++o) {
    const std::string name = aggregate == NeighborAggregate::count
                                 ? std::string("neighbors_count_") + radius
                                 : data.schema()[o].name + "_" + agg + "_" + radius;
    std::vector<std::string> column(data.size());
    for (std::size_t row = 0; row < data.size(); ++row) column[row] = tokens[row_pattern[row]][o];
    out = out.with_column(ColumnSchema::categorical(name), column);
  }
  return out;
}

}  // namespace databound
