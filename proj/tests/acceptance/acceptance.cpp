// Acceptance gate: one PASS/FAIL/SKIP line per criterion; exits 1 if any fails.
//
//   databound_acceptance [--sud PATH --sud-label COL --sud-positive TOKEN]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "databound/bounds.hpp"
#include "databound/dataset.hpp"
#include "databound/features.hpp"
#include "databound/oracle.hpp"
#include "databound/overlap.hpp"
#include "databound/splits.hpp"

using namespace databound;

namespace {

using Clock = std::chrono::steady_clock;

enum class Status { pass, fail, skip };

struct Outcome {
  Status status = Status::pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool same(const oracle::Fraction& a, const ExactRatio& b) {
  return static_cast<u128>(a.num) * b.den == static_cast<u128>(a.den) * b.num;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  int mismatches = 0;
  double worst_pr = 0;
  for (int i = 0; i < 200; ++i) {
    const auto t = oracle::random_table(rng, 6, 4);
    mismatches += !same(oracle::brute_best_auc(t).auc, auc_roc_upper_exact(t));
    mismatches += !same(oracle::brute_best_accuracy(t), accuracy_upper_exact(t));
    mismatches += !same(oracle::brute_min_hinge(t), min_hinge_exact(t));
    const double gap = std::abs(oracle::brute_best_pr_area(t) - auc_pr_upper(t));
    worst_pr = std::max(worst_pr, gap);
    mismatches += gap > 1e-12;
  }
  const double secs = seconds_since(t0);
  const bool ok = mismatches == 0 && secs < 30;
  return {ok ? Status::pass : Status::fail,
          fmt("200 tables, %d mismatches, worst PR gap %.2e, %.2f s (limit 30 s)", mismatches, worst_pr, secs)};
}

bool concave(const CurvePoints& roc) {
  const auto& p = roc.points;
  if (p.empty() || p.front().x != 0 || p.front().y != 0 || p.back().x != 1 || p.back().y != 1) return false;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i].x < p[i - 1].x || p[i].y < p[i - 1].y) return false;
  }
  for (std::size_t i = 2; i < p.size(); ++i) {
    const double dx1 = p[i - 1].x - p[i - 2].x;
    const double dy1 = p[i - 1].y - p[i - 2].y;
    const double dx2 = p[i].x - p[i - 1].x;
    const double dy2 = p[i].y - p[i - 1].y;
    if (dy2 * dx1 > dy1 * dx2 + 1e-12) return false;
  }
  return true;
}

Outcome complementarity() {
  std::mt19937_64 rng(202);
  int sum_fail = 0;
  int range_fail = 0;
  int concave_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    const Count max_count = i % 2 ? 5 : 1000;
    const auto t = oracle::random_table(rng, 1 + i % 40, max_count);
    sum_fail += accuracy_upper(t) + min_loss(t, LossKind::hinge) != 1.0;
    const double ar = auc_roc_upper(t);
    range_fail += !(ar >= 0.5 && ar <= 1.0);
    concave_fail += !concave(optimal_roc_curve(t));
  }
  const bool ok = sum_fail + range_fail + concave_fail == 0;
  return {ok ? Status::pass : Status::fail,
          fmt("1000 tables: ac+hinge!=1 on %d, ar out of [0.5,1] on %d, non-concave ROC on %d", sum_fail, range_fail,
              concave_fail)};
}

Outcome delta_machinery() {
  std::mt19937_64 rng(303);
  int eq_fail = 0;
  int bound_fail = 0;
  int flag_fail = 0;
  std::uint64_t labelings = 0;
  for (int i = 0; i < 200; ++i) {
    const auto s = oracle::random_split(rng, 10, 4);
    const auto r = delta_lower_bound(s);
    eq_fail += r.raw != oracle::brute_min_delta_raw(s);
    bool consistent = true;
    for (const auto& e : s.entries()) {
      const auto tr = e.q_train();
      const auto te = e.q_test();
      consistent = consistent && !((tr > 0 && te < 0) || (tr < 0 && te > 0));
    }
    flag_fail += r.perfect != consistent;
    std::vector<Label> lab(s.size());
    for (std::uint64_t mask = 0; mask < (1ULL << s.size()); ++mask) {
      for (std::size_t k = 0; k < s.size(); ++k) lab[k] = (mask >> k & 1) ? Label::positive : Label::negative;
      const auto g = delta_of_classifier(s, lab);
      bound_fail += r.delta > g.delta_train + g.delta_test + 1e-15;
      ++labelings;
    }
  }
  const bool ok = eq_fail + bound_fail + flag_fail == 0;
  return {ok ? Status::pass : Status::fail,
          fmt("200 splits, %llu labelings: oracle mismatches %d, bound violations %d, perfect-flag mismatches %d",
              static_cast<unsigned long long>(labelings), eq_fail, bound_fail, flag_fail)};
}

Outcome expectations() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(404);
  int outside = 0;
  int comparisons = 0;
  int sym_fail = 0;
  double worst_z = 0;
  for (int i = 0; i < 20; ++i) {
    const auto t = oracle::random_table(rng, 5, 6);
    for (int k = 1; k <= 9; ++k) {
      const double p = k / 10.0;
      const auto mc = oracle::mc_expected(t, p, 100000, 5000 + 10 * i + k);
      const std::pair<oracle::Estimate, double> pairs[] = {{mc.min_hinge, expected_min_hinge(t, p)},
                                                           {mc.ac_upper, expected_accuracy_upper(t, p)},
                                                           {mc.delta, expected_delta(t, p)}};
      for (const auto& [est, exact] : pairs) {
        ++comparisons;
        const double gap = std::abs(est.mean - exact);
        // A zero standard error means every trial gave the same value; only rounding may separate them.
        const double allowed = std::max(3 * est.standard_error, 1e-12);
        if (gap > allowed) ++outside;
        if (est.standard_error > 0) worst_z = std::max(worst_z, gap / est.standard_error);
      }
      if (k < 5) sym_fail += std::abs(expected_delta(t, p) - expected_delta(t, 1 - p)) > 1e-12;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = outside == 0 && sym_fail == 0 && secs < 120;
  return {ok ? Status::pass : Status::fail,
          fmt("%d comparisons, %d beyond 3 s.e. (max z %.2f), symmetry failures %d, %.1f s (limit 120 s)", comparisons,
              outside, worst_z, sym_fail, secs)};
}

Outcome envelope_checks() {
  const auto t0 = Clock::now();
  const bool endpoints = ar_min_heuristic(0.0) == 1.0 && ar_min_heuristic(1.0) == 0.5;

  std::mt19937_64 rng(505);
  std::exponential_distribution<double> ex(1.0);
  int dominated_fail = 0;
  int pairs = 0;
  double worst = -1;
  OptimizerConfig cfg;
  for (std::size_t d = 2; d <= 6; ++d) {
    for (int i = 0; i < 1000; ++i) {
      DistributionPair pr{std::vector<double>(d), std::vector<double>(d)};
      double a = 0;
      double b = 0;
      for (std::size_t j = 0; j < d; ++j) {
        a += pr.p_hat[j] = ex(rng);
        b += pr.n_hat[j] = ex(rng);
      }
      for (std::size_t j = 0; j < d; ++j) {
        pr.p_hat[j] /= a;
        pr.n_hat[j] /= b;
      }
      const double D = overlap_index(pr);
      if (!(D > 0 && D < 1)) continue;
      ++pairs;
      const double margin = ar_max_numeric(D, d, cfg).value - ar_upper_of_distributions(pr);
      worst = pairs == 1 ? margin : std::min(worst, margin);
      dominated_fail += margin < -1e-3;
    }
  }

  // D = 0 and D = 1 admit only separated and identical pairs: ar_max is 1 and 0.5 there.
  double max_gap = 0;
  for (int k = 0; k <= 20; ++k) {
    const double D = k / 20.0;
    double v10 = 1.0;
    double v12 = 1.0;
    if (k == 20) {
      v10 = v12 = 0.5;
    } else if (k > 0) {
      v10 = ar_max_numeric(D, 10, cfg).value;
      v12 = ar_max_numeric(D, 12, cfg).value;
    }
    max_gap = std::max(max_gap, std::abs(v10 - v12));
  }
  const double secs = seconds_since(t0);
  const bool ok = endpoints && dominated_fail == 0 && max_gap < 1e-2 && secs < 300;
  return {ok ? Status::pass : Status::fail,
          fmt("endpoints %s; %d pairs (1000 per d=2..6), %d undominated, min margin %.2e; d=10 vs d=12 max gap %.2e "
              "on 21 points; %.1f s (limit 300 s)",
              endpoints ? "exact" : "WRONG", pairs, dominated_fail, worst, max_gap, secs)};
}

Dataset random_dataset(std::mt19937_64& rng, std::size_t rows, std::size_t columns, int levels) {
  std::vector<ColumnSchema> schema;
  for (std::size_t c = 0; c < columns; ++c) schema.push_back(ColumnSchema::categorical("c" + std::to_string(c)));
  Dataset d(schema);
  std::uniform_int_distribution<int> tok(0, levels - 1);
  std::bernoulli_distribution lab(0.5);
  std::vector<std::string> row(columns);
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto& t : row) t = std::to_string(tok(rng));
    d.add_row(row, lab(rng) ? Label::positive : Label::negative);
  }
  if (d.count(Label::positive) == 0 || d.count(Label::negative) == 0) return random_dataset(rng, rows, columns, levels);
  return d;
}

Outcome feature_invariance() {
  std::mt19937_64 rng(606);
  int mono_fail = 0;
  int pairs = 0;
  int aug_fail = 0;
  int augments = 0;
  for (int i = 0; i < 50; ++i) {
    const auto d = random_dataset(rng, 40 + 10 * (i % 5), 5, 2 + i % 3);
    const auto names = d.column_names();
    for (unsigned mask = 1; mask < 32; ++mask) {
      std::vector<std::string> sub;
      for (unsigned c = 0; c < 5; ++c)
        if (mask >> c & 1) sub.push_back(names[c]);
      const auto base = bounds_for_subset(d, sub);
      for (unsigned c = 0; c < 5; ++c) {
        if (mask >> c & 1) continue;
        auto bigger = sub;
        bigger.push_back(names[c]);
        const auto more = bounds_for_subset(d, bigger);
        ++pairs;
        mono_fail += more.ar_upper < base.ar_upper || more.overlap > base.overlap + 1e-12;
      }
    }

    const auto base = bounds_report(build_pattern_table(d));
    auto compare = [&](const Dataset& aug) {
      const auto r = bounds_report(build_pattern_table(aug));
      ++augments;
      aug_fail += std::abs(r.ar_upper - base.ar_upper) > 1e-12 || std::abs(r.ac_upper - base.ac_upper) > 1e-12 ||
                  std::abs(r.overlap - base.overlap) > 1e-12;
    };
    compare(augment_transform(
        d, [](std::span<const std::string> t) { return t[0] + t[2] + t[4]; }, "combined"));
    compare(augment_transform(
        d, [](std::span<const std::string> t) { return std::to_string(std::stoi(t[1]) * 7 + std::stoi(t[3])); },
        "mixed"));
    for (double r : {0.0, 1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      compare(augment_neighborhood(d, r, NeighborAggregate::count, NeighborMetric::hamming));
      compare(augment_neighborhood(d, r, NeighborAggregate::mean, NeighborMetric::hamming));
    }
  }
  const bool ok = mono_fail == 0 && aug_fail == 0;
  return {ok ? Status::pass : Status::fail,
          fmt("50 datasets: %d (subset, column) pairs, %d monotonicity violations; %d augmentations, %d changed a bound",
              pairs, mono_fail, augments, aug_fail)};
}

Outcome sud_reproduction(const std::string& path, const std::string& label, const std::string& positive) {
  if (path.empty()) return {Status::skip, "no SUD data supplied (--sud PATH --sud-label COL --sud-positive TOKEN)"};
  const auto data = load_csv(path, label, positive);
  const auto r = bounds_report(build_pattern_table(data));
  const auto k = optimal_dimension_kstar(data);
  const bool ok = data.size() == 104 && std::abs(r.ar_upper - 0.9649) <= 1e-4 && std::abs(r.ap_upper - 0.9381) <= 1e-4 &&
                  std::abs(r.ac_upper - 0.9038) <= 1e-4 && std::abs(r.overlap - 0.3181) <= 1e-4 && k.k_star == 5;
  return {ok ? Status::pass : Status::fail,
          fmt("m=%zu AR=%.4f AP=%.4f AC=%.4f overlap=%.4f k*=%zu", data.size(), r.ar_upper, r.ap_upper, r.ac_upper,
              r.overlap, k.k_star)};
}

Outcome desk_scale() {
  const auto data = generate_synthetic(PoissonLaw{2.0}, 0.3, 500000, 808, 7);
  const auto t0 = Clock::now();
  const auto r = bounds_report(build_pattern_table(data));
  const double secs = seconds_since(t0);
  const bool ok = secs < 10 && r.m == 500000;
  return {ok ? Status::pass : Status::fail,
          fmt("500000 x 7 rows, %zu patterns, AR^u %.4f, table + report in %.2f s (limit 10 s)", r.d, r.ar_upper, secs)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance gate for the dataset bounds library"};
  std::string sud;
  std::string sud_label = "label";
  std::string sud_positive = "1";
  app.add_option("--sud", sud, "SUD CSV (104 rows) for the published-value check");
  app.add_option("--sud-label", sud_label, "Label column of the SUD CSV");
  app.add_option("--sud-positive", sud_positive, "Positive label token of the SUD CSV");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 oracle equivalence", oracle_equivalence},
      {"2 complementarity, range, ROC concavity", complementarity},
      {"3 delta lower bound", delta_machinery},
      {"4 expectations vs Monte Carlo", expectations},
      {"5 overlap envelope", envelope_checks},
      {"6 feature monotonicity and invariance", feature_invariance},
      {"7 SUD bounds", [&] { return sud_reproduction(sud, sud_label, sud_positive); }},
      {"8 desk-scale performance", desk_scale},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    failed += o.status == Status::fail;
    std::printf("%s  %-42s %s\n", tag, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
