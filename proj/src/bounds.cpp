#include "databound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

#include "databound/error.hpp"
#include "databound/overlap.hpp"

namespace databound {

namespace {

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// H(b) - H(a) for integers 0 <= a <= b.
double harmonic_difference(Count a, Count b) {
  if (b <= a) return 0.0;
  if (b - a <= 256) {
    double s = 0;
    for (Count i = b; i > a; --i) s += 1.0 / static_cast<double>(i);
    return s;
  }
  return boost::math::digamma(static_cast<double>(b) + 1.0) - boost::math::digamma(static_cast<double>(a) + 1.0);
}

void check_permutation(std::span<const std::size_t> ordering, std::size_t d) {
  if (ordering.size() != d) throw ArgumentError("ordering must list every pattern exactly once");
  std::vector<bool> seen(d, false);
  for (auto i : ordering) {
    if (i >= d || seen[i]) throw ArgumentError("ordering must list every pattern exactly once");
    seen[i] = true;
  }
}

}  // namespace

double ExactRatio::value() const {
  const u128 g = gcd128(num, den);
  const u128 n = g ? num / g : num;
  const u128 d = g ? den / g : den;
  return static_cast<double>(static_cast<long double>(n) / static_cast<long double>(d));
}

double trapezoid_area(std::span<const CurvePoint> points) {
  double area = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].x - points[i - 1].x) * (points[i].y + points[i - 1].y) / 2;
  }
  return area;
}

std::vector<std::size_t> optimal_order(const PatternTable& table) {
  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = table[a];
    const auto& eb = table[b];
    return static_cast<u128>(ea.pos) * eb.total() > static_cast<u128>(eb.pos) * ea.total();
  });
  return order;
}

ExactRatio ranking_auc_exact(const PatternTable& table, std::span<const std::size_t> ordering) {
  table.require_both_classes();
  check_permutation(ordering, table.size());
  u128 above_pos = 0;  // positives ranked strictly above the current pattern
  u128 num = 0;
  for (auto i : ordering) {
    const auto& e = table[i];
    num += 2 * above_pos * e.neg + static_cast<u128>(e.pos) * e.neg;
    above_pos += e.pos;
  }
  return {num, 2 * static_cast<u128>(table.n_plus()) * table.n_minus()};
}

double ranking_auc(const PatternTable& table, std::span<const std::size_t> ordering) {
  return ranking_auc_exact(table, ordering).value();
}

ExactRatio auc_roc_upper_exact(const PatternTable& table) {
  table.require_both_classes();
  const auto order = optimal_order(table);
  return ranking_auc_exact(table, order);
}

ExactRatio auc_roc_upper_pairwise(const PatternTable& table) {
  table.require_both_classes();
  u128 num = 0;
  for (const auto& a : table.entries()) {
    for (const auto& b : table.entries()) {
      num += std::max(static_cast<u128>(a.pos) * b.neg, static_cast<u128>(b.pos) * a.neg);
    }
  }
  return {num, 2 * static_cast<u128>(table.n_plus()) * table.n_minus()};
}

double auc_roc_upper(const PatternTable& table) { return auc_roc_upper_exact(table).value(); }

double auc_pr_upper(const PatternTable& table) {
  table.require_both_classes();
  const auto order = optimal_order(table);
  const double n_plus = static_cast<double>(table.n_plus());

  // Within a run of w samples sharing p = P/w, after k0 earlier samples whose
  // p values sum to C (= their positive count):
  //   precision(k0 + t) = (C + t p) / (k0 + t) = p + (C - k0 p) / (k0 + t).
  Count k0 = 0;
  Count cum_pos = 0;
  double area = 0;
  for (auto idx : order) {
    const auto& e = table[idx];
    const Count w = e.total();
    const double p = e.p_plus();
    const i128 excess_num = static_cast<i128>(cum_pos) * w - static_cast<i128>(k0) * e.pos;
    const double excess = static_cast<double>(excess_num) / static_cast<double>(w);  // C - k0 p

    const double prec_start = k0 == 0 ? p : static_cast<double>(cum_pos) / static_cast<double>(k0);
    const double sum_cur = static_cast<double>(e.pos) + (k0 == 0 ? 0.0 : excess * harmonic_difference(k0, k0 + w));
    const double sum_prev = prec_start + static_cast<double>(w - 1) * p +
                            (k0 == 0 ? 0.0 : excess * harmonic_difference(k0, k0 + w - 1));
    area += p / (2 * n_plus) * (sum_prev + sum_cur);

    cum_pos += e.pos;
    k0 += w;
  }
  return area;
}

double auc_pr_upper_per_sample(const PatternTable& table) {
  table.require_both_classes();
  const auto order = optimal_order(table);
  const double n_plus = static_cast<double>(table.n_plus());
  double cum = 0;
  double prev = table[order.front()].p_plus();
  double area = 0;
  Count k = 0;
  for (auto idx : order) {
    const double p = table[idx].p_plus();
    for (Count t = 0; t < table[idx].total(); ++t) {
      ++k;
      cum += p;
      const double prec = cum / static_cast<double>(k);
      area += p / (2 * n_plus) * (prev + prec);
      prev = prec;
    }
  }
  return area;
}

ExactRatio accuracy_upper_exact(const PatternTable& table) {
  table.require_nonempty();
  u128 num = 0;
  for (const auto& e : table.entries()) num += std::max(e.pos, e.neg);
  return {num, table.m()};
}

double accuracy_upper(const PatternTable& table) { return 1.0 - min_hinge_exact(table).value(); }

ExactRatio min_hinge_exact(const PatternTable& table) {
  table.require_nonempty();
  u128 num = 0;
  for (const auto& e : table.entries()) num += std::min(e.pos, e.neg);
  return {num, table.m()};
}

double min_loss(const PatternTable& table, LossKind kind) {
  table.require_nonempty();
  const double m = static_cast<double>(table.m());
  switch (kind) {
    case LossKind::hinge:
      return min_hinge_exact(table).value();
    case LossKind::square: {
      double s = 0;
      for (const auto& e : table.entries()) {
        s += 4.0 * static_cast<double>(e.pos) * static_cast<double>(e.neg) / static_cast<double>(e.total());
      }
      return s / m;
    }
    case LossKind::softmax: {
      double s = 0;
      for (const auto& e : table.entries()) {
        const double w = static_cast<double>(e.total());
        if (e.pos) s -= static_cast<double>(e.pos) * std::log(static_cast<double>(e.pos) / w);
        if (e.neg) s -= static_cast<double>(e.neg) * std::log(static_cast<double>(e.neg) / w);
      }
      return s / m;
    }
  }
  throw ArgumentError("unknown loss kind");
}

std::vector<PatternScore> optimal_scores(const PatternTable& table) {
  table.require_nonempty();
  std::vector<PatternScore> out;
  out.reserve(table.size());
  for (const auto& e : table.entries()) {
    const double p = e.p_plus();
    out.push_back({e.key, p, 2 * p - 1, e.total()});
  }
  return out;
}

CurvePoints optimal_roc_curve(const PatternTable& table) {
  table.require_both_classes();
  CurvePoints c;
  c.kind = CurvePoints::Kind::roc;
  c.points.reserve(table.size() + 1);
  c.points.push_back({0.0, 0.0});
  const double np = static_cast<double>(table.n_plus());
  const double nn = static_cast<double>(table.n_minus());
  Count cum_pos = 0;
  Count cum_neg = 0;
  const auto order = optimal_order(table);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& e = table[order[k]];
    cum_pos += e.pos;
    cum_neg += e.neg;
    // Patterns with equal p_plus share a score and form one vertex.
    if (k + 1 < order.size()) {
      const auto& next = table[order[k + 1]];
      if (static_cast<u128>(e.pos) * next.total() == static_cast<u128>(next.pos) * e.total()) continue;
    }
    c.points.push_back({static_cast<double>(cum_neg) / nn, static_cast<double>(cum_pos) / np});
  }
  c.area = trapezoid_area(c.points);
  return c;
}

CurvePoints optimal_pr_curve(const PatternTable& table) {
  table.require_both_classes();
  const auto order = optimal_order(table);
  CurvePoints c;
  c.kind = CurvePoints::Kind::pr;
  c.points.reserve(static_cast<std::size_t>(table.m()) + 1);
  const double np = static_cast<double>(table.n_plus());
  c.points.push_back({0.0, table[order.front()].p_plus()});
  Count k0 = 0;
  Count cum_pos = 0;
  for (auto idx : order) {
    const auto& e = table[idx];
    const double w = static_cast<double>(e.total());
    for (Count t = 1; t <= e.total(); ++t) {
      const double s = static_cast<double>(cum_pos) + static_cast<double>(t) * static_cast<double>(e.pos) / w;
      c.points.push_back({s / np, s / static_cast<double>(k0 + t)});
    }
    cum_pos += e.pos;
    k0 += e.total();
  }
  c.area = trapezoid_area(c.points);
  return c;
}

BoundsReport bounds_report(const PatternTable& table) {
  table.require_both_classes();
  BoundsReport r;
  r.ar_upper = auc_roc_upper(table);
  r.ap_upper = auc_pr_upper(table);
  r.ac_upper = accuracy_upper(table);
  r.min_square = min_loss(table, LossKind::square);
  r.min_hinge = min_loss(table, LossKind::hinge);
  r.min_softmax = min_loss(table, LossKind::softmax);
  r.overlap = overlap_index(table);
  r.n_plus = table.n_plus();
  r.n_minus = table.n_minus();
  r.m = table.m();
  r.d = table.size();
  return r;
}

}  // namespace databound
