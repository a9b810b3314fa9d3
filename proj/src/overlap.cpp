#include "databound/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

#include "databound/error.hpp"

namespace databound {

DistributionPair DistributionPair::from_table(const PatternTable& table) {
  table.require_both_classes();
  DistributionPair pair;
  pair.p_hat.reserve(table.size());
  pair.n_hat.reserve(table.size());
  const double np = static_cast<double>(table.n_plus());
  const double nn = static_cast<double>(table.n_minus());
  for (const auto& e : table.entries()) {
    pair.p_hat.push_back(static_cast<double>(e.pos) / np);
    pair.n_hat.push_back(static_cast<double>(e.neg) / nn);
  }
  return pair;
}

void DistributionPair::validate(double tolerance) const {
  if (p_hat.size() != n_hat.size()) throw ArgumentError("distributions differ in length");
  if (p_hat.empty()) throw ArgumentError("distributions are empty");
  auto check = [&](const std::vector<double>& v, const char* name) {
    double s = 0;
    for (double x : v) {
      if (!(x >= 0) || !std::isfinite(x)) throw ArgumentError(std::string(name) + " has a negative or non-finite entry");
      s += x;
    }
    if (std::abs(s - 1.0) > tolerance) throw ArgumentError(std::string(name) + " does not sum to 1");
  };
  check(p_hat, "p_hat");
  check(n_hat, "n_hat");
}

namespace {

// x log2(x / (x + y)) with 0 log 0 = 0.
double xlog2_share(double x, double y) {
  if (x <= 0) return 0.0;
  return x * std::log2(x / (x + y));
}

}  // namespace

double overlap_index(const DistributionPair& pair) {
  double s = 0;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    s += xlog2_share(pair.p_hat[i], pair.n_hat[i]) + xlog2_share(pair.n_hat[i], pair.p_hat[i]);
  }
  return std::clamp(-0.5 * s, 0.0, 1.0);
}

double overlap_index(const PatternTable& table) { return overlap_index(DistributionPair::from_table(table)); }

double js_divergence(const DistributionPair& pair) {
  auto kl_to_mixture = [&](const std::vector<double>& a) {
    double s = 0;
    for (std::size_t i = 0; i < pair.size(); ++i) {
      const double mix = 0.5 * (pair.p_hat[i] + pair.n_hat[i]);
      if (a[i] > 0) s += a[i] * std::log2(a[i] / mix);
    }
    return s;
  };
  return 0.5 * (kl_to_mixture(pair.p_hat) + kl_to_mixture(pair.n_hat));
}

namespace {

// Indices sorted by p/n descending (pattern most indicative of the positive class first).
std::vector<std::size_t> ratio_order(std::span<const double> p, std::span<const double> n) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] * n[b] > p[b] * n[a]; });
  return order;
}

// AUC of the ranking `order` (first = highest score) with half credit inside a pattern.
double ordered_auc(std::span<const double> p, std::span<const double> n, std::span<const std::size_t> order) {
  double above = 0;
  double auc = 0;
  for (auto i : order) {
    auc += n[i] * (above + 0.5 * p[i]);
    above += p[i];
  }
  return auc;
}

}  // namespace

double ar_upper_of_distributions(const DistributionPair& pair) {
  if (pair.p_hat.size() != pair.n_hat.size()) throw ArgumentError("distributions differ in length");
  return ordered_auc(pair.p_hat, pair.n_hat, ratio_order(pair.p_hat, pair.n_hat));
}

double heuristic_overlap(double b) {
  const double blogb = b > 0 ? b * std::log2(b) : 0.0;
  return -0.5 * (blogb - (b + 1) * std::log2(b + 1));
}

double ar_min_heuristic(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw ArgumentError("overlap must lie in [0, 1]");
  if (overlap == 0.0) return 1.0;
  if (overlap == 1.0) return 0.5;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (heuristic_overlap(mid) < overlap ? lo : hi) = mid;
  }
  return 1.0 - 0.5 * (0.5 * (lo + hi));
}

// ---------------------------------------------------------------------------
// Constrained search over pairs of distributions.
//
// Variables x = (p, n), each on the probability simplex. The single equality
// constraint c(x) = overlap(x) - D is handled by an augmented Lagrangian
//   L(x) = s f(x) + lambda c(x) + rho/2 c(x)^2,
// minimized over the simplices by spectral projected gradient with a
// nonmonotone line search. For maximization f is the AUC of a fixed index
// ranking, which is bilinear and smooth; its maximum over all x equals the
// maximum of the ranking-free bound because relabeling indices is free. For
// minimization f is the ranking-free bound itself, piecewise bilinear.
// ---------------------------------------------------------------------------

namespace {

constexpr double kLogEps = 1e-15;

void project_simplex(std::span<double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0;
  double theta = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  for (auto& x : v) x = std::max(0.0, x - theta);
}

class OverlapProblem {
 public:
  OverlapProblem(std::size_t d, double target, bool maximize) : d_(d), target_(target), maximize_(maximize) {
    identity_.resize(d);
    std::iota(identity_.begin(), identity_.end(), std::size_t{0});
  }

  std::size_t d() const { return d_; }

  double overlap(std::span<const double> x) const {
    double s = 0;
    for (std::size_t i = 0; i < d_; ++i) {
      const double p = x[i];
      const double n = x[d_ + i];
      s += xlog2_share(p, n) + xlog2_share(n, p);
    }
    return -0.5 * s;
  }

  double constraint(std::span<const double> x) const { return overlap(x) - target_; }

  // Signed objective to minimize, with its gradient.
  double objective(std::span<const double> x, std::span<double> grad) const {
    std::span<const double> p = x.first(d_);
    std::span<const double> n = x.subspan(d_, d_);
    std::vector<std::size_t> order = maximize_ ? identity_ : ratio_order(p, n);
    const double sign = maximize_ ? -1.0 : 1.0;
    // auc = sum over order positions k: n[o_k] (P_above_k + p[o_k]/2)
    double above = 0;
    double auc = 0;
    for (auto i : order) {
      auc += n[i] * (above + 0.5 * p[i]);
      grad[d_ + i] = sign * (above + 0.5 * p[i]);
      above += p[i];
    }
    double below_neg = 0;  // negatives ranked after the current pattern
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      grad[*it] = sign * (below_neg + 0.5 * n[*it]);
      below_neg += n[*it];
    }
    return sign * auc;
  }

  void constraint_grad(std::span<const double> x, std::span<double> grad) const {
    for (std::size_t i = 0; i < d_; ++i) {
      const double p = x[i];
      const double n = x[d_ + i];
      const double s = p + n + 2 * kLogEps;
      grad[i] = -0.5 * std::log2((p + kLogEps) / s);
      grad[d_ + i] = -0.5 * std::log2((n + kLogEps) / s);
    }
  }

  double value(std::span<const double> x) const {
    DistributionPair pair{{x.begin(), x.begin() + static_cast<std::ptrdiff_t>(d_)},
                          {x.begin() + static_cast<std::ptrdiff_t>(d_), x.end()}};
    return ar_upper_of_distributions(pair);
  }

  void project(std::span<double> x) const {
    project_simplex(x.first(d_));
    project_simplex(x.subspan(d_, d_));
  }

 private:
  std::size_t d_;
  double target_;
  bool maximize_;
  std::vector<std::size_t> identity_;
};

struct StartResult {
  double value = 0;
  double violation = std::numeric_limits<double>::infinity();
  std::vector<double> x;
};

class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const OverlapProblem& problem, const OptimizerConfig& config)
      : pb_(problem), cfg_(config), n_(2 * problem.d()), g_obj_(n_), g_con_(n_) {}

  StartResult solve(std::vector<double> x) {
    pb_.project(x);
    double lambda = 0;
    double rho = 10;
    double prev_violation = std::abs(pb_.constraint(x));
    for (std::size_t outer = 0; outer < cfg_.max_outer; ++outer) {
      minimize_inner(x, lambda, rho);
      const double c = pb_.constraint(x);
      if (std::abs(c) <= 1e-10) break;
      lambda += rho * c;
      if (std::abs(c) > 0.25 * prev_violation) rho = std::min(rho * 10, 1e10);
      prev_violation = std::abs(c);
    }
    restore_upward(x);
    return {pb_.value(x), std::abs(pb_.constraint(x)), x};
  }

 private:
  double merit(std::span<const double> x, double lambda, double rho, std::span<double> grad) {
    const double f = pb_.objective(x, g_obj_);
    const double c = pb_.constraint(x);
    pb_.constraint_grad(x, g_con_);
    const double w = lambda + rho * c;
    for (std::size_t i = 0; i < n_; ++i) grad[i] = g_obj_[i] + w * g_con_[i];
    return f + lambda * c + 0.5 * rho * c * c;
  }

  // Spectral projected gradient with a nonmonotone (last 10 values) Armijo search.
  void minimize_inner(std::vector<double>& x, double lambda, double rho) {
    constexpr std::size_t kMemory = 10;
    constexpr double kAlphaMin = 1e-12;
    constexpr double kAlphaMax = 1e12;
    std::vector<double> grad(n_), trial(n_), trial_grad(n_), dir(n_);
    double f = merit(x, lambda, rho, grad);
    std::vector<double> history{f};
    double alpha = 1.0;
    for (std::size_t it = 0; it < cfg_.max_iters; ++it) {
      for (std::size_t i = 0; i < n_; ++i) trial[i] = x[i] - alpha * grad[i];
      pb_.project(trial);
      double gd = 0;
      double step_norm = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        dir[i] = trial[i] - x[i];
        gd += grad[i] * dir[i];
        step_norm = std::max(step_norm, std::abs(dir[i]));
      }
      if (step_norm < 1e-13 || gd >= 0) break;

      const double f_ref = *std::max_element(history.begin(), history.end());
      double t = 1.0;
      double f_trial = 0;
      for (int ls = 0; ls < 60; ++ls) {
        for (std::size_t i = 0; i < n_; ++i) trial[i] = x[i] + t * dir[i];
        f_trial = merit(trial, lambda, rho, trial_grad);
        if (f_trial <= f_ref + 1e-4 * t * gd) break;
        t *= 0.5;
      }
      double sy = 0;
      double ss = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        const double s = trial[i] - x[i];
        ss += s * s;
        sy += s * (trial_grad[i] - grad[i]);
      }
      x.swap(trial);
      grad.swap(trial_grad);
      f = f_trial;
      history.push_back(f);
      if (history.size() > kMemory) history.erase(history.begin());
      alpha = sy > 0 ? std::clamp(ss / sy, kAlphaMin, kAlphaMax) : kAlphaMax;
      if (ss < 1e-30) break;
    }
  }

  // If the overlap fell short of the target, slide toward the merged pair
  // ((p+n)/2, (p+n)/2), whose overlap is 1. Overlap is concave along that
  // segment and maximal at its end, so bisection lands on the target.
  void restore_upward(std::vector<double>& x) const {
    if (pb_.constraint(x) >= 0) return;
    const std::size_t d = pb_.d();
    std::vector<double> merged(n_);
    for (std::size_t i = 0; i < d; ++i) merged[i] = merged[d + i] = 0.5 * (x[i] + x[d + i]);
    std::vector<double> y(n_);
    auto at = [&](double t) {
      for (std::size_t i = 0; i < n_; ++i) y[i] = (1 - t) * x[i] + t * merged[i];
      return pb_.constraint(y);
    };
    double lo = 0;
    double hi = 1;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      (at(mid) < 0 ? lo : hi) = mid;
    }
    at(hi);
    x = y;
  }

  const OverlapProblem& pb_;
  const OptimizerConfig& cfg_;
  std::size_t n_;
  std::vector<double> g_obj_;
  std::vector<double> g_con_;
};

std::vector<double> random_start(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(2 * d);
  for (std::size_t half = 0; half < 2; ++half) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += (x[half * d + i] = expo(rng));
    for (std::size_t i = 0; i < d; ++i) x[half * d + i] /= s;
  }
  return x;
}

NumericBound optimize(double overlap, std::size_t d, const OptimizerConfig& config, bool maximize) {
  if (!(overlap > 0.0 && overlap < 1.0)) throw ArgumentError("target overlap must lie in (0, 1)");
  if (d < 2) throw ArgumentError("pattern count d must be at least 2");
  if (config.starts == 0) throw ArgumentError("at least one start is required");

  const OverlapProblem problem(d, overlap, maximize);
  auto run = [&](std::size_t start) {
    AugmentedLagrangian solver(problem, config);
    const std::uint64_t seed = config.seed * 0x9E3779B97F4A7C15ULL + start + 1;
    return solver.solve(random_start(d, seed));
  };

  std::vector<StartResult> results(config.starts);
  const std::size_t workers = std::max<std::size_t>(1, config.threads);
  if (workers == 1) {
    for (std::size_t s = 0; s < config.starts; ++s) results[s] = run(s);
  } else {
    for (std::size_t base = 0; base < config.starts; base += workers) {
      std::vector<std::future<StartResult>> batch;
      for (std::size_t s = base; s < std::min(config.starts, base + workers); ++s) {
        batch.push_back(std::async(std::launch::async, run, s));
      }
      for (std::size_t k = 0; k < batch.size(); ++k) results[base + k] = batch[k].get();
    }
  }

  NumericBound best;
  double best_violation = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < results.size(); ++s) {
    const auto& r = results[s];
    best_violation = std::min(best_violation, r.violation);
    if (r.violation > config.tolerance) continue;
    const bool better = !best.feasible || (maximize ? r.value > best.value : r.value < best.value);
    if (better) {
      best.feasible = true;
      best.value = r.value;
      best.violation = r.violation;
      best.best_start = s;
      best.argbest.p_hat.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(d));
      best.argbest.n_hat.assign(r.x.begin() + static_cast<std::ptrdiff_t>(d), r.x.end());
    }
  }
  if (!best.feasible) {
    throw Error("no feasible start found for overlap " + std::to_string(overlap) +
                " (best violation " + std::to_string(best_violation) + ")");
  }
  return best;
}

}  // namespace

NumericBound ar_max_numeric(double overlap, std::size_t d, const OptimizerConfig& config) {
  return optimize(overlap, d, config, true);
}

NumericBound ar_min_numeric(double overlap, std::size_t d, const OptimizerConfig& config) {
  return optimize(overlap, d, config, false);
}

OverlapEnvelope envelope(std::span<const double> grid, std::size_t d, const OptimizerConfig& config) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw ArgumentError("envelope grid values must lie in (0, 1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ArgumentError("envelope grid must be strictly increasing");
  }
  OverlapEnvelope env;
  env.m_used = d;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lo = ar_min_heuristic(grid[i]);
    const double hi = ar_max_numeric(grid[i], d, config).value;
    env.samples.push_back({grid[i], lo, hi});
    if (i > 0 && hi > env.samples[i - 1].ar_max) env.non_monotone.push_back(i);
  }
  return env;
}

}  // namespace databound
