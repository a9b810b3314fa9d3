#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "databound/bounds.hpp"
#include "databound/dataset.hpp"
#include "databound/error.hpp"
#include "databound/features.hpp"
#include "databound/oracle.hpp"
#include "databound/overlap.hpp"
#include "databound/report.hpp"
#include "databound/splits.hpp"

namespace databound::cli {

namespace {

struct InputOptions {
  std::string input;
  std::string label;
  std::string positive;
  std::string pattern_table;
  std::vector<std::string> columns;
  std::vector<std::string> bins;  // name=equal-width:B or name=quantile:B
};

struct OutputOptions {
  std::string format;
  std::string output;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input,-i", in.input, "CSV file with a header row");
  cmd->add_option("--label", in.label, "Name of the label column");
  cmd->add_option("--positive", in.positive, "Label token of the positive class");
  cmd->add_option("--pattern-table", in.pattern_table, "Pre-aggregated pattern,pos,neg CSV (replaces --input)");
  cmd->add_option("--columns", in.columns, "Feature columns to use (default: all but the label)")->delimiter(',');
  cmd->add_option("--bin", in.bins, "Bin a numeric column: NAME=equal-width:B or NAME=quantile:B (repeatable)");
}

void add_output_options(CLI::App* cmd, OutputOptions& out, const std::string& default_format,
                        const std::vector<std::string>& formats) {
  out.format = default_format;
  cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember(formats));
  cmd->add_option("--output,-o", out.output, "Write to this file instead of stdout");
}

std::vector<ColumnSchema> binning_schema(const std::vector<std::string>& specs) {
  std::vector<ColumnSchema> schema;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    const auto colon = spec.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos || eq == 0) {
      throw ArgumentError("--bin expects NAME=equal-width:B or NAME=quantile:B, got '" + spec + "'");
    }
    const std::string name = spec.substr(0, eq);
    const std::string rule = spec.substr(eq + 1, colon - eq - 1);
    std::size_t bins = 0;
    try {
      std::size_t used = 0;
      const long long b = std::stoll(spec.substr(colon + 1), &used);
      if (used != spec.size() - colon - 1 || b < 1) throw std::invalid_argument("bins");
      bins = static_cast<std::size_t>(b);
    } catch (const std::exception&) {
      throw ArgumentError("--bin '" + spec + "': bin count must be a positive integer");
    }
    if (rule == "equal-width") {
      schema.push_back(ColumnSchema::numeric(name, Binning::equal_width(bins)));
    } else if (rule == "quantile") {
      schema.push_back(ColumnSchema::numeric(name, Binning::quantile(bins)));
    } else {
      throw ArgumentError("--bin '" + spec + "': rule must be equal-width or quantile");
    }
  }
  return schema;
}

Dataset load_dataset(const InputOptions& in, std::ostream& err) {
  if (in.input.empty()) throw ArgumentError("--input is required (or --pattern-table where supported)");
  if (in.label.empty() || in.positive.empty()) throw ArgumentError("--label and --positive are required with --input");
  const auto binned = binning_schema(in.bins);
  std::vector<ColumnSchema> features;
  for (const auto& name : in.columns) {
    auto it = std::find_if(binned.begin(), binned.end(), [&](const ColumnSchema& c) { return c.name == name; });
    features.push_back(it == binned.end() ? ColumnSchema::categorical(name) : ColumnSchema::numeric(name));
  }
  Dataset data = load_csv(in.input, in.label, in.positive, features);
  if (binned.empty()) return data;
  std::vector<std::string> warnings;
  data = discretize(data, binned, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return data;
}

PatternTable load_table(const InputOptions& in, std::ostream& err) {
  if (!in.pattern_table.empty()) {
    if (!in.input.empty()) throw ArgumentError("give either --input or --pattern-table, not both");
    return read_pattern_table_csv_file(in.pattern_table);
  }
  return build_pattern_table(load_dataset(in, err));
}

// Expands a pattern table into rows; key tokens become columns c1..ck.
Dataset dataset_from_table(const PatternTable& table) {
  table.require_nonempty();
  const std::size_t k = table[0].key.size();
  std::vector<ColumnSchema> schema;
  for (std::size_t c = 0; c < k; ++c) schema.push_back(ColumnSchema::categorical("c" + std::to_string(c + 1)));
  Dataset data(schema);
  for (const auto& e : table.entries()) {
    if (e.key.size() != k) throw DataError("pattern table keys differ in length; cannot recover columns");
    for (Count i = 0; i < e.pos; ++i) data.add_row(e.key, Label::positive);
    for (Count i = 0; i < e.neg; ++i) data.add_row(e.key, Label::negative);
  }
  return data;
}

Dataset load_features_dataset(const InputOptions& in, std::ostream& err) {
  if (!in.pattern_table.empty()) {
    if (!in.input.empty()) throw ArgumentError("give either --input or --pattern-table, not both");
    return dataset_from_table(read_pattern_table_csv_file(in.pattern_table));
  }
  return load_dataset(in, err);
}

// "a:b:step" or a comma list. Grid points are rounded to 12 decimals so that
// 0.1:0.9:0.1 yields 0.3 rather than 0.30000000000000004.
std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ArgumentError("bad grid value '" + s + "' in '" + spec + "'");
    }
  };
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ArgumentError("grid must be START:STOP:STEP, got '" + spec + "'");
    const double a = number(parts[0]);
    const double b = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0) || b < a) throw ArgumentError("grid needs STEP > 0 and STOP >= START");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  }
  if (grid.empty()) throw ArgumentError("empty grid");
  return grid;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot open '" + path + "' for writing");
      out_ = file_.get();
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

void write_json(const OutputOptions& o, std::ostream& out, const nlohmann::json& j) {
  Sink sink(o.output, out);
  *sink << j.dump(2) << '\n';
}

std::map<PatternKey, Label> read_labeling(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labeling file '" + path + "'");
  std::map<PatternKey, Label> labeling;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (row == 1 && line.rfind("pattern", 0) == 0)) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw DataError(path + ": row " + std::to_string(row) + " lacks a label");
    const std::string value = line.substr(comma + 1);
    Label l;
    if (value == "1" || value == "+1") {
      l = Label::positive;
    } else if (value == "-1") {
      l = Label::negative;
    } else {
      throw DataError(path + ": row " + std::to_string(row) + ": label must be +1 or -1");
    }
    labeling[split_key(line.substr(0, comma))] = l;
  }
  return labeling;
}

bool same_ratio(const ExactRatio& a, const oracle::Fraction& b) {
  return a.num * b.den == static_cast<u128>(b.num) * a.den;
}

struct CheckRow {
  std::string property;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string detail;
};

std::vector<CheckRow> oracle_checks(std::uint64_t trials, std::uint64_t seed, std::size_t tables) {
  std::mt19937_64 rng(seed);
  CheckRow auc{"auc_roc_upper = brute_best_auc (exact)"};
  CheckRow pr{"auc_pr_upper = brute_best_pr_area (1e-12)"};
  CheckRow acc{"accuracy_upper = brute_best_accuracy (exact)"};
  CheckRow hinge{"min_hinge = brute_min_hinge (exact)"};
  CheckRow delta{"delta_lower_bound = brute_min_delta (exact)"};
  CheckRow sums{"expectations = double sums (1e-12)"};
  CheckRow mc{"expectations = Monte Carlo (3 s.e.)"};
  for (std::size_t t = 0; t < tables; ++t) {
    const PatternTable table = oracle::random_table(rng, 6, 4);
    ++auc.cases;
    auc.failures += !same_ratio(auc_roc_upper_exact(table), oracle::brute_best_auc(table).auc);
    ++pr.cases;
    pr.failures += std::abs(auc_pr_upper(table) - oracle::brute_best_pr_area(table)) > 1e-12;
    ++acc.cases;
    acc.failures += !same_ratio(accuracy_upper_exact(table), oracle::brute_best_accuracy(table));
    ++hinge.cases;
    hinge.failures += !same_ratio(min_hinge_exact(table), oracle::brute_min_hinge(table));

    const SplitTable split = oracle::random_split(rng, 10, 3);
    ++delta.cases;
    delta.failures += delta_lower_bound(split).raw != oracle::brute_min_delta_raw(split);

    for (double p : {0.3, 0.5, 0.7}) {
      const auto lit = oracle::double_sum_expected(table, p);
      ++sums.cases;
      sums.failures += std::abs(lit.min_hinge - expected_min_hinge(table, p)) > 1e-12 ||
                       std::abs(lit.ac_upper - expected_accuracy_upper(table, p)) > 1e-12 ||
                       std::abs(lit.delta - expected_delta(table, p)) > 1e-12;
    }
  }
  const std::size_t mc_tables = std::min<std::size_t>(tables, 5);
  std::mt19937_64 mc_rng(seed ^ 0x5DEECE66DULL);
  for (std::size_t t = 0; t < mc_tables; ++t) {
    const PatternTable table = oracle::random_table(mc_rng, 4, 6);
    for (double p : {0.3, 0.7}) {
      const auto est = oracle::mc_expected(table, p, trials, mc_rng());
      auto within = [](const oracle::Estimate& e, double v) {
        return std::abs(e.mean - v) <= 3 * e.standard_error + 1e-12;
      };
      ++mc.cases;
      mc.failures += !(within(est.min_hinge, expected_min_hinge(table, p)) &&
                       within(est.ac_upper, expected_accuracy_upper(table, p)) &&
                       within(est.delta, expected_delta(table, p)));
    }
  }
  mc.detail = std::to_string(trials) + " trials; about 1% of cases may exceed 3 s.e. by chance";
  return {auc, pr, acc, hinge, delta, sums, mc};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classifier-independent performance bounds of binary classification data", "databound"};
  app.require_subcommand(1);

  InputOptions in;
  OutputOptions fmt;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Seed for every random choice");
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* bounds = app.add_subcommand("bounds", "Report AR^u, AP^u, AC^u, minimum losses and overlap");
  add_input_options(bounds, in);
  add_output_options(bounds, fmt, "json", {"json"});
  add_common(bounds);

  std::string roc_path;
  std::string pr_path;
  auto* curves = app.add_subcommand("curves", "Write the optimal ROC and PR curve vertices");
  add_input_options(curves, in);
  add_common(curves);
  curves->add_option("--roc", roc_path, "Output CSV for fpr,tpr")->required();
  curves->add_option("--pr", pr_path, "Output CSV for recall,precision")->required();

  std::string train_path;
  std::string test_path;
  std::string train_table;
  std::string test_table;
  std::string labeling_path;
  double ratio = 0;
  auto* split = app.add_subcommand("split-analyze", "Delta lower bound of a train/test division");
  add_input_options(split, in);
  add_output_options(split, fmt, "json", {"json"});
  add_common(split);
  split->add_option("--train", train_path, "Training CSV (with --test)");
  split->add_option("--test", test_path, "Test CSV (with --train)");
  split->add_option("--train-table", train_table, "Training pattern table CSV");
  split->add_option("--test-table", test_table, "Test pattern table CSV");
  split->add_option("--ratio", ratio, "Train probability p for a random division of --input");
  split->add_option("--labeling", labeling_path, "CSV pattern,label (+1/-1) of a classifier to score");

  std::string grid_spec = "0.1:0.9:0.1";
  auto* sweep = app.add_subcommand("expected-sweep", "Expected bounds under random division over a p grid");
  add_input_options(sweep, in);
  add_output_options(sweep, fmt, "csv", {"csv", "json"});
  add_common(sweep);
  sweep->add_option("--grid", grid_spec, "START:STOP:STEP or comma list of p values");

  OptimizerConfig opt;
  std::size_t env_d = 10;
  bool with_max = false;
  auto add_optimizer = [&](CLI::App* cmd) {
    cmd->add_option("--d", env_d, "Pattern count of the optimization")->check(CLI::Range(2, 1000));
    cmd->add_option("--starts", opt.starts, "Multi-start count")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", opt.max_iters, "Inner iterations per subproblem")->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", opt.tolerance, "Accepted |overlap - D|")->check(CLI::PositiveNumber);
  };
  auto* overlap = app.add_subcommand("overlap", "Overlap index D_S and the AR^u envelope at it");
  add_input_options(overlap, in);
  add_output_options(overlap, fmt, "json", {"json"});
  add_common(overlap);
  add_optimizer(overlap);
  overlap->add_flag("--with-max", with_max, "Also solve for the envelope maximum at D_S");

  auto* env = app.add_subcommand("envelope", "Sample the (D_S, AR^u) feasible region");
  add_output_options(env, fmt, "csv", {"csv", "json"});
  add_common(env);
  add_optimizer(env);
  env->add_option("--grid", grid_spec, "START:STOP:STEP or comma list of D values");

  std::string mode = "exhaustive";
  std::uint64_t budget = 100000;
  std::size_t k_only = 0;
  double ktol = 1e-12;
  auto* feats = app.add_subcommand("features", "Best feature subsets and the minimal dimension k*");
  add_input_options(feats, in);
  add_output_options(feats, fmt, "csv", {"csv", "json"});
  add_common(feats);
  feats->add_option("--mode", mode, "Subset search")->check(CLI::IsMember({"exhaustive", "greedy"}));
  feats->add_option("--budget", budget, "Most subsets one exhaustive pass may score");
  feats->add_option("--k", k_only, "Only the best subset of this size")->check(CLI::PositiveNumber);
  feats->add_option("--tolerance", ktol, "Overlap tolerance for k*");

  std::uint64_t trials = 10000;
  std::size_t check_tables = 50;
  auto* check = app.add_subcommand("oracle-check", "Compare closed forms against brute-force oracles");
  add_common(check);
  check->add_option("--trials", trials, "Monte Carlo trials per case")->check(CLI::Range(1000, 100000000));
  check->add_option("--tables", check_tables, "Random tables per property")->check(CLI::PositiveNumber);

  if (args.empty()) {
    out << app.help();
    return kUsage;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::RequiredError& e) {
    err << "error: " << e.what() << '\n';
    return app.get_subcommands().empty() ? kUsage : kBadFlags;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadFlags;
  }

  try {
    if (bounds->parsed()) {
      const PatternTable table = load_table(in, err);
      write_json(fmt, out, to_json(bounds_report(table)));
    } else if (curves->parsed()) {
      const PatternTable table = load_table(in, err);
      const auto roc = optimal_roc_curve(table);
      const auto pr = optimal_pr_curve(table);
      {
        Sink a(roc_path, out);
        write_curve_csv(*a, roc);
        Sink b(pr_path, out);
        write_curve_csv(*b, pr);
      }
      err << "roc_area " << format_double(roc.area) << "\npr_area " << format_double(pr.area) << '\n';
    } else if (split->parsed()) {
      SplitTable st;
      const bool explicit_data = !train_path.empty() || !test_path.empty();
      const bool explicit_tables = !train_table.empty() || !test_table.empty();
      if (explicit_data + explicit_tables + (ratio != 0) != 1) {
        throw ArgumentError("choose one of --train/--test, --train-table/--test-table, or --ratio with --input");
      }
      if (explicit_data) {
        if (train_path.empty() || test_path.empty()) throw ArgumentError("--train and --test go together");
        InputOptions a = in;
        a.input = train_path;
        InputOptions b = in;
        b.input = test_path;
        st = SplitTable::from_tables(build_pattern_table(load_dataset(a, err)),
                                     build_pattern_table(load_dataset(b, err)));
      } else if (explicit_tables) {
        if (train_table.empty() || test_table.empty()) throw ArgumentError("--train-table and --test-table go together");
        st = SplitTable::from_tables(read_pattern_table_csv_file(train_table), read_pattern_table_csv_file(test_table));
      } else if (!in.pattern_table.empty()) {
        st = split_table_random(load_table(in, err), ratio, seed);
      } else {
        st = split_random(load_dataset(in, err), ratio, seed).table;
      }
      nlohmann::json j = to_json(delta_lower_bound(st), st);
      if (!labeling_path.empty()) {
        const auto gaps = delta_of_classifier(st, read_labeling(labeling_path));
        j["delta_train_f"] = gaps.delta_train;
        j["delta_test_f"] = gaps.delta_test;
      }
      write_json(fmt, out, j);
    } else if (sweep->parsed()) {
      const PatternTable table = load_table(in, err);
      const auto rows = expected_sweep(table, parse_grid(grid_spec));
      if (fmt.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
          j.push_back({{"p", r.p},
                       {"expected_min_hinge", r.expected_min_hinge},
                       {"expected_ac_upper", r.expected_ac_upper},
                       {"expected_delta", r.expected_delta}});
        }
        write_json(fmt, out, j);
      } else {
        Sink sink(fmt.output, out);
        write_sweep_csv(*sink, rows);
      }
    } else if (overlap->parsed()) {
      const PatternTable table = load_table(in, err);
      const auto pair = DistributionPair::from_table(table);
      const double d_s = overlap_index(pair);
      nlohmann::json j = {{"overlap", d_s},
                          {"js_divergence", js_divergence(pair)},
                          {"ar_upper", auc_roc_upper(table)},
                          {"ar_min_heuristic", ar_min_heuristic(d_s)}};
      if (with_max && d_s > 0 && d_s < 1) {
        opt.seed = seed;
        opt.threads = threads;
        const auto best = ar_max_numeric(d_s, env_d, opt);
        j["ar_max_numeric"] = best.value;
        j["ar_max_violation"] = best.violation;
        j["m_used"] = env_d;
      }
      write_json(fmt, out, j);
    } else if (env->parsed()) {
      opt.seed = seed;
      opt.threads = threads;
      const auto grid = parse_grid(grid_spec);
      const auto e = envelope(grid, env_d, opt);
      for (auto i : e.non_monotone) {
        err << "warning: ar_max rises at D=" << format_double(e.samples[i].d_s) << " (optimizer artifact)\n";
      }
      if (fmt.format == "json") {
        write_json(fmt, out, to_json(e));
      } else {
        Sink sink(fmt.output, out);
        write_envelope_csv(*sink, e);
      }
    } else if (feats->parsed()) {
      const Dataset data = load_features_dataset(in, err);
      SearchOptions so{budget, threads};
      if (k_only) {
        const SubsetScore s =
            mode == "greedy" ? greedy_best_subset(data, k_only) : exhaustive_best_subset(data, k_only, so);
        if (fmt.format == "json") {
          write_json(fmt, out, to_json(s));
        } else {
          Sink sink(fmt.output, out);
          write_subset_csv(*sink, std::span<const SubsetScore>(&s, 1), k_only);
        }
      } else {
        const auto r = optimal_dimension_kstar(
            data, ktol, mode == "greedy" ? SearchMode::greedy : SearchMode::exhaustive, so);
        err << "k_star " << r.k_star << '\n';
        if (fmt.format == "json") {
          write_json(fmt, out, to_json(r));
        } else {
          Sink sink(fmt.output, out);
          write_selection_csv(*sink, r);
        }
      }
    } else if (check->parsed()) {
      const auto rows = oracle_checks(trials, seed, check_tables);
      bool ok = true;
      out << std::left << std::setw(48) << "property" << std::setw(8) << "cases" << "result\n";
      for (const auto& r : rows) {
        ok = ok && r.failures == 0;
        out << std::setw(48) << r.property << std::setw(8) << r.cases
            << (r.failures ? "FAIL (" + std::to_string(r.failures) + ")" : std::string("pass"));
        if (!r.detail.empty()) out << "  " << r.detail;
        out << '\n';
      }
      return ok ? kOk : kCheckFailed;
    }
  } catch (const SingleClassError& e) {
    err << "error: " << e.what() << '\n';
    return kSingleClass;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kBadFlags;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kBadFlags;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace databound::cli
