#include "databound/report.hpp"

#include <charconv>

#include "databound/csv.hpp"

namespace databound {

nlohmann::json to_json(const BoundsReport& r) {
  return {
      {"ar_upper", r.ar_upper},   {"ap_upper", r.ap_upper},       {"ac_upper", r.ac_upper},
      {"min_square", r.min_square}, {"min_hinge", r.min_hinge},   {"min_softmax", r.min_softmax},
      {"overlap", r.overlap},     {"n_plus", r.n_plus},           {"n_minus", r.n_minus},
      {"m", r.m},                 {"d", r.d},
  };
}

BoundsReport bounds_report_from_json(const nlohmann::json& j) {
  BoundsReport r;
  r.ar_upper = j.at("ar_upper").get<double>();
  r.ap_upper = j.at("ap_upper").get<double>();
  r.ac_upper = j.at("ac_upper").get<double>();
  r.min_square = j.at("min_square").get<double>();
  r.min_hinge = j.at("min_hinge").get<double>();
  r.min_softmax = j.at("min_softmax").get<double>();
  r.overlap = j.at("overlap").get<double>();
  r.n_plus = j.at("n_plus").get<Count>();
  r.n_minus = j.at("n_minus").get<Count>();
  r.m = j.at("m").get<Count>();
  r.d = j.at("d").get<std::size_t>();
  return r;
}

nlohmann::json to_json(const DeltaReport& r, const SplitTable& split) {
  nlohmann::json patterns = nlohmann::json::array();
  for (std::size_t i = 0; i < split.size(); ++i) {
    const auto& e = split[i];
    patterns.push_back({{"pattern", join_key(e.key)},
                        {"p_train", e.p_train},
                        {"n_train", e.n_train},
                        {"p_test", e.p_test},
                        {"n_test", e.n_test},
                        {"delta", r.per_pattern[i]},
                        {"delta_raw", r.per_pattern_raw[i]}});
  }
  nlohmann::json j = {{"delta", r.delta},
                      {"delta_raw", r.raw},
                      {"perfect", r.perfect},
                      {"m", split.m()},
                      {"m_train", split.m_train()},
                      {"m_test", split.m_test()},
                      {"per_pattern", patterns}};
  if (split.ratio()) j["p"] = *split.ratio();
  return j;
}

nlohmann::json to_json(const SubsetScore& s) {
  return {{"subset", s.subset}, {"ar_upper", s.ar_upper}, {"overlap", s.overlap}, {"d_patterns", s.d_patterns}};
}

nlohmann::json to_json(const SelectionResult& r) {
  nlohmann::json by_ar = nlohmann::json::array();
  nlohmann::json by_overlap = nlohmann::json::array();
  for (const auto& s : r.best_by_ar) by_ar.push_back(to_json(s));
  for (const auto& s : r.best_by_overlap) by_overlap.push_back(to_json(s));
  return {{"mode", r.mode == SearchMode::exhaustive ? "exhaustive" : "greedy"},
          {"best_by_ar", by_ar},
          {"best_by_overlap", by_overlap},
          {"full_overlap", r.full_overlap},
          {"k_star", r.k_star},
          {"global", to_json(r.global)}};
}

nlohmann::json to_json(const OverlapEnvelope& e) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : e.samples) samples.push_back({{"d_s", s.d_s}, {"ar_min", s.ar_min}, {"ar_max", s.ar_max}});
  return {{"samples", samples}, {"m_used", e.m_used}, {"non_monotone", e.non_monotone}};
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, const CurvePoints& curve) {
  out << (curve.kind == CurvePoints::Kind::roc ? "fpr,tpr\n" : "recall,precision\n");
  for (const auto& pt : curve.points) out << format_double(pt.x) << ',' << format_double(pt.y) << '\n';
}

std::vector<SweepRow> expected_sweep(const PatternTable& table, std::span<const double> grid) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double p : grid) {
    rows.push_back({p, expected_min_hinge(table, p), expected_accuracy_upper(table, p), expected_delta(table, p)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "p,expected_min_hinge,expected_ac_upper,expected_delta\n";
  for (const auto& r : rows) {
    out << format_double(r.p) << ',' << format_double(r.expected_min_hinge) << ','
        << format_double(r.expected_ac_upper) << ',' << format_double(r.expected_delta) << '\n';
  }
}

void write_envelope_csv(std::ostream& out, const OverlapEnvelope& e) {
  out << "d_s,ar_min,ar_max\n";
  for (const auto& s : e.samples) {
    out << format_double(s.d_s) << ',' << format_double(s.ar_min) << ',' << format_double(s.ar_max) << '\n';
  }
}

void write_subset_csv(std::ostream& out, std::span<const SubsetScore> rows, std::size_t first_k) {
  out << "k,best_subset,ar_upper,overlap\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& s = rows[i];
    std::string joined;
    for (std::size_t c = 0; c < s.subset.size(); ++c) joined += (c ? "|" : "") + s.subset[c];
    csv::write_row(out, {std::to_string(first_k + i), joined, format_double(s.ar_upper), format_double(s.overlap)});
  }
}

void write_selection_csv(std::ostream& out, const SelectionResult& r) { write_subset_csv(out, r.best_by_ar, 1); }

}  // namespace databound
