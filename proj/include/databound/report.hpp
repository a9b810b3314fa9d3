#pragma once

#include <ostream>
#include <span>

#include <nlohmann/json.hpp>

#include "databound/bounds.hpp"
#include "databound/features.hpp"
#include "databound/overlap.hpp"
#include "databound/splits.hpp"

namespace databound {

// JSON numbers are written by nlohmann::json in shortest round-trip form, so
// parsing the text recovers every double bit for bit.

nlohmann::json to_json(const BoundsReport& r);
BoundsReport bounds_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DeltaReport& r, const SplitTable& split);
nlohmann::json to_json(const SubsetScore& s);
nlohmann::json to_json(const SelectionResult& r);
nlohmann::json to_json(const OverlapEnvelope& e);

/// Shortest decimal string that parses back to `v`.
std::string format_double(double v);

/// `fpr,tpr` or `recall,precision` header, one vertex per row.
void write_curve_csv(std::ostream& out, const CurvePoints& curve);

struct SweepRow {
  double p = 0;
  double expected_min_hinge = 0;
  double expected_ac_upper = 0;
  double expected_delta = 0;
};

std::vector<SweepRow> expected_sweep(const PatternTable& table, std::span<const double> grid);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_envelope_csv(std::ostream& out, const OverlapEnvelope& e);
/// `k,best_subset,ar_upper,overlap` with subset names joined by '|'; row i
/// is labeled k = first_k + i.
void write_subset_csv(std::ostream& out, std::span<const SubsetScore> rows, std::size_t first_k);
/// The ar-best list of `r` from k = 1.
void write_selection_csv(std::ostream& out, const SelectionResult& r);

}  // namespace databound
