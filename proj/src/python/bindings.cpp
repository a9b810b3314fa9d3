#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "databound/bounds.hpp"
#include "databound/dataset.hpp"
#include "databound/error.hpp"
#include "databound/features.hpp"
#include "databound/overlap.hpp"
#include "databound/pattern_table.hpp"
#include "databound/report.hpp"
#include "databound/splits.hpp"

namespace py = pybind11;
using namespace databound;

namespace {

// Keys may be given as a string (one token, or '|'-joined) or a sequence of tokens.
PatternKey to_key(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return split_key(h.cast<std::string>());
  return h.cast<PatternKey>();
}

PatternTable table_from_rows(const py::iterable& rows) {
  std::vector<PatternEntry> entries;
  for (const auto& row : rows) {
    const auto t = row.cast<py::tuple>();
    if (t.size() != 3) throw ArgumentError("pattern rows are (key, pos, neg)");
    entries.push_back({to_key(t[0]), t[1].cast<Count>(), t[2].cast<Count>()});
  }
  return PatternTable(std::move(entries));
}

py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::list curve_points(const CurvePoints& c) {
  py::list out;
  for (const auto& p : c.points) out.append(py::make_tuple(p.x, p.y));
  return out;
}

std::vector<ColumnSchema> categorical(const std::vector<std::string>& columns) {
  std::vector<ColumnSchema> schema;
  for (const auto& c : columns) schema.push_back(ColumnSchema::categorical(c));
  return schema;
}

}  // namespace

PYBIND11_MODULE(_databound, m) {
  m.doc() = "Classifier-independent performance bounds of binary classification datasets";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", base);
  py::register_exception<SingleClassError>(m, "SingleClassError", base);
  py::register_exception<ArgumentError>(m, "ArgumentError", base);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);

  py::class_<PatternTable>(m, "PatternTable")
      .def(py::init(&table_from_rows), py::arg("rows"), "Table from (key, pos, neg) rows.")
      .def_static("read_csv", &read_pattern_table_csv_file, py::arg("path"))
      .def_property_readonly("n_plus", &PatternTable::n_plus)
      .def_property_readonly("n_minus", &PatternTable::n_minus)
      .def_property_readonly("m", &PatternTable::m)
      .def("__len__", &PatternTable::size)
      .def("rows",
           [](const PatternTable& t) {
             py::list out;
             for (const auto& e : t.entries()) out.append(py::make_tuple(join_key(e.key), e.pos, e.neg));
             return out;
           })
      .def("__eq__", [](const PatternTable& a, const PatternTable& b) { return a == b; });

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("columns", &Dataset::column_names)
      .def("__len__", &Dataset::size)
      .def("pattern_table",
           [](const Dataset& d, const std::vector<std::string>& subset) {
             return subset.empty() ? build_pattern_table(d) : build_pattern_table(d, subset);
           },
           py::arg("subset") = std::vector<std::string>{});

  m.def("load_csv",
        [](const std::string& path, const std::string& label, const std::string& positive,
           const std::vector<std::string>& columns) { return load_csv(path, label, positive, categorical(columns)); },
        py::arg("path"), py::arg("label"), py::arg("positive"), py::arg("columns") = std::vector<std::string>{});

  m.def("auc_roc_upper", &auc_roc_upper, py::arg("table"));
  m.def("auc_pr_upper", &auc_pr_upper, py::arg("table"));
  m.def("accuracy_upper", &accuracy_upper, py::arg("table"));
  m.def("min_loss",
        [](const PatternTable& t, const std::string& kind) {
          if (kind == "square") return min_loss(t, LossKind::square);
          if (kind == "hinge") return min_loss(t, LossKind::hinge);
          if (kind == "softmax") return min_loss(t, LossKind::softmax);
          throw ArgumentError("loss must be square, hinge or softmax");
        },
        py::arg("table"), py::arg("kind"));
  m.def("bounds_report", [](const PatternTable& t) { return json_to_py(to_json(bounds_report(t))); },
        py::arg("table"), "Every bound of the table as a dict.");
  m.def("optimal_scores",
        [](const PatternTable& t) {
          py::list out;
          for (const auto& s : optimal_scores(t)) {
            out.append(py::make_tuple(join_key(s.key), s.f_star, s.label() == Label::positive ? 1 : -1));
          }
          return out;
        },
        py::arg("table"), "(key, f*, label) per pattern, best first.");
  m.def("optimal_roc_curve", [](const PatternTable& t) { return curve_points(optimal_roc_curve(t)); },
        py::arg("table"));
  m.def("optimal_pr_curve", [](const PatternTable& t) { return curve_points(optimal_pr_curve(t)); },
        py::arg("table"));

  m.def("overlap_index", py::overload_cast<const PatternTable&>(&overlap_index), py::arg("table"));
  m.def("ar_min_heuristic", &ar_min_heuristic, py::arg("overlap"));
  m.def("ar_max_numeric",
        [](double overlap, std::size_t d, std::size_t starts, std::uint64_t seed) {
          OptimizerConfig cfg;
          cfg.starts = starts;
          cfg.seed = seed;
          const auto r = ar_max_numeric(overlap, d, cfg);
          return py::dict(py::arg("value") = r.value, py::arg("violation") = r.violation,
                          py::arg("p_hat") = r.argbest.p_hat, py::arg("n_hat") = r.argbest.n_hat);
        },
        py::arg("overlap"), py::arg("d") = 10, py::arg("starts") = 16, py::arg("seed") = 0);

  m.def("delta_lower_bound",
        [](const PatternTable& train, const PatternTable& test) {
          const auto split = SplitTable::from_tables(train, test);
          return json_to_py(to_json(delta_lower_bound(split), split));
        },
        py::arg("train"), py::arg("test"));
  m.def("expected_min_hinge", &expected_min_hinge, py::arg("table"), py::arg("p"));
  m.def("expected_accuracy_upper", &expected_accuracy_upper, py::arg("table"), py::arg("p"));
  m.def("expected_delta", &expected_delta, py::arg("table"), py::arg("p"));

  m.def("bounds_for_subset", [](const Dataset& d, const std::vector<std::string>& s) {
    return json_to_py(to_json(bounds_for_subset(d, s)));
  }, py::arg("data"), py::arg("subset"));
  m.def("best_subset",
        [](const Dataset& d, std::size_t k, const std::string& mode, std::uint64_t budget) {
          if (mode == "greedy") return json_to_py(to_json(greedy_best_subset(d, k)));
          if (mode != "exhaustive") throw ArgumentError("mode must be exhaustive or greedy");
          return json_to_py(to_json(exhaustive_best_subset(d, k, {budget, 1})));
        },
        py::arg("data"), py::arg("k"), py::arg("mode") = "exhaustive", py::arg("budget") = 100000);
  m.def("optimal_dimension_kstar",
        [](const Dataset& d, const std::string& mode, std::uint64_t budget) {
          if (mode != "exhaustive" && mode != "greedy") throw ArgumentError("mode must be exhaustive or greedy");
          return json_to_py(to_json(optimal_dimension_kstar(
              d, 1e-12, mode == "greedy" ? SearchMode::greedy : SearchMode::exhaustive, {budget, 1})));
        },
        py::arg("data"), py::arg("mode") = "exhaustive", py::arg("budget") = 100000);
}
