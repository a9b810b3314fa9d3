#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "databound/bounds.hpp"
#include "databound/features.hpp"
#include "databound/oracle.hpp"
#include "databound/report.hpp"
#include "support.hpp"

using namespace databound;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kT1 = "x,y\na,1\na,1\na,0\nb,1\nb,0\nb,0\n";

}  // namespace

TEST_CASE("bounds report JSON round trip is bit exact") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const auto r = bounds_report(oracle::random_table(rng, 10, 50));
    const auto back = bounds_report_from_json(nlohmann::json::parse(to_json(r).dump()));
    CHECK(back.ar_upper == r.ar_upper);
    CHECK(back.ap_upper == r.ap_upper);
    CHECK(back.ac_upper == r.ac_upper);
    CHECK(back.min_square == r.min_square);
    CHECK(back.min_hinge == r.min_hinge);
    CHECK(back.min_softmax == r.min_softmax);
    CHECK(back.overlap == r.overlap);
    CHECK(back.m == r.m);
    CHECK(back.d == r.d);
  }
}

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("cli usage and exit codes") {
  test_support::TempDir dir;
  const auto t1 = dir.write("t1.csv", kT1);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"bounds", "--help"}).code == cli::kOk);
  CHECK(run({"bounds", "--bogus"}).code == cli::kBadFlags);
  CHECK(run({"nonsense"}).code == cli::kUsage);
  CHECK(run({"bounds", "--input", t1, "--label", "nope", "--positive", "1"}).code == cli::kDataError);
  CHECK(run({"bounds", "--input", dir.file("missing.csv"), "--label", "y", "--positive", "1"}).code ==
        cli::kDataError);
  const auto single = dir.write("single.csv", "x,y\na,1\nb,1\n");
  CHECK(run({"bounds", "--input", single, "--label", "y", "--positive", "1"}).code == cli::kSingleClass);
  CHECK(run({"bounds", "--input", t1, "--label", "y"}).code == cli::kBadFlags);
  CHECK(run({"features", "--input", t1, "--label", "y", "--positive", "1", "--budget", "0"}).code == cli::kBadFlags);
}

TEST_CASE("cli bounds on T1") {
  test_support::TempDir dir;
  const auto t1 = dir.write("t1.csv", kT1);
  const auto r = run({"bounds", "--input", t1, "--label", "y", "--positive", "1"});
  REQUIRE(r.code == 0);
  const auto rep = bounds_report_from_json(nlohmann::json::parse(r.out));
  CHECK(rep.ar_upper == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(rep.ap_upper == doctest::Approx(19.0 / 30).epsilon(1e-15));
  CHECK(rep.ac_upper == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(rep.min_hinge == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(rep.overlap == doctest::Approx(std::log2(3.0) - 2.0 / 3).epsilon(1e-12));

  const auto out = dir.file("report.json");
  CHECK(run({"bounds", "--input", t1, "--label", "y", "--positive", "1", "--output", out}).code == 0);
  CHECK(bounds_report_from_json(nlohmann::json::parse(slurp(out))).ar_upper == rep.ar_upper);
}

TEST_CASE("cli accepts a pattern table") {
  test_support::TempDir dir;
  const auto pt = dir.write("t1.csv", "pattern,pos,neg\na,2,1\nb,1,2\n");
  const auto r = run({"bounds", "--pattern-table", pt});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["ar_upper"].get<double>() == doctest::Approx(2.0 / 3));
  const auto both = dir.write("x.csv", kT1);
  CHECK(run({"bounds", "--pattern-table", pt, "--input", both, "--label", "y", "--positive", "1"}).code ==
        cli::kBadFlags);
}

TEST_CASE("cli curves") {
  test_support::TempDir dir;
  const auto t1 = dir.write("t1.csv", kT1);
  const auto roc = dir.file("roc.csv");
  const auto pr = dir.file("pr.csv");
  const auto r = run({"curves", "--input", t1, "--label", "y", "--positive", "1", "--roc", roc, "--pr", pr});
  REQUIRE(r.code == 0);
  const auto roc_lines = lines(slurp(roc));
  REQUIRE(roc_lines.size() == 4);
  CHECK(roc_lines[0] == "fpr,tpr");
  CHECK(roc_lines[1] == "0,0");
  CHECK(roc_lines[3] == "1,1");
  const auto pr_lines = lines(slurp(pr));
  CHECK(pr_lines[0] == "recall,precision");
  CHECK(pr_lines.size() == 8);
  CHECK(r.err.find("roc_area") != std::string::npos);
  CHECK(run({"curves", "--input", t1, "--label", "y", "--positive", "1", "--roc", roc}).code == cli::kBadFlags);
}

TEST_CASE("cli split analysis") {
  test_support::TempDir dir;
  const auto train = dir.write("train.csv", "pattern,pos,neg\nx,2,0\n");
  const auto test = dir.write("test.csv", "pattern,pos,neg\nx,0,1\n");
  const auto r = run({"split-analyze", "--train-table", train, "--test-table", test});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["delta"].get<double>() == doctest::Approx(1.0 / 3));
  CHECK(j["delta_raw"].get<int>() == 1);
  CHECK_FALSE(j["perfect"].get<bool>());

  const auto lab = dir.write("lab.csv", "pattern,label\nx,-1\n");
  auto g = nlohmann::json::parse(
      run({"split-analyze", "--train-table", train, "--test-table", test, "--labeling", lab}).out);
  CHECK(g["delta_train_f"].get<double>() == doctest::Approx(2.0 / 3));
  CHECK(g["delta_test_f"].get<double>() == 0.0);

  const auto t1 = dir.write("t1.csv", kT1);
  const auto a = run({"split-analyze", "--input", t1, "--label", "y", "--positive", "1", "--ratio", "0.5", "--seed", "3"});
  const auto b = run({"split-analyze", "--input", t1, "--label", "y", "--positive", "1", "--ratio", "0.5", "--seed", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(nlohmann::json::parse(a.out)["m"].get<int>() == 6);
  CHECK(run({"split-analyze", "--train-table", train}).code == cli::kBadFlags);
}

TEST_CASE("cli expected sweep") {
  test_support::TempDir dir;
  const auto t1 = dir.write("t1.csv", kT1);
  const auto r = run({"expected-sweep", "--input", t1, "--label", "y", "--positive", "1"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "p,expected_min_hinge,expected_ac_upper,expected_delta");
  CHECK(rows[3].rfind("0.3,", 0) == 0);
  auto j = nlohmann::json::parse(
      run({"expected-sweep", "--input", t1, "--label", "y", "--positive", "1", "--format", "json", "--grid", "0.2,0.8"})
          .out);
  REQUIRE(j.size() == 2);
  CHECK(std::abs(j[0]["expected_delta"].get<double>() - j[1]["expected_delta"].get<double>()) < 1e-12);
  CHECK(run({"expected-sweep", "--input", t1, "--label", "y", "--positive", "1", "--grid", "0,0.5"}).code ==
        cli::kBadFlags);
}

TEST_CASE("cli overlap and envelope") {
  test_support::TempDir dir;
  const auto t1 = dir.write("t1.csv", kT1);
  auto j = nlohmann::json::parse(run({"overlap", "--input", t1, "--label", "y", "--positive", "1"}).out);
  CHECK(j["overlap"].get<double>() == doctest::Approx(0.918296).epsilon(1e-6));
  CHECK(j["js_divergence"].get<double>() == doctest::Approx(1 - 0.918296).epsilon(1e-5));
  CHECK(j["ar_min_heuristic"].get<double>() <= j["ar_upper"].get<double>());
  auto w = nlohmann::json::parse(
      run({"overlap", "--input", t1, "--label", "y", "--positive", "1", "--with-max", "--d", "4"}).out);
  CHECK(w["ar_max_numeric"].get<double>() >= w["ar_upper"].get<double>() - 1e-3);

  const auto r = run({"envelope", "--grid", "0.2:0.8:0.2", "--d", "4"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "d_s,ar_min,ar_max");
  double prev = 2;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double ar_max = std::stod(rows[i].substr(rows[i].rfind(',') + 1));
    CHECK(ar_max <= prev + 1e-9);
    prev = ar_max;
  }
}

TEST_CASE("cli features") {
  test_support::TempDir dir;
  std::mt19937_64 rng(43);
  const auto data = test_support::random_dataset(rng, 60, 4, 3);
  std::string csv = "c0,c1,c2,c3,y\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < 4; ++c) csv += data.token(r, c) + ",";
    csv += data.label(r) == Label::positive ? "1\n" : "0\n";
  }
  const auto path = dir.write("d.csv", csv);
  const auto r = run({"features", "--input", path, "--label", "y", "--positive", "1", "--k", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto best = exhaustive_best_subset(data, 2);
  CHECK(j["subset"].get<std::vector<std::string>>() == best.subset);
  CHECK(j["ar_upper"].get<double>() == best.ar_upper);

  const auto all = run({"features", "--input", path, "--label", "y", "--positive", "1"});
  REQUIRE(all.code == 0);
  CHECK(lines(all.out).size() == 5);
  CHECK(all.err.find("k_star") != std::string::npos);
  const auto greedy = run({"features", "--input", path, "--label", "y", "--positive", "1", "--mode", "greedy"});
  CHECK(greedy.code == 0);

  const auto pt = dir.write("pt.csv", "pattern,pos,neg\na|p,2,0\nb|p,2,0\na|q,0,2\nb|q,0,2\n");
  auto k = nlohmann::json::parse(run({"features", "--pattern-table", pt, "--format", "json"}).out);
  CHECK(k["k_star"].get<int>() == 1);
  CHECK(k["global"]["subset"].get<std::vector<std::string>>() == std::vector<std::string>{"c2"});
}

TEST_CASE("cli oracle check passes") {
  const auto r = run({"oracle-check", "--trials", "2000", "--tables", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
