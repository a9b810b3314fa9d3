#include <doctest.h>

#include "databound/bounds.hpp"
#include "databound/dataset.hpp"
#include "databound/error.hpp"
#include "support.hpp"

using namespace databound;

namespace {

std::vector<std::string> column(const Dataset& d, std::size_t c) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < d.size(); ++r) out.push_back(d.token(r, c));
  return out;
}

Dataset numeric_column(std::vector<std::string> values) {
  Dataset d({ColumnSchema::numeric("v")});
  for (auto& v : values) d.add_row(std::vector<std::string>{v}, Label::positive);
  return d;
}

}  // namespace

TEST_CASE("load_csv reads a six-row file") {
  test_support::TempDir dir;
  auto path = dir.write("six.csv", "f1,f2,label\na,x,y\na,x,n\nb,x,y\nb,z,n\nc,z,y\nc,z,n\n");
  Dataset d = load_csv(path, "label", "y");
  CHECK(d.size() == 6);
  CHECK(d.columns() == 2);
  CHECK(d.count(Label::positive) == 3);
  CHECK(d.sample(3).features == std::vector<std::string>{"b", "z"});
  CHECK(d.label(3) == Label::negative);
}

TEST_CASE("load_csv errors") {
  test_support::TempDir dir;
  SUBCASE("label not binary") {
    auto path = dir.write("three.csv", "f,label\na,y\nb,n\nc,maybe\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "label", "y"), doctest::Contains("label not binary"), DataError);
  }
  SUBCASE("empty file") {
    auto path = dir.write("empty.csv", "");
    CHECK_THROWS_WITH_AS(load_csv(path, "label", "y"), doctest::Contains("no rows"), DataError);
  }
  SUBCASE("header only") {
    auto path = dir.write("header.csv", "f,label\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "label", "y"), doctest::Contains("no rows"), DataError);
  }
  SUBCASE("missing column is named") {
    auto path = dir.write("t.csv", "f,label\na,y\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "target", "y"), doctest::Contains("target"), DataError);
  }
  SUBCASE("missing values report their rows") {
    auto path = dir.write("gaps.csv", "f,label\na,y\n,n\nb,y\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "label", "y"), doctest::Contains("rows 3"), DataError);
  }
  SUBCASE("ragged row") {
    auto path = dir.write("ragged.csv", "f,label\na,y,extra\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "label", "y"), doctest::Contains("malformed"), DataError);
  }
}

TEST_CASE("load_csv restricts to chosen feature columns") {
  test_support::TempDir dir;
  auto path = dir.write("sub.csv", "f1,f2,label\na,,y\nb,,n\n");
  Dataset d = load_csv(path, "label", "y", {ColumnSchema::categorical("f1")});
  CHECK(d.columns() == 1);
  CHECK(d.size() == 2);
}

TEST_CASE("equal-width binning") {
  auto d = discretize(numeric_column({"1", "2", "3", "4"}), {ColumnSchema::numeric("v", Binning::equal_width(2))});
  CHECK(column(d, 0) == std::vector<std::string>{"0", "0", "1", "1"});
  auto c = discretize(numeric_column({"5", "5", "5"}), {ColumnSchema::numeric("v", Binning::equal_width(4))});
  CHECK(column(c, 0) == std::vector<std::string>{"0", "0", "0"});
}

TEST_CASE("quantile binning sends ties to the lower bin") {
  auto d = discretize(numeric_column({"1", "10", "100", "1000"}), {ColumnSchema::numeric("v", Binning::quantile(2))});
  CHECK(column(d, 0) == std::vector<std::string>{"0", "0", "1", "1"});
  std::vector<std::string> warnings;
  auto c = discretize(numeric_column({"7", "7", "7"}), {ColumnSchema::numeric("v", Binning::quantile(3))}, &warnings);
  CHECK(column(c, 0) == std::vector<std::string>{"0", "0", "0"});
  CHECK(warnings.size() == 1);
}

TEST_CASE("binning validation") {
  CHECK_THROWS_AS(discretize(numeric_column({"1"}), {ColumnSchema::numeric("v", Binning::equal_width(0))}),
                  ArgumentError);
  CHECK_THROWS(discretize(numeric_column({"1", "x"}), {ColumnSchema::numeric("v", Binning::equal_width(2))}));
  CHECK_THROWS_AS(ColumnSchema({"c", ColumnKind::categorical, Binning::quantile(2)}).validate(), ArgumentError);
}

TEST_CASE("build_pattern_table groups exact tuples") {
  Dataset d({ColumnSchema::categorical("x")});
  for (auto [tok, lab] : std::vector<std::pair<const char*, Label>>{{"a", Label::positive},
                                                                    {"a", Label::positive},
                                                                    {"a", Label::negative},
                                                                    {"b", Label::positive},
                                                                    {"b", Label::negative},
                                                                    {"b", Label::negative}}) {
    d.add_row(std::vector<std::string>{tok}, lab);
  }
  CHECK(build_pattern_table(d) == test_support::t1());
}

TEST_CASE("projection merges patterns and conserves totals") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset d = test_support::random_dataset(rng, 60, 3, 3);
    const PatternTable full = build_pattern_table(d);
    const PatternTable sub = build_pattern_table(d, std::vector<std::string>{"c0", "c2"});
    CHECK(sub.n_plus() == full.n_plus());
    CHECK(sub.n_minus() == full.n_minus());
    for (const auto& e : sub.entries()) {
      Count pos = 0;
      Count neg = 0;
      for (const auto& f : full.entries()) {
        if (f.key[0] == e.key[0] && f.key[2] == e.key[1]) {
          pos += f.pos;
          neg += f.neg;
        }
      }
      CHECK(pos == e.pos);
      CHECK(neg == e.neg);
    }
  }
}

TEST_CASE("duplicate rows add counts") {
  Dataset d({ColumnSchema::categorical("x"), ColumnSchema::categorical("y")});
  for (int i = 0; i < 5; ++i) d.add_row(std::vector<std::string>{"1", "2"}, Label::positive);
  auto t = build_pattern_table(d);
  CHECK(t.size() == 1);
  CHECK(t[0].pos == 5);
}

TEST_CASE("pattern table errors") {
  Dataset d({ColumnSchema::categorical("x")});
  d.add_row(std::vector<std::string>{"1"}, Label::positive);
  CHECK_THROWS_AS(build_pattern_table(d, std::vector<std::string>{"nope"}), DataError);
  CHECK_THROWS_AS(build_pattern_table(d, std::vector<std::string>{}), ArgumentError);
}

TEST_CASE("synthetic generation") {
  SUBCASE("boundary label probabilities") {
    auto none = generate_synthetic(PoissonLaw{3.0}, 0.0, 50, 1);
    CHECK(none.count(Label::positive) == 0);
    auto all = generate_synthetic(PowerLaw{2.0, 20}, 1.0, 10, 1);
    CHECK(all.count(Label::positive) == 10);
  }
  SUBCASE("label frequency within three standard errors") {
    auto d = generate_synthetic(PoissonLaw{3.0}, 0.5, 10000, 42);
    const double freq = static_cast<double>(d.count(Label::positive)) / 10000.0;
    CHECK(std::abs(freq - 0.5) <= 3 * std::sqrt(0.25 / 10000.0));
  }
  SUBCASE("deterministic per seed") {
    auto a = generate_synthetic(GaussianLaw{0, 1, 8}, 0.3, 500, 9, 3);
    auto b = generate_synthetic(GaussianLaw{0, 1, 8}, 0.3, 500, 9, 3);
    CHECK(build_pattern_table(a) == build_pattern_table(b));
    CHECK(a.column_names() == std::vector<std::string>{"x0", "x1", "x2"});
    auto t = build_pattern_table(a);
    for (const auto& e : t.entries()) {
      for (const auto& tok : e.key) {
        const int v = std::stoi(tok);
        CHECK(v >= 0);
        CHECK(v < 8);
      }
    }
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(generate_synthetic(PoissonLaw{-1.0}, 0.5, 10, 1), ArgumentError);
    CHECK_THROWS_AS(generate_synthetic(PoissonLaw{1.0}, 1.5, 10, 1), ArgumentError);
    CHECK_THROWS_AS(generate_synthetic(GaussianLaw{0, 0, 4}, 0.5, 10, 1), ArgumentError);
    CHECK_THROWS_AS(generate_synthetic(PowerLaw{2.0, 0}, 0.5, 10, 1), ArgumentError);
  }
}
