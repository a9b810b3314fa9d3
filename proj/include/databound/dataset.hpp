#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "databound/pattern_table.hpp"

namespace databound {

enum class ColumnKind { categorical, numeric };

/// Discretization rule for a numeric column.
struct Binning {
  enum class Rule { none, equal_width, quantile };
  Rule rule = Rule::none;
  std::size_t bins = 0;

  static Binning none() { return {}; }
  static Binning equal_width(std::size_t b) { return {Rule::equal_width, b}; }
  static Binning quantile(std::size_t b) { return {Rule::quantile, b}; }
};

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;
  Binning binning;

  static ColumnSchema categorical(std::string name) { return {std::move(name), ColumnKind::categorical, {}}; }
  static ColumnSchema numeric(std::string name, Binning b = Binning::none()) {
    return {std::move(name), ColumnKind::numeric, b};
  }

  /// Throws ArgumentError: categorical columns cannot be binned, binned columns need B >= 1.
  void validate() const;
};

/// One labeled row, materialized as tokens.
struct Sample {
  std::vector<std::string> features;
  Label label = Label::negative;
};

/// Labeled tabular data. Each column is stored as interned token codes, so
/// pattern grouping compares integers rather than strings.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<ColumnSchema> schema);

  static Dataset from_samples(std::vector<ColumnSchema> schema, std::span<const Sample> samples);

  /// Appends a row. Throws DataError if the token count differs from the schema.
  void add_row(std::span<const std::string> tokens, Label label);
  void add(const Sample& s) { add_row(s.features, s.label); }

  std::size_t size() const { return labels_.size(); }
  std::size_t columns() const { return schema_.size(); }
  const std::vector<ColumnSchema>& schema() const { return schema_; }
  std::vector<std::string> column_names() const;

  /// Throws DataError naming the column if it does not exist.
  std::size_t column_index(std::string_view name) const;
  bool has_column(std::string_view name) const;

  const std::string& token(std::size_t row, std::size_t col) const {
    return columns_[col].dictionary[columns_[col].codes[row]];
  }
  std::uint32_t code(std::size_t row, std::size_t col) const { return columns_[col].codes[row]; }
  const std::vector<std::string>& dictionary(std::size_t col) const { return columns_[col].dictionary; }
  Label label(std::size_t row) const { return labels_[row]; }
  const std::vector<Label>& labels() const { return labels_; }

  Sample sample(std::size_t row) const;
  Count count(Label l) const;

  /// New dataset with one column appended. `values` holds one token per row.
  /// Throws DataError on a name collision or a length mismatch.
  Dataset with_column(ColumnSchema column, std::span<const std::string> values) const;

  /// Same columns with tokens replaced; used by discretization.
  Dataset with_column_replaced(std::size_t col, ColumnSchema column, std::span<const std::string> values) const;

  /// Rows at the given indices, in order.
  Dataset select_rows(std::span<const std::size_t> rows) const;

 private:
  struct Column {
    std::vector<std::string> dictionary;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::uint32_t> codes;

    std::uint32_t intern(const std::string& token);
  };

  static Column make_column(std::span<const std::string> values);

  std::vector<ColumnSchema> schema_;
  std::vector<Column> columns_;
  std::vector<Label> labels_;
};

/// Reads a headered CSV. `features` lists the feature columns and their kinds;
/// when empty, every non-label column is used as categorical. Rows with a
/// missing (empty) value in a used column are rejected with their line numbers.
Dataset load_csv(const std::string& path, const std::string& label_column, const std::string& positive_token,
                 const std::vector<ColumnSchema>& features = {});

/// Replaces each binned numeric column by bin indices. Equal-width bins span
/// [min, max] of the column; quantile edges are lower empirical quantiles of
/// the full column and a value equal to an edge falls in the lower bin.
/// Columns absent from `schema` keep their tokens. A constant column under
/// quantile binning maps to bin 0 and appends a message to `warnings`.
Dataset discretize(const Dataset& data, const std::vector<ColumnSchema>& schema,
                   std::vector<std::string>* warnings = nullptr);

/// Groups samples projected onto `feature_subset` by exact token equality.
PatternTable build_pattern_table(const Dataset& data, const std::vector<std::string>& feature_subset);
PatternTable build_pattern_table(const Dataset& data, std::span<const std::size_t> column_indices);
/// All columns.
PatternTable build_pattern_table(const Dataset& data);

// Synthetic feature laws.
struct PoissonLaw {
  double lambda = 1.0;
};
/// Normal(mu, sigma) binned into `bins` equal bins over [mu - 3 sigma, mu + 3 sigma], tails clamped.
struct GaussianLaw {
  double mu = 0.0;
  double sigma = 1.0;
  std::size_t bins = 10;
};
/// P(k) proportional to k^-alpha on k = 1..support.
struct PowerLaw {
  double alpha = 2.0;
  std::size_t support = 100;
};
using FeatureLaw = std::variant<PoissonLaw, GaussianLaw, PowerLaw>;

/// i.i.d. integer features (columns x0, x1, ...) and independent labels that
/// are positive with probability `label_prob`. Deterministic for a fixed seed.
Dataset generate_synthetic(const FeatureLaw& law, double label_prob, std::size_t size, std::uint64_t seed,
                           std::size_t columns = 1);

}  // namespace databound
