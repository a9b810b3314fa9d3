#include "databound/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "databound/csv.hpp"
#include "databound/error.hpp"

namespace databound {

void ColumnSchema::validate() const {
  if (name.empty()) throw ArgumentError("column name must not be empty");
  if (kind == ColumnKind::categorical && binning.rule != Binning::Rule::none) {
    throw ArgumentError("categorical column '" + name + "' cannot be binned");
  }
  if (binning.rule != Binning::Rule::none && binning.bins == 0) {
    throw ArgumentError("column '" + name + "': bin count must be at least 1");
  }
}

std::uint32_t Dataset::Column::intern(const std::string& token) {
  auto [it, inserted] = index.try_emplace(token, static_cast<std::uint32_t>(dictionary.size()));
  if (inserted) dictionary.push_back(token);
  return it->second;
}

Dataset::Column Dataset::make_column(std::span<const std::string> values) {
  Column c;
  c.codes.reserve(values.size());
  for (const auto& v : values) c.codes.push_back(c.intern(v));
  return c;
}

Dataset::Dataset(std::vector<ColumnSchema> schema) : schema_(std::move(schema)) {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    schema_[i].validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (schema_[j].name == schema_[i].name) throw DataError("duplicate column '" + schema_[i].name + "'");
    }
  }
  columns_.resize(schema_.size());
}

Dataset Dataset::from_samples(std::vector<ColumnSchema> schema, std::span<const Sample> samples) {
  Dataset d(std::move(schema));
  for (const auto& s : samples) d.add(s);
  return d;
}

void Dataset::add_row(std::span<const std::string> tokens, Label label) {
  if (tokens.size() != schema_.size()) {
    throw DataError("row has " + std::to_string(tokens.size()) + " features, schema has " +
                    std::to_string(schema_.size()));
  }
  if (label != Label::positive && label != Label::negative) throw DataError("label must be +1 or -1");
  for (std::size_t c = 0; c < tokens.size(); ++c) columns_[c].codes.push_back(columns_[c].intern(tokens[c]));
  labels_.push_back(label);
}

std::vector<std::string> Dataset::column_names() const {
  std::vector<std::string> names;
  for (const auto& c : schema_) names.push_back(c.name);
  return names;
}

std::size_t Dataset::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return i;
  }
  throw DataError("unknown column '" + std::string(name) + "'");
}

bool Dataset::has_column(std::string_view name) const {
  return std::any_of(schema_.begin(), schema_.end(), [&](const ColumnSchema& c) { return c.name == name; });
}

Sample Dataset::sample(std::size_t row) const {
  Sample s;
  s.features.reserve(columns());
  for (std::size_t c = 0; c < columns(); ++c) s.features.push_back(token(row, c));
  s.label = labels_[row];
  return s;
}

Count Dataset::count(Label l) const {
  return static_cast<Count>(std::count(labels_.begin(), labels_.end(), l));
}

Dataset Dataset::with_column(ColumnSchema column, std::span<const std::string> values) const {
  if (has_column(column.name)) throw DataError("column '" + column.name + "' already exists");
  if (values.size() != size()) throw DataError("new column length does not match row count");
  column.validate();
  Dataset out = *this;
  out.schema_.push_back(std::move(column));
  out.columns_.push_back(make_column(values));
  return out;
}

Dataset Dataset::with_column_replaced(std::size_t col, ColumnSchema column,
                                      std::span<const std::string> values) const {
  if (values.size() != size()) throw DataError("replacement column length does not match row count");
  column.validate();
  Dataset out = *this;
  out.schema_.at(col) = std::move(column);
  out.columns_.at(col) = make_column(values);
  return out;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  Dataset out;
  out.schema_ = schema_;
  out.columns_.resize(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    out.columns_[c].dictionary = columns_[c].dictionary;
    out.columns_[c].index = columns_[c].index;
    out.columns_[c].codes.reserve(rows.size());
    for (auto r : rows) out.columns_[c].codes.push_back(columns_[c].codes.at(r));
  }
  out.labels_.reserve(rows.size());
  for (auto r : rows) out.labels_.push_back(labels_.at(r));
  return out;
}

Dataset load_csv(const std::string& path, const std::string& label_column, const std::string& positive_token,
                 const std::vector<ColumnSchema>& features) {
  const auto records = csv::read_file(path);
  if (records.empty()) throw DataError(path + ": no rows");
  const auto& header = records.front();

  auto find = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError(path + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t label_idx = find(label_column);

  std::vector<ColumnSchema> schema = features;
  if (schema.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i != label_idx) schema.push_back(ColumnSchema::categorical(header[i]));
    }
  }
  std::vector<std::size_t> idx;
  for (const auto& c : schema) {
    if (c.name == label_column) throw DataError("label column '" + c.name + "' cannot be a feature");
    idx.push_back(find(c.name));
  }

  Dataset data(schema);
  std::string negative_token;
  std::vector<std::size_t> missing_rows;
  std::vector<std::string> tokens(idx.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
    if (rec.size() != header.size()) {
      throw DataError(path + ": malformed CSV: row " + std::to_string(r + 1) + " has " +
                      std::to_string(rec.size()) + " fields, header has " + std::to_string(header.size()));
    }
    bool missing = rec[label_idx].empty();
    for (std::size_t c = 0; c < idx.size(); ++c) {
      tokens[c] = rec[idx[c]];
      if (tokens[c].empty()) missing = true;
    }
    if (missing) {
      missing_rows.push_back(r + 1);
      continue;
    }
    const auto& lab = rec[label_idx];
    Label label = Label::positive;
    if (lab != positive_token) {
      if (negative_token.empty()) {
        negative_token = lab;
      } else if (lab != negative_token) {
        throw DataError(path + ": label not binary: column '" + label_column + "' has tokens '" +
                        positive_token + "', '" + negative_token + "' and '" + lab + "'");
      }
      label = Label::negative;
    }
    data.add_row(tokens, label);
  }
  if (!missing_rows.empty()) {
    std::ostringstream msg;
    msg << path << ": " << missing_rows.size() << " row(s) with missing values in used columns (rows";
    for (std::size_t i = 0; i < missing_rows.size() && i < 20; ++i) msg << ' ' << missing_rows[i];
    if (missing_rows.size() > 20) msg << " ...";
    msg << ")";
    throw DataError(msg.str());
  }
  if (data.size() == 0) throw DataError(path + ": no rows");
  return data;
}

namespace {

double parse_finite(const std::string& token, const std::string& column) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw DataError("column '" + column + "': non-numeric value '" + token + "'");
  }
  if (used != token.size() || !std::isfinite(v)) {
    throw DataError("column '" + column + "': value '" + token + "' is not a finite number");
  }
  return v;
}

std::vector<std::size_t> equal_width_bins(const std::vector<double>& values, std::size_t bins) {
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / static_cast<double>(bins);
  std::vector<std::size_t> out(values.size(), 0);
  if (!(width > 0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double b = std::floor((values[i] - lo) / width);
    out[i] = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, b)));
  }
  return out;
}

std::vector<std::size_t> quantile_bins(const std::vector<double>& values, std::size_t bins) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // Edge j (1..B-1) is the lower empirical quantile at j/B.
  std::vector<double> edges;
  for (std::size_t j = 1; j < bins; ++j) {
    const std::size_t rank = (j * n + bins - 1) / bins;  // ceil(j n / B)
    edges.push_back(sorted[rank == 0 ? 0 : rank - 1]);
  }
  std::vector<std::size_t> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
  }
  return out;
}

}  // namespace

Dataset discretize(const Dataset& data, const std::vector<ColumnSchema>& schema, std::vector<std::string>* warnings) {
  Dataset out = data;
  for (const auto& spec : schema) {
    spec.validate();
    if (spec.kind != ColumnKind::numeric || spec.binning.rule == Binning::Rule::none) continue;
    const std::size_t col = data.column_index(spec.name);
    if (data.size() == 0) continue;

    const auto& dict = data.dictionary(col);
    std::vector<double> dict_values;
    dict_values.reserve(dict.size());
    for (const auto& t : dict) dict_values.push_back(parse_finite(t, spec.name));
    std::vector<double> values(data.size());
    for (std::size_t r = 0; r < data.size(); ++r) values[r] = dict_values[data.code(r, col)];

    std::vector<std::size_t> bins;
    if (spec.binning.rule == Binning::Rule::equal_width) {
      bins = equal_width_bins(values, spec.binning.bins);
    } else {
      if (warnings && std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
        warnings->push_back("column '" + spec.name + "' is constant; every row maps to quantile bin 0");
      }
      bins = quantile_bins(values, spec.binning.bins);
    }
    std::vector<std::string> tokens(bins.size());
    std::transform(bins.begin(), bins.end(), tokens.begin(), [](std::size_t b) { return std::to_string(b); });
    out = out.with_column_replaced(col, ColumnSchema::categorical(spec.name), tokens);
  }
  return out;
}

PatternTable build_pattern_table(const Dataset& data, std::span<const std::size_t> cols) {
  if (cols.empty()) throw ArgumentError("feature subset must not be empty");
  for (auto c : cols) {
    if (c >= data.columns()) throw DataError("column index out of range");
  }

  // Mixed-radix encoding of code tuples when the product of dictionary sizes fits 64 bits.
  bool packable = true;
  std::vector<std::uint64_t> radix;
  {
    __extension__ unsigned __int128 prod = 1;
    for (auto c : cols) {
      radix.push_back(std::max<std::uint64_t>(1, data.dictionary(c).size()));
      prod *= radix.back();
      if (prod > std::numeric_limits<std::uint64_t>::max()) {
        packable = false;
        break;
      }
    }
  }

  auto key_of = [&](std::size_t row) {
    PatternKey key;
    key.reserve(cols.size());
    for (auto c : cols) key.push_back(data.token(row, c));
    return key;
  };

  std::vector<PatternEntry> entries;
  if (packable) {
    std::unordered_map<std::uint64_t, std::size_t> slot;
    for (std::size_t r = 0; r < data.size(); ++r) {
      std::uint64_t code = 0;
      for (std::size_t k = 0; k < cols.size(); ++k) code = code * radix[k] + data.code(r, cols[k]);
      auto [it, inserted] = slot.try_emplace(code, entries.size());
      if (inserted) entries.push_back({key_of(r), 0, 0});
      auto& e = entries[it->second];
      (data.label(r) == Label::positive ? e.pos : e.neg) += 1;
    }
  } else {
    std::unordered_map<PatternKey, std::size_t, PatternKeyHash> slot;
    for (std::size_t r = 0; r < data.size(); ++r) {
      auto [it, inserted] = slot.try_emplace(key_of(r), entries.size());
      if (inserted) entries.push_back({it->first, 0, 0});
      auto& e = entries[it->second];
      (data.label(r) == Label::positive ? e.pos : e.neg) += 1;
    }
  }
  return PatternTable(std::move(entries));
}

PatternTable build_pattern_table(const Dataset& data, const std::vector<std::string>& feature_subset) {
  if (feature_subset.empty()) throw ArgumentError("feature subset must not be empty");
  std::vector<std::size_t> cols;
  for (const auto& name : feature_subset) cols.push_back(data.column_index(name));
  return build_pattern_table(data, std::span<const std::size_t>(cols));
}

PatternTable build_pattern_table(const Dataset& data) {
  std::vector<std::size_t> cols(data.columns());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  return build_pattern_table(data, std::span<const std::size_t>(cols));
}

Dataset generate_synthetic(const FeatureLaw& law, double label_prob, std::size_t size, std::uint64_t seed,
                           std::size_t columns) {
  if (!(label_prob >= 0.0 && label_prob <= 1.0)) throw ArgumentError("label probability must lie in [0, 1]");
  if (size == 0) throw ArgumentError("size must be at least 1");
  if (columns == 0) throw ArgumentError("column count must be at least 1");

  std::mt19937_64 rng(seed);
  std::function<std::uint64_t()> draw;
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, PoissonLaw>) {
          if (!(l.lambda > 0) || !std::isfinite(l.lambda)) throw ArgumentError("poisson: lambda must be > 0");
          draw = [&rng, dist = std::poisson_distribution<std::uint64_t>(l.lambda)]() mutable { return dist(rng); };
        } else if constexpr (std::is_same_v<L, GaussianLaw>) {
          if (!(l.sigma > 0) || !std::isfinite(l.sigma) || !std::isfinite(l.mu)) {
            throw ArgumentError("gaussian: sigma must be > 0 and mu finite");
          }
          if (l.bins == 0) throw ArgumentError("gaussian: bin count must be at least 1");
          draw = [&rng, l, dist = std::normal_distribution<double>(l.mu, l.sigma)]() mutable {
            const double lo = l.mu - 3 * l.sigma;
            const double width = 6 * l.sigma / static_cast<double>(l.bins);
            const double b = std::floor((dist(rng) - lo) / width);
            return static_cast<std::uint64_t>(std::clamp(b, 0.0, static_cast<double>(l.bins - 1)));
          };
        } else {
          if (!std::isfinite(l.alpha)) throw ArgumentError("powerlaw: alpha must be finite");
          if (l.support == 0) throw ArgumentError("powerlaw: support must be at least 1");
          std::vector<double> w(l.support);
          for (std::size_t k = 0; k < l.support; ++k) w[k] = std::pow(static_cast<double>(k + 1), -l.alpha);
          draw = [&rng, dist = std::discrete_distribution<std::uint64_t>(w.begin(), w.end())]() mutable {
            return dist(rng) + 1;
          };
        }
      },
      law);

  std::vector<ColumnSchema> schema;
  for (std::size_t c = 0; c < columns; ++c) schema.push_back(ColumnSchema::categorical("x" + std::to_string(c)));
  Dataset data(std::move(schema));
  std::bernoulli_distribution coin(label_prob);
  std::vector<std::string> tokens(columns);
  for (std::size_t i = 0; i < size; ++i) {
    for (auto& t : tokens) t = std::to_string(draw());
    data.add_row(tokens, coin(rng) ? Label::positive : Label::negative);
  }
  return data;
}

}  // namespace databound
