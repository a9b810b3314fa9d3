#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <tuple>
#include <unistd.h>
#include <vector>

#include "databound/dataset.hpp"
#include "databound/pattern_table.hpp"

namespace test_support {

inline databound::PatternTable table(std::initializer_list<std::tuple<const char*, int, int>> rows) {
  std::vector<databound::PatternEntry> entries;
  for (const auto& [key, pos, neg] : rows) {
    entries.push_back({{key}, static_cast<databound::Count>(pos), static_cast<databound::Count>(neg)});
  }
  return databound::PatternTable(std::move(entries));
}

// a:(2,1), b:(1,2)
inline databound::PatternTable t1() { return table({{"a", 2, 1}, {"b", 1, 2}}); }

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("databound_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Dataset with `columns` categorical columns c0.. of small integer tokens.
inline databound::Dataset random_dataset(std::mt19937_64& rng, std::size_t rows, std::size_t columns, int levels) {
  std::vector<databound::ColumnSchema> schema;
  for (std::size_t c = 0; c < columns; ++c) schema.push_back(databound::ColumnSchema::categorical("c" + std::to_string(c)));
  databound::Dataset d(schema);
  std::uniform_int_distribution<int> tok(0, levels - 1);
  std::bernoulli_distribution lab(0.5);
  std::vector<std::string> row(columns);
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto& t : row) t = std::to_string(tok(rng));
    d.add_row(row, lab(rng) ? databound::Label::positive : databound::Label::negative);
  }
  if (d.count(databound::Label::positive) == 0 || d.count(databound::Label::negative) == 0) {
    return random_dataset(rng, rows, columns, levels);
  }
  return d;
}

}  // namespace test_support
