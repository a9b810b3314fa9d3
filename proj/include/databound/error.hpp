#pragma once

#include <stdexcept>
#include <string>

namespace databound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad CSV, unknown column, missing values).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A bound that requires both classes was asked of a single-class table.
class SingleClassError : public Error {
 public:
  explicit SingleClassError(const std::string& what = "bound undefined: table contains a single class")
      : Error(what) {}
};

/// Invalid argument value (probability out of range, zero bin count, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Brute-force enumeration or subset search exceeded its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace databound
