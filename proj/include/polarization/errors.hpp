#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polar {

/// Base class for every error the library raises on bad domain input.
/// The CLI maps subclasses of this to exit code 1; ParseError maps to 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One broken rule in a society. `group` is the offending group's index,
/// or npos for whole-society rules such as the weight sum.
struct Violation {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::string rule;   // "weight-sum", "negative-weight", "coordinate-range", "dimension", "empty"
  std::size_t group = npos;
  std::string label;
  std::string message;
};

class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(summarize(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
  static std::string summarize(const std::vector<Violation>& violations) {
    std::string out = "invalid society";
    for (const auto& v : violations) {
      out += "; ";
      out += v.rule;
      out += ": ";
      out += v.message;
    }
    return out;
  }

  std::vector<Violation> violations_;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class ParameterError : public Error {
public:
  using Error::Error;
};

class SizeError : public Error {
public:
  using Error::Error;
};

class LookupError : public Error {
public:
  using Error::Error;
};

class AggregationError : public Error {
public:
  using Error::Error;
};

/// Malformed input text. `row` is 1-based and counts the header as row 1.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

} // namespace polar
