#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "groupfx/linalg.hpp"

namespace groupfx {

/// Raw observations: one named response and p-1 named predictor columns.
/// Requires n > p (p counts the intercept) and all entries finite.
struct Dataset {
  std::vector<std::string> predictor_names;
  std::string response_name;
  Matrix x;  // n rows, p-1 predictor columns
  Vector y;

  int n() const { return x.rows(); }
  int predictors() const { return x.cols(); }
};

/// Transform parameters recorded by standardize(); scales are root sums of
/// squared deviations (unit length), not sample standard deviations, so that
/// X'ᵀX' is exactly the correlation matrix downstream.
struct Standardization {
  Vector means;
  Vector scales;
  double response_mean = 0.0;
};

/// Mean-zero, unit-length predictor columns and a centered response.
struct StandardizedDataset {
  std::vector<std::string> predictor_names;
  Matrix x;  // each column: mean 0, Euclidean length 1
  Vector y;  // centered, not rescaled
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column)
      : std::runtime_error(std::move(message)), line(line), column(column) {}
  int line;    // 1-based file line (header is line 1); 0 when not line-specific
  int column;  // 1-based field index; 0 when not field-specific
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a headered CSV (comma separator, '.' decimal point, no quoting).
/// Predictors keep header order, with the response column removed.
Dataset load_csv(std::istream& in, const std::string& response_name);

/// Convenience wrapper; throws IoError when the file cannot be opened.
Dataset load_csv_file(const std::string& path, const std::string& response_name);

/// Serializes predictors (header order) followed by the response column.
std::string to_csv(const Dataset& d);

/// Centers and length-normalizes every predictor, centers the response.
/// Constant columns (scale ~ 0 relative to the column norm) are rejected
/// with an error naming the column.
std::pair<StandardizedDataset, Standardization> standardize(const Dataset& d);

/// Applies the inverse transform column-wise: x = x' * s + mean.
Matrix destandardize_predictors(const Matrix& x_std, const Standardization& s);

/// The classic 13-observation Portland cement dataset: response y (heat
/// evolved, calories per gram) and four clinker-composition predictors
/// x1..x4. Two strongly correlated pairs make it the standard worked
/// example for multicollinearity.
Dataset hald_dataset();

/// Validates Dataset invariants (n > p, finite entries); throws
/// std::invalid_argument on violation. Used by the loaders.
void validate_dataset(const Dataset& d);

}  // namespace groupfx
