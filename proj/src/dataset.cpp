#include "groupfx/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <cmath>
#include <fstream>
#include <sstream>

namespace groupfx {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

// Shortest decimal string that parses back to exactly the same double.
std::string shortest_double(double v) {
  char buf[32];
  std::string best;
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v && (best.empty() || std::strlen(buf) < best.size())) best = buf;
  }
  return best;
}

double parse_cell(const std::string& cell, int file_line, int data_row, int field) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream msg;
    msg << "csv parse error at row " << data_row << " (line " << file_line << "), column " << field
        << ": cell '" << cell << "' is not numeric";
    throw ParseError(msg.str(), file_line, field);
  }
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "csv parse error at row " << data_row << " (line " << file_line << "), column " << field
        << ": value is not finite";
    throw ParseError(msg.str(), file_line, field);
  }
  return value;
}

}  // namespace

void validate_dataset(const Dataset& d) {
  const int n = d.n();
  const int p = d.predictors() + 1;  // intercept counted
  if (d.predictors() < 1) throw std::invalid_argument("dataset has no predictors");
  if (n <= p) throw std::invalid_argument("dataset needs more observations than parameters (n > p)");
  if (static_cast<int>(d.y.size()) != n) throw std::invalid_argument("response length does not match rows");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(d.y[i])) throw std::invalid_argument("non-finite response value");
    for (int j = 0; j < d.predictors(); ++j)
      if (!std::isfinite(d.x(i, j))) throw std::invalid_argument("non-finite predictor value");
  }
}

Dataset load_csv(std::istream& in, const std::string& response_name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header line", 0, 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = split_fields(line);
  int response_index = -1;
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == response_name) {
      response_index = static_cast<int>(i);
      break;
    }
  if (response_index < 0)
    throw ParseError("response column '" + response_name + "' not found in header", 1, 0);

  const int width = static_cast<int>(header.size());
  std::vector<Vector> columns(width);
  int file_line = 1;
  int data_rows = 0;
  while (std::getline(in, line)) {
    ++file_line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // tolerate a trailing blank line
    std::vector<std::string> fields = split_fields(line);
    if (static_cast<int>(fields.size()) != width) {
      std::ostringstream msg;
      msg << "csv parse error at row " << (data_rows + 1) << " (line " << file_line << "): expected " << width
          << " fields, got " << fields.size();
      throw ParseError(msg.str(), file_line, 0);
    }
    ++data_rows;
    for (int f = 0; f < width; ++f) columns[f].push_back(parse_cell(fields[f], file_line, data_rows, f + 1));
  }
  if (data_rows == 0) throw ParseError("no data rows", 1, 0);

  Dataset d;
  d.response_name = response_name;
  d.y = columns[response_index];
  d.x = Matrix(data_rows, width - 1);
  int out = 0;
  for (int f = 0; f < width; ++f) {
    if (f == response_index) continue;
    d.predictor_names.push_back(header[f]);
    d.x.set_col(out++, columns[f]);
  }
  validate_dataset(d);
  return d;
}

Dataset load_csv_file(const std::string& path, const std::string& response_name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  return load_csv(in, response_name);
}

std::string to_csv(const Dataset& d) {
  std::ostringstream out;
  for (const auto& name : d.predictor_names) out << name << ',';
  out << d.response_name << '\n';
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.predictors(); ++j) out << shortest_double(d.x(i, j)) << ',';
    out << shortest_double(d.y[i]) << '\n';
  }
  return out.str();
}

std::pair<StandardizedDataset, Standardization> standardize(const Dataset& d) {
  const int n = d.n();
  const int k = d.predictors();

  StandardizedDataset sd;
  sd.predictor_names = d.predictor_names;
  sd.x = Matrix(n, k);

  Standardization st;
  st.means.resize(k);
  st.scales.resize(k);

  for (int j = 0; j < k; ++j) {
    double mean = 0.0;
    double col_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      mean += d.x(i, j);
      col_norm += d.x(i, j) * d.x(i, j);
    }
    mean /= n;
    col_norm = std::sqrt(col_norm);
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
      double dev = d.x(i, j) - mean;
      ss += dev * dev;
    }
    double scale = std::sqrt(ss);
    if (scale <= 1e-14 * std::max(col_norm, 1.0))
      throw std::invalid_argument("constant predictor column '" + d.predictor_names[j] + "' cannot be standardized");
    st.means[j] = mean;
    st.scales[j] = scale;
    for (int i = 0; i < n; ++i) sd.x(i, j) = (d.x(i, j) - mean) / scale;
  }

  double ybar = 0.0;
  for (double v : d.y) ybar += v;
  ybar /= n;
  st.response_mean = ybar;
  sd.y.resize(n);
  for (int i = 0; i < n; ++i) sd.y[i] = d.y[i] - ybar;

  return {std::move(sd), std::move(st)};
}

Matrix destandardize_predictors(const Matrix& x_std, const Standardization& s) {
  Matrix x(x_std.rows(), x_std.cols());
  for (int j = 0; j < x_std.cols(); ++j)
    for (int i = 0; i < x_std.rows(); ++i) x(i, j) = x_std(i, j) * s.scales[j] + s.means[j];
  return x;
}

Dataset hald_dataset() {
  static const double x1[] = {7, 1, 11, 11, 7, 11, 3, 1, 2, 21, 1, 11, 10};
  static const double x2[] = {26, 29, 56, 31, 52, 55, 71, 31, 54, 47, 40, 66, 68};
  static const double x3[] = {6, 15, 8, 8, 6, 9, 17, 22, 18, 4, 23, 9, 8};
  static const double x4[] = {60, 52, 20, 47, 33, 22, 6, 44, 22, 26, 34, 12, 12};
  static const double heat[] = {78.5, 74.3, 104.3, 87.6, 95.9, 109.2, 102.7,
                                72.5, 93.1, 115.9, 83.8, 113.3, 109.4};

  Dataset d;
  d.predictor_names = {"x1", "x2", "x3", "x4"};
  d.response_name = "y";
  d.x = Matrix(13, 4);
  d.y.assign(std::begin(heat), std::end(heat));
  for (int i = 0; i < 13; ++i) {
    d.x(i, 0) = x1[i];
    d.x(i, 1) = x2[i];
    d.x(i, 2) = x3[i];
    d.x(i, 3) = x4[i];
  }
  validate_dataset(d);
  return d;
}

}  // namespace groupfx
