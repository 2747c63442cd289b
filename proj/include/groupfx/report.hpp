#pragma once

#include <string>
#include <variant>
#include <vector>

#include "groupfx/linalg.hpp"

namespace groupfx {

/// Fixed decimal places per column class so table output is byte-stable:
/// correlations print with 5, estimates and standard errors with 3, tail
/// probabilities with 4, counts as integers.
enum class NumStyle { corr5, est3, prob4, integer };

struct Cell {
  Cell(std::string s) : value(std::move(s)) {}
  Cell(const char* s) : value(std::string(s)) {}
  Cell(double d) : value(d) {}
  Cell(long long i) : value(i) {}
  std::variant<std::string, double, long long> value;
};

struct Table {
  std::vector<std::string> columns;  // first column holds row labels
  std::vector<NumStyle> styles;      // aligned with columns
  std::vector<std::vector<Cell>> rows;
};

struct LabeledMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Matrix values;
  NumStyle style = NumStyle::corr5;
};

struct Section {
  std::string title;
  std::variant<Table, LabeledMatrix> body;
};

/// An ordered list of titled sections, rendered either as aligned text
/// tables or as a JSON object keyed by section title (matrices become
/// row-major arrays, non-finite numbers become null).
struct ReportDocument {
  std::vector<Section> sections;

  std::string render_text() const;
  std::string render_json() const;
};

/// One number formatted under a column style (used by both renderers' text
/// paths and by tests).
std::string format_number(double v, NumStyle style);

}  // namespace groupfx
