#include "groupfx/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace groupfx {

namespace {

using ordered_json = nlohmann::ordered_json;

int decimals_for(NumStyle style) {
  switch (style) {
    case NumStyle::corr5: return 5;
    case NumStyle::est3: return 3;
    case NumStyle::prob4: return 4;
    case NumStyle::integer: return 0;
  }
  return 3;
}

std::string cell_text(const Cell& cell, NumStyle style) {
  if (std::holds_alternative<std::string>(cell.value)) return std::get<std::string>(cell.value);
  if (std::holds_alternative<long long>(cell.value)) return std::to_string(std::get<long long>(cell.value));
  return format_number(std::get<double>(cell.value), style);
}

void append_aligned(std::string& out, const std::vector<std::vector<std::string>>& grid) {
  if (grid.empty()) return;
  std::vector<size_t> width(grid[0].size(), 0);
  for (const auto& row : grid)
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  for (const auto& row : grid) {
    for (size_t c = 0; c < row.size(); ++c) {
      const std::string& s = row[c];
      if (c == 0) {
        out += s;
        out.append(width[c] - s.size(), ' ');
      } else {
        out.append(2 + width[c] - s.size(), ' ');
        out += s;
      }
    }
    out += '\n';
  }
}

ordered_json cell_json(const Cell& cell) {
  if (std::holds_alternative<std::string>(cell.value)) return std::get<std::string>(cell.value);
  if (std::holds_alternative<long long>(cell.value)) return std::get<long long>(cell.value);
  double d = std::get<double>(cell.value);
  if (!std::isfinite(d)) return nullptr;
  return d;
}

}  // namespace

std::string format_number(double v, NumStyle style) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals_for(style), v);
  std::string s(buf);
  if (s == "-0" || s.rfind("-0.", 0) == 0) {
    // avoid the -0.00000 artifact for values that round to zero
    bool all_zero = true;
    for (char c : s)
      if (c >= '1' && c <= '9') all_zero = false;
    if (all_zero) s.erase(0, 1);
  }
  return s;
}

std::string ReportDocument::render_text() const {
  std::string out;
  bool first = true;
  for (const auto& section : sections) {
    if (!first) out += '\n';
    first = false;
    out += section.title;
    out += '\n';
    std::vector<std::vector<std::string>> grid;
    if (std::holds_alternative<Table>(section.body)) {
      const Table& t = std::get<Table>(section.body);
      grid.push_back(t.columns);
      for (const auto& row : t.rows) {
        std::vector<std::string> line;
        for (size_t c = 0; c < row.size(); ++c)
          line.push_back(cell_text(row[c], c < t.styles.size() ? t.styles[c] : NumStyle::est3));
        grid.push_back(std::move(line));
      }
    } else {
      const LabeledMatrix& m = std::get<LabeledMatrix>(section.body);
      std::vector<std::string> header = {""};
      header.insert(header.end(), m.col_labels.begin(), m.col_labels.end());
      grid.push_back(std::move(header));
      for (int i = 0; i < m.values.rows(); ++i) {
        std::vector<std::string> line = {i < static_cast<int>(m.row_labels.size()) ? m.row_labels[i] : ""};
        for (int j = 0; j < m.values.cols(); ++j) line.push_back(format_number(m.values(i, j), m.style));
        grid.push_back(std::move(line));
      }
    }
    append_aligned(out, grid);
  }
  return out;
}

std::string ReportDocument::render_json() const {
  ordered_json doc = ordered_json::object();
  for (const auto& section : sections) {
    if (std::holds_alternative<Table>(section.body)) {
      const Table& t = std::get<Table>(section.body);
      ordered_json body = ordered_json::object();
      body["columns"] = t.columns;
      ordered_json rows = ordered_json::array();
      for (const auto& row : t.rows) {
        ordered_json jr = ordered_json::array();
        for (const auto& cell : row) jr.push_back(cell_json(cell));
        rows.push_back(std::move(jr));
      }
      body["rows"] = std::move(rows);
      doc[section.title] = std::move(body);
    } else {
      const LabeledMatrix& m = std::get<LabeledMatrix>(section.body);
      ordered_json body = ordered_json::object();
      body["row_labels"] = m.row_labels;
      body["col_labels"] = m.col_labels;
      body["rows"] = m.values.rows();
      body["cols"] = m.values.cols();
      ordered_json values = ordered_json::array();  // row-major
      for (int i = 0; i < m.values.rows(); ++i)
        for (int j = 0; j < m.values.cols(); ++j) {
          double d = m.values(i, j);
          if (std::isfinite(d))
            values.push_back(d);
          else
            values.push_back(nullptr);
        }
      body["values"] = std::move(values);
      doc[section.title] = std::move(body);
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace groupfx
