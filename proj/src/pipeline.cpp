#include "groupfx/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace groupfx {

namespace {

// Flips column `j` of the raw data in place and annotates the name.
void flip_column(Dataset& d, int j) {
  for (int i = 0; i < d.n(); ++i) d.x(i, j) = -d.x(i, j);
  d.predictor_names[j] = "-" + d.predictor_names[j];
}

GroupArrangement arranged_in_new_basis(const GroupArrangement& original, const std::vector<int>& new_positions) {
  GroupArrangement g;
  g.member_indices = new_positions;
  g.signs.assign(new_positions.size(), 1);
  g.r_min = original.r_min;
  g.achieved_apc = original.achieved_apc;
  g.negative_pairs = original.negative_pairs;
  return g;
}

}  // namespace

ArrangedDataset arrange_dataset(const Dataset& d, double threshold, bool rename) {
  auto [sd, st] = standardize(d);
  CorrelationStructure corr = correlation_matrix(sd);
  std::vector<std::vector<int>> detected = detect_groups(corr, threshold);

  std::vector<GroupArrangement> arrangements;
  arrangements.reserve(detected.size());
  for (const auto& members : detected) arrangements.push_back(apc_arrange(corr, members));

  ArrangedDataset out;
  if (!rename) {
    // flips stay in place; the "-x3" style name carries the annotation
    out.data = d;
    for (const auto& arr : arrangements) {
      for (size_t pos = 0; pos < arr.member_indices.size(); ++pos)
        if (arr.signs[pos] < 0) flip_column(out.data, arr.member_indices[pos]);
      out.groups.push_back(arranged_in_new_basis(arr, arr.member_indices));
    }
    return out;
  }

  // Renamed layout: grouped columns first, ungrouped after, positional names.
  const int k = d.predictors();
  std::vector<int> order;
  std::vector<int> sign_of(k, 1);
  std::vector<bool> grouped(k, false);
  for (const auto& arr : arrangements)
    for (size_t pos = 0; pos < arr.member_indices.size(); ++pos) {
      order.push_back(arr.member_indices[pos]);
      sign_of[arr.member_indices[pos]] = arr.signs[pos];
      grouped[arr.member_indices[pos]] = true;
    }
  for (int j = 0; j < k; ++j)
    if (!grouped[j]) order.push_back(j);

  out.data.response_name = d.response_name;
  out.data.y = d.y;
  out.data.x = Matrix(d.n(), k);
  out.data.predictor_names.resize(k);
  for (int new_col = 0; new_col < k; ++new_col) {
    int old_col = order[new_col];
    double sign = sign_of[old_col];
    for (int i = 0; i < d.n(); ++i) out.data.x(i, new_col) = sign * d.x(i, old_col);
    out.data.predictor_names[new_col] = "x" + std::to_string(new_col + 1);
    out.legend.push_back(out.data.predictor_names[new_col] + " = " + (sign < 0 ? "-" : "") +
                         d.predictor_names[old_col]);
  }

  int next = 0;
  for (const auto& arr : arrangements) {
    std::vector<int> positions(arr.member_indices.size());
    for (size_t pos = 0; pos < positions.size(); ++pos) positions[pos] = next++;
    out.groups.push_back(arranged_in_new_basis(arr, positions));
  }
  return out;
}

ArrangedDataset arrange_dataset_groups(const Dataset& d, const std::vector<std::vector<std::string>>& groups) {
  auto [sd, st] = standardize(d);
  CorrelationStructure corr = correlation_matrix(sd);

  ArrangedDataset out;
  out.data = d;
  std::vector<bool> taken(d.predictors(), false);
  for (const auto& names : groups) {
    std::vector<int> members;
    for (const auto& name : names) {
      auto it = std::find(d.predictor_names.begin(), d.predictor_names.end(), name);
      if (it == d.predictor_names.end())
        throw std::invalid_argument("unknown predictor '" + name + "' in group specification");
      int idx = static_cast<int>(it - d.predictor_names.begin());
      if (taken[idx]) throw std::invalid_argument("predictor '" + name + "' appears in more than one group");
      taken[idx] = true;
      members.push_back(idx);
    }
    GroupArrangement arr = apc_arrange(corr, members);
    for (size_t pos = 0; pos < arr.member_indices.size(); ++pos)
      if (arr.signs[pos] < 0) flip_column(out.data, arr.member_indices[pos]);
    out.groups.push_back(arranged_in_new_basis(arr, arr.member_indices));
  }
  return out;
}

}  // namespace groupfx
