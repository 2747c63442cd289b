#include "groupfx/correlation.hpp"

#include <algorithm>
#include <cmath>

namespace groupfx {

namespace {

double clamp_unit(double v) { return std::min(1.0, std::max(-1.0, v)); }

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

CorrelationStructure make_correlation_structure(SymMatrix r, std::vector<std::string> names) {
  for (int i = 0; i < r.order(); ++i)
    for (int j = 0; j <= i; ++j) r.set(i, j, clamp_unit(r(i, j)));
  return CorrelationStructure{std::move(r), std::move(names)};
}

CorrelationStructure correlation_matrix(const StandardizedDataset& sd) {
  const int k = sd.x.cols();
  SymMatrix r(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int row = 0; row < sd.x.rows(); ++row) s += sd.x(row, i) * sd.x(row, j);
      r.set(i, j, s);
    }
  return make_correlation_structure(std::move(r), sd.predictor_names);
}

std::vector<std::vector<int>> detect_groups(const CorrelationStructure& c, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("detect_groups: threshold must lie in (0, 1)");

  const int k = c.r.order();
  std::vector<int> parent(k);
  for (int i = 0; i < k; ++i) parent[i] = i;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(c.r(i, j)) >= threshold) {
        int a = find_root(parent, i);
        int b = find_root(parent, j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  std::vector<std::vector<int>> by_root(k);
  for (int i = 0; i < k; ++i) by_root[find_root(parent, i)].push_back(i);

  std::vector<std::vector<int>> groups;
  for (int root = 0; root < k; ++root)
    if (by_root[root].size() >= 2) groups.push_back(by_root[root]);  // already ascending, roots ascending
  return groups;
}

GroupArrangement apc_arrange(const CorrelationStructure& c, const std::vector<int>& group) {
  if (group.size() < 2) throw std::invalid_argument("apc_arrange: group needs at least 2 members");
  GroupArrangement g;
  g.member_indices = group;
  std::sort(g.member_indices.begin(), g.member_indices.end());
  if (std::adjacent_find(g.member_indices.begin(), g.member_indices.end()) != g.member_indices.end())
    throw std::invalid_argument("apc_arrange: duplicate group member");
  for (int idx : g.member_indices)
    if (idx < 0 || idx >= c.r.order()) throw std::invalid_argument("apc_arrange: member index out of range");

  const int q = static_cast<int>(g.member_indices.size());
  const int reference = g.member_indices[0];
  g.signs.assign(q, 1);
  for (int j = 1; j < q; ++j) g.signs[j] = c.r(reference, g.member_indices[j]) < 0.0 ? -1 : 1;

  g.r_min = 1.0;
  g.achieved_apc = true;
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b) {
      double r = g.signs[a] * g.signs[b] * c.r(g.member_indices[a], g.member_indices[b]);
      g.r_min = std::min(g.r_min, r);
      if (r <= 0.0) {
        g.achieved_apc = false;
        g.negative_pairs.emplace_back(a, b);
      }
    }
  return g;
}

PartitionedCorrelation partition(const CorrelationStructure& c, const GroupArrangement& g) {
  const int p1 = c.r.order();
  const int q = static_cast<int>(g.member_indices.size());

  std::vector<bool> in_group(p1, false);
  for (int idx : g.member_indices) {
    if (idx < 0 || idx >= p1) throw std::invalid_argument("partition: member index out of range");
    in_group[idx] = true;
  }

  // New order: group members first (arrangement order), then the rest.
  std::vector<int> order = g.member_indices;
  std::vector<int> sign(p1, 1);
  for (int pos = 0; pos < q; ++pos) sign[g.member_indices[pos]] = g.signs[pos];
  for (int i = 0; i < p1; ++i)
    if (!in_group[i]) order.push_back(i);

  const int m = p1 - q;
  PartitionedCorrelation part;
  part.r11 = SymMatrix(q);
  part.r22 = SymMatrix(m);
  part.r12 = Matrix(q, m);
  for (int a = 0; a < p1; ++a)
    for (int b = 0; b <= a; ++b) {
      double v = sign[order[a]] * sign[order[b]] * c.r(order[a], order[b]);
      if (a < q)
        part.r11.set(a, b, v);
      else if (b >= q)
        part.r22.set(a - q, b - q, v);
      else
        part.r12(b, a - q) = v;
    }

  part.cross_term = SymMatrix(q);
  if (m == 0) {
    part.schur = part.r11;
    return part;
  }

  SymMatrix r22_inv = invert_spd(part.r22);  // propagates positive-definiteness errors
  Matrix bridge(q, m);                       // r12 * r22⁻¹
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += part.r12(i, k) * r22_inv(k, j);
      bridge(i, j) = s;
    }
  for (int i = 0; i < q; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += bridge(i, k) * part.r12(j, k);
      part.cross_term.set(i, j, s);
    }
  part.schur = SymMatrix(q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j <= i; ++j) part.schur.set(i, j, part.r11(i, j) - part.cross_term(i, j));
  return part;
}

}  // namespace groupfx
