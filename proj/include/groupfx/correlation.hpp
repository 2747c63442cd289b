#pragma once

#include <string>
#include <utility>
#include <vector>

#include "groupfx/dataset.hpp"
#include "groupfx/linalg.hpp"

namespace groupfx {

/// Full predictor correlation matrix, X'ᵀX' of the standardized design.
struct CorrelationStructure {
  SymMatrix r;
  std::vector<std::string> names;
};

/// A strongly correlated group after sign arrangement. signs[0] is always +1
/// (the lowest member index is the reference variable); signs[j] is the sign
/// of the reference-to-member correlation. r_min is the smallest pairwise
/// correlation AFTER flipping, so a failed arrangement shows up as a
/// negative r_min rather than being hidden behind an absolute value.
struct GroupArrangement {
  std::vector<int> member_indices;  // ascending
  std::vector<int> signs;           // +1 / -1, aligned with member_indices
  double r_min = 0.0;
  bool achieved_apc = false;
  std::vector<std::pair<int, int>> negative_pairs;  // member positions, post-flip r <= 0
};

/// Blocks of the correlation matrix with the group's members first:
/// r11 (group), r22 (rest), r12 between them, plus the Schur complement
/// r11 - r12 r22⁻¹ r21 and the cross term r12 r22⁻¹ r21 itself. When the
/// group covers every predictor, r22 is empty, cross_term is zero and
/// schur equals r11.
struct PartitionedCorrelation {
  SymMatrix r11;
  Matrix r12;       // q x (p-1-q), possibly zero columns
  SymMatrix r22;    // order p-1-q, possibly empty
  SymMatrix schur;
  SymMatrix cross_term;
};

/// R = X'ᵀX'. Entries are clamped into [-1, 1] (unit columns can overshoot
/// by an ulp); diagonal stays as computed, within 1e-12 of one.
CorrelationStructure correlation_matrix(const StandardizedDataset& sd);

/// Wraps an existing correlation-scale matrix, applying the same clamping.
CorrelationStructure make_correlation_structure(SymMatrix r, std::vector<std::string> names);

/// Connected components (size >= 2) of the graph with an edge wherever
/// |r_ij| >= threshold. Groups are ordered by smallest member; members
/// ascending. Threshold must lie in (0, 1).
std::vector<std::vector<int>> detect_groups(const CorrelationStructure& c, double threshold);

/// All-positive-correlations arrangement of a group: flip each member by the
/// sign of its correlation with the reference (lowest index) member, then
/// recheck every pair. If some pair stays non-positive the arrangement is
/// still returned with achieved_apc = false and the offending pairs listed.
GroupArrangement apc_arrange(const CorrelationStructure& c, const std::vector<int>& group);

/// Applies the arrangement's sign flips to rows/columns, permutes the group
/// members to the front and extracts the blocks.
PartitionedCorrelation partition(const CorrelationStructure& c, const GroupArrangement& g);

}  // namespace groupfx
