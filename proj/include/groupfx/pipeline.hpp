#pragma once

#include <string>
#include <vector>

#include "groupfx/correlation.hpp"
#include "groupfx/dataset.hpp"

namespace groupfx {

/// A dataset whose strongly correlated groups have been sign-arranged (and
/// optionally reordered/renamed) so that effect machinery can run directly
/// on its columns. `groups` index into THIS dataset's columns with all
/// flips already applied (signs all +1); r_min / achieved_apc carry over
/// from the arrangement that produced them. `legend` records the mapping,
/// one "x2 = -x3" style entry per column that changed name or sign.
struct ArrangedDataset {
  Dataset data;
  std::vector<GroupArrangement> groups;
  std::vector<std::string> legend;
};

/// Detects groups at `threshold`, applies the all-positive-correlations
/// flips, and — when `rename` is set — moves the groups to the front and
/// renames every column positionally (x1, x2, ...), mirroring the way the
/// worked examples present their tables. Without `rename`, columns stay in
/// place and flipped columns get a "-" name prefix.
ArrangedDataset arrange_dataset(const Dataset& d, double threshold, bool rename);

/// Same arrangement, but for explicitly supplied groups (by column name).
/// Groups are flipped in place; no reordering or positional renaming.
ArrangedDataset arrange_dataset_groups(const Dataset& d, const std::vector<std::vector<std::string>>& groups);

}  // namespace groupfx
