#pragma once

#include "arraylab/subset.hpp"

#include <vector>

namespace arraylab {

/// Partition of a family of d-sets by maximum element.
struct SlicingProfile {
  int d = 0;
  std::vector<int> r;                          // increasing slice maxima
  std::vector<std::vector<Subset>> groups;     // G_i within C([r_i - 1], d - 1), colex order
  std::vector<int> profile;                    // |G_i|

  int u() const { return static_cast<int>(r.size()); }
};

SlicingProfile slicing(const std::vector<Subset>& family);
/// Rebuilds the family, in colex order.
std::vector<Subset> reconstruct(const SlicingProfile& sp);

}  // namespace arraylab
