#pragma once

#include "arraylab/subset.hpp"

#include <string>
#include <vector>

namespace arraylab {

/// (H_1, ..., H_d) with |H_i| in {1, 2} and max H_i < min H_{i+1}.
struct BoxSpec {
  std::vector<Subset> parts;

  int dimension() const { return static_cast<int>(parts.size()); }
  bool is_box() const;
  bool is_face() const;
  /// Box(H): the d-sets meeting every H_i in exactly one point, in colex order.
  std::vector<Subset> members() const;
  Subset support() const;
  std::string to_string() const;

  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;
};

BoxSpec make_box(std::vector<Subset> parts);
/// ({1,2}, {3,4}, ..., {2d-1,2d}).
BoxSpec standard_box(int d);

enum class BoxKind { full, face };

/// Every d-dimensional box (or (d-1)-face) of [n] exactly once.
/// Boxes follow colex order of their 2d-element supports; faces follow colex order of the
/// (2d-1)-element support, then the position of the singleton part.
std::vector<BoxSpec> enumerate_boxes(int n, int d, BoxKind kind);

}  // namespace arraylab
