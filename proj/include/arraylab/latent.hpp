#pragma once

#include "arraylab/rational.hpp"

#include <cstdint>
#include <vector>

namespace arraylab {

/// 0/1 table over V^arity; tuple (v_0, ..., v_{r-1}) sits at sum v_j V^j.
struct TupleTable {
  int vertices = 0;
  int arity = 0;
  std::vector<std::uint8_t> cells;

  static TupleTable empty(int vertices, int arity);
  std::uint64_t index(const std::vector<int>& tuple) const;
  bool at(const std::vector<int>& tuple) const { return cells[index(tuple)] != 0; }
  bool symmetric() const;
  /// Adds every coordinate permutation of every member; returns how many cells changed.
  std::uint64_t close_symmetric();
  std::uint64_t popcount() const;
};

/// Requires table(v_{vars[0]}, ..., v_{vars[r-1]}) == value.
struct TupleConstraint {
  std::vector<int> vars;
  const TupleTable* table = nullptr;
  bool value = true;
};

/// Number of assignments of variables 0..num_vars-1 to [V] satisfying all constraints.
/// Every variable should occur in some constraint; free variables are summed over.
unsigned __int128 count_assignments(int vertices, int num_vars, const std::vector<TupleConstraint>& constraints);

/// count_assignments / V^num_vars.
Rational assignment_fraction(int vertices, int num_vars, const std::vector<TupleConstraint>& constraints);

}  // namespace arraylab
