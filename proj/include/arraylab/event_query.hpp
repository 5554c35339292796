#pragma once

#include "arraylab/subset.hpp"

#include <string>
#include <utility>
#include <vector>

namespace arraylab {

using Symbol = int;

/// Conjunction of constraints [X_s = a_s].
class EventQuery {
 public:
  EventQuery() = default;
  EventQuery(std::initializer_list<std::pair<Subset, Symbol>> constraints);

  /// Adds [X_s = a]. A second, different symbol for the same s makes the event empty.
  EventQuery& require(Subset s, Symbol a);

  /// Constraints sorted by index (colex); duplicates merged.
  const std::vector<std::pair<Subset, Symbol>>& constraints() const { return constraints_; }
  bool contradictory() const { return contradictory_; }
  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }
  Subset support() const;

  static EventQuery all_equal(const std::vector<Subset>& family, Symbol a);
  std::string to_string() const;

 private:
  std::vector<std::pair<Subset, Symbol>> constraints_;
  bool contradictory_ = false;
};

}  // namespace arraylab
