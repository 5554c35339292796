#include "arraylab/event_query.hpp"

#include <algorithm>
#include <sstream>

namespace arraylab {

EventQuery::EventQuery(std::initializer_list<std::pair<Subset, Symbol>> constraints) {
  for (auto& [s, a] : constraints) require(s, a);
}

EventQuery& EventQuery::require(Subset s, Symbol a) {
  auto it = std::lower_bound(constraints_.begin(), constraints_.end(), s,
                             [](const auto& c, Subset key) { return c.first < key; });
  if (it != constraints_.end() && it->first == s) {
    if (it->second != a) contradictory_ = true;
    return *this;
  }
  constraints_.insert(it, {s, a});
  return *this;
}

Subset EventQuery::support() const {
  Subset u;
  for (auto& c : constraints_) u = u | c.first;
  return u;
}

EventQuery EventQuery::all_equal(const std::vector<Subset>& family, Symbol a) {
  EventQuery q;
  for (auto s : family) q.require(s, a);
  return q;
}

std::string EventQuery::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (i) os << ", ";
    os << constraints_[i].first.to_string() << "->" << constraints_[i].second;
  }
  os << '}';
  if (contradictory_) os << " (contradictory)";
  return os.str();
}

}  // namespace arraylab
