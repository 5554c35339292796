#include "arraylab/slicing.hpp"

#include "arraylab/errors.hpp"

#include <algorithm>
#include <map>

namespace arraylab {

SlicingProfile slicing(const std::vector<Subset>& family) {
  if (family.empty()) throw DomainError("slicing: empty family");
  SlicingProfile sp;
  sp.d = family.front().size();
  if (sp.d < 1) throw DomainError("slicing: sets must be nonempty");
  std::map<int, std::vector<Subset>> by_max;
  for (auto s : family) {
    if (s.size() != sp.d) throw DomainError("slicing: sets of different sizes");
    int r = s.max();
    by_max[r].push_back(s.without(r));
  }
  for (auto& [r, group] : by_max) {
    std::sort(group.begin(), group.end());
    if (std::adjacent_find(group.begin(), group.end()) != group.end())
      throw DomainError("slicing: repeated set in family");
    sp.r.push_back(r);
    sp.profile.push_back(static_cast<int>(group.size()));
    sp.groups.push_back(std::move(group));
  }
  return sp;
}

std::vector<Subset> reconstruct(const SlicingProfile& sp) {
  std::vector<Subset> out;
  for (std::size_t i = 0; i < sp.r.size(); ++i)
    for (auto t : sp.groups[i]) out.push_back(t.with(sp.r[i]));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace arraylab
