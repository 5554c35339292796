#include "arraylab/boxes.hpp"

#include "arraylab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace arraylab {

bool BoxSpec::is_box() const {
  return !parts.empty() && std::all_of(parts.begin(), parts.end(), [](Subset h) { return h.size() == 2; });
}

bool BoxSpec::is_face() const {
  int singles = 0;
  for (auto h : parts) {
    if (h.size() == 1) ++singles;
    else if (h.size() != 2) return false;
  }
  return singles == 1;
}

std::vector<Subset> BoxSpec::members() const {
  std::vector<Subset> out{Subset{}};
  for (auto h : parts) {
    std::vector<Subset> next;
    next.reserve(out.size() * static_cast<std::size_t>(h.size()));
    for (auto s : out)
      for (int i : h.elements()) next.push_back(s.with(i));
    out.swap(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Subset BoxSpec::support() const {
  Subset u;
  for (auto h : parts) u = u | h;
  return u;
}

std::string BoxSpec::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << ',';
    os << parts[i].to_string();
  }
  os << ')';
  return os.str();
}

BoxSpec make_box(std::vector<Subset> parts) {
  if (parts.empty()) throw DomainError("box needs at least one part");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    int sz = parts[i].size();
    if (sz != 1 && sz != 2) throw DomainError("box parts must have one or two elements");
    if (i && parts[i - 1].max() >= parts[i].min()) throw DomainError("box parts must be increasing");
  }
  return BoxSpec{std::move(parts)};
}

BoxSpec standard_box(int d) {
  std::vector<Subset> parts;
  for (int i = 1; i <= d; ++i) parts.push_back(Subset::of({2 * i - 1, 2 * i}));
  return BoxSpec{parts};
}

std::vector<BoxSpec> enumerate_boxes(int n, int d, BoxKind kind) {
  if (d < 1) throw DomainError("enumerate_boxes: d must be positive");
  int need = kind == BoxKind::full ? 2 * d : 2 * d - 1;
  if (n < need) throw DomainError("enumerate_boxes: n too small for the requested boxes");
  std::vector<BoxSpec> out;
  for_each_k_subset(Subset::first(n), need, [&](Subset c) {
    auto el = c.elements();
    if (kind == BoxKind::full) {
      BoxSpec b;
      for (int i = 0; i < d; ++i) b.parts.push_back(Subset::of({el[2 * i], el[2 * i + 1]}));
      out.push_back(std::move(b));
      return;
    }
    for (int single = 0; single < d; ++single) {
      BoxSpec b;
      std::size_t pos = 0;
      for (int i = 0; i < d; ++i) {
        if (i == single) {
          b.parts.push_back(Subset::of({el[pos]}));
          pos += 1;
        } else {
          b.parts.push_back(Subset::of({el[pos], el[pos + 1]}));
          pos += 2;
        }
      }
      out.push_back(std::move(b));
    }
  });
  return out;
}

}  // namespace arraylab
