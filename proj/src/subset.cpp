#include "arraylab/subset.hpp"

#include "arraylab/errors.hpp"

#include <sstream>

namespace arraylab {

namespace {
void check_element(int i) {
  if (i < 1 || i > kMaxGround) throw DomainError("element out of range [1,63]: " + std::to_string(i));
}
}  // namespace

Subset Subset::of(std::initializer_list<int> elements) {
  std::uint64_t b = 0;
  for (int i : elements) {
    check_element(i);
    b |= std::uint64_t{1} << (i - 1);
  }
  return from_bits(b);
}

Subset Subset::from_vector(const std::vector<int>& elements) {
  std::uint64_t b = 0;
  for (int i : elements) {
    check_element(i);
    b |= std::uint64_t{1} << (i - 1);
  }
  return from_bits(b);
}

Subset Subset::interval(int lo, int hi) {
  std::uint64_t b = 0;
  for (int i = lo; i <= hi; ++i) {
    check_element(i);
    b |= std::uint64_t{1} << (i - 1);
  }
  return from_bits(b);
}

int Subset::min() const {
  if (empty()) throw DomainError("min of empty set");
  return std::countr_zero(bits_) + 1;
}

int Subset::max() const {
  if (empty()) throw DomainError("max of empty set");
  return 64 - std::countl_zero(bits_);
}

int Subset::nth(int k) const {
  std::uint64_t b = bits_;
  for (int i = 0; i < k && b; ++i) b &= b - 1;
  if (!b) throw DomainError("nth: index past the end");
  return std::countr_zero(b) + 1;
}

int Subset::index_of(int i) const {
  if (!contains(i)) return -1;
  std::uint64_t below = bits_ & ((std::uint64_t{1} << (i - 1)) - 1);
  return std::popcount(below);
}

Subset Subset::with(int i) const {
  check_element(i);
  return from_bits(bits_ | (std::uint64_t{1} << (i - 1)));
}

Subset Subset::without(int i) const {
  check_element(i);
  return from_bits(bits_ & ~(std::uint64_t{1} << (i - 1)));
}

std::vector<int> Subset::elements() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

std::string Subset::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : elements()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > ~std::uint64_t{0}) throw DomainError("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}

Subset relabel(Subset s, Subset from, Subset to) {
  if (from.size() != to.size()) throw DomainError("relabel: size mismatch");
  return expand(compress(s, from), to);
}

Subset compress(Subset s, Subset ground) {
  if (!s.subset_of(ground)) throw DomainError("compress: not inside ground set");
  std::uint64_t out = 0;
  int pos = 0;
  for (std::uint64_t g = ground.bits(); g; g &= g - 1, ++pos) {
    if (s.bits() & (g & -g)) out |= std::uint64_t{1} << pos;
  }
  return Subset::from_bits(out);
}

Subset expand(Subset positions, Subset ground) {
  if (positions.empty()) return {};
  if (positions.max() > ground.size()) throw DomainError("expand: position past ground set");
  std::uint64_t out = 0;
  int pos = 0;
  for (std::uint64_t g = ground.bits(); g; g &= g - 1, ++pos) {
    if ((positions.bits() >> pos) & 1u) out |= g & -g;
  }
  return Subset::from_bits(out);
}

void for_each_k_subset(Subset ground, int k, const std::function<void(Subset)>& fn) {
  int N = ground.size();
  if (k < 0 || k > N) return;
  if (k == 0) {
    fn(Subset{});
    return;
  }
  // Gosper's hack over positions, then spread onto the ground set
  std::uint64_t x = (k == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << k) - 1);
  std::uint64_t limit = (N == 64) ? 0 : (std::uint64_t{1} << N);
  for (;;) {
    fn(expand(Subset::from_bits(x), ground));
    std::uint64_t c = x & -x;
    std::uint64_t r = x + c;
    if (r == 0) break;
    x = (((r ^ x) >> 2) / c) | r;
    if (limit && x >= limit) break;
  }
}

std::vector<Subset> k_subsets(Subset ground, int k) {
  std::vector<Subset> out;
  for_each_k_subset(ground, k, [&](Subset s) { out.push_back(s); });
  return out;
}

std::vector<Subset> array_entries(Subset J, int d) { return k_subsets(J, d); }

Subset support_of(const std::vector<Subset>& family) {
  Subset u;
  for (auto s : family) u = u | s;
  return u;
}

DSubsetIndex::DSubsetIndex(int n, int d) : n_(n), d_(d) {
  if (n < 1 || n > kMaxGround || d < 1 || d > n)
    throw DomainError("DSubsetIndex: need 1 <= d <= n <= 63");
  size_ = binomial(n, d);
}

std::uint64_t DSubsetIndex::rank(Subset s) const {
  if (s.size() != d_ || s.empty() || s.max() > n_) throw DomainError("rank: not a d-subset of [n]: " + s.to_string());
  std::uint64_t r = 0;
  int i = 1;
  for (int c : s.elements()) r += binomial(c - 1, i++);
  return r;
}

Subset DSubsetIndex::unrank(std::uint64_t r) const {
  if (r >= size_) throw DomainError("unrank: rank out of range");
  std::uint64_t bits = 0;
  int c = n_;
  for (int i = d_; i >= 1; --i) {
    while (binomial(c - 1, i) > r) --c;
    r -= binomial(c - 1, i);
    bits |= std::uint64_t{1} << (c - 1);
    --c;
  }
  return Subset::from_bits(bits);
}

std::vector<Subset> DSubsetIndex::all() const { return k_subsets(Subset::first(n_), d_); }

}  // namespace arraylab
