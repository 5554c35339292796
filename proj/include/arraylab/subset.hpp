#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace arraylab {

inline constexpr int kMaxGround = 63;

/// Finite subset of {1,...,63}; element i is stored in bit i-1.
/// Among sets of equal size, numeric order of the mask is colexicographic order.
class Subset {
 public:
  constexpr Subset() = default;
  static constexpr Subset from_bits(std::uint64_t bits) {
    Subset s;
    s.bits_ = bits;
    return s;
  }
  static Subset of(std::initializer_list<int> elements);
  static Subset from_vector(const std::vector<int>& elements);
  /// {lo, lo+1, ..., hi}; empty when hi < lo.
  static Subset interval(int lo, int hi);
  static Subset first(int n) { return interval(1, n); }

  constexpr std::uint64_t bits() const { return bits_; }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  bool contains(int i) const { return i >= 1 && i <= kMaxGround && ((bits_ >> (i - 1)) & 1u); }
  int min() const;
  int max() const;
  /// k-th smallest element, k counted from 0.
  int nth(int k) const;
  /// Position of i among the elements, counted from 0; -1 if absent.
  int index_of(int i) const;

  Subset with(int i) const;
  Subset without(int i) const;
  bool subset_of(Subset other) const { return (bits_ & ~other.bits_) == 0; }
  bool disjoint(Subset other) const { return (bits_ & other.bits_) == 0; }

  std::vector<int> elements() const;
  std::string to_string() const;

  friend constexpr Subset operator|(Subset a, Subset b) { return from_bits(a.bits_ | b.bits_); }
  friend constexpr Subset operator&(Subset a, Subset b) { return from_bits(a.bits_ & b.bits_); }
  friend constexpr Subset operator-(Subset a, Subset b) { return from_bits(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(Subset a, Subset b) = default;
  friend constexpr auto operator<=>(Subset a, Subset b) { return a.bits_ <=> b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

/// Binomial coefficient; throws DomainError on 64-bit overflow.
std::uint64_t binomial(int n, int k);

/// Image of s under the increasing bijection from `from` onto `to` (equal sizes, s within from).
Subset relabel(Subset s, Subset from, Subset to);
/// Positions of s inside ground, as a subset of {1,...,|ground|}.
Subset compress(Subset s, Subset ground);
/// Inverse of compress.
Subset expand(Subset positions, Subset ground);

/// Calls fn on every k-subset of ground, in colex order.
void for_each_k_subset(Subset ground, int k, const std::function<void(Subset)>& fn);
std::vector<Subset> k_subsets(Subset ground, int k);
/// C(J, d) in colex order: the array entries inside J.
std::vector<Subset> array_entries(Subset J, int d);
Subset support_of(const std::vector<Subset>& family);

/// Enumeration of C([n], d) in colex order with rank/unrank.
class DSubsetIndex {
 public:
  DSubsetIndex(int n, int d);
  int n() const { return n_; }
  int d() const { return d_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t rank(Subset s) const;
  Subset unrank(std::uint64_t r) const;
  std::vector<Subset> all() const;

 private:
  int n_;
  int d_;
  std::uint64_t size_;
};

}  // namespace arraylab

template <>
struct std::hash<arraylab::Subset> {
  std::size_t operator()(arraylab::Subset s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
