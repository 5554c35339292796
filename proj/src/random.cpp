#include "arraylab/random.hpp"

namespace arraylab {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    std::uint64_t x = engine_();
    if (x < limit) return x % bound;
  }
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over a mixed pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace arraylab
