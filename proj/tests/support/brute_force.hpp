#pragma once

// Reference computations by exhaustive enumeration of the full outcome or latent space.
// Deliberately naive and independent of the library's oracles.

#include "arraylab/event_query.hpp"
#include "arraylab/latent.hpp"
#include "arraylab/rational.hpp"
#include "arraylab/subset.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace brute {

using arraylab::EventQuery;
using arraylab::Rational;
using arraylab::Subset;

// All d-subsets of [n] in colex order, built by sorting masks.
inline std::vector<Subset> entries(int n, int d) {
  std::vector<Subset> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (__builtin_popcountll(m) == d) out.push_back(Subset::from_bits(m));
  return out;
}

inline bool satisfies(const std::vector<int>& config, const std::vector<Subset>& ents, const EventQuery& q) {
  for (auto& [s, a] : q.constraints()) {
    for (std::size_t i = 0; i < ents.size(); ++i)
      if (ents[i] == s && config[i] != a) return false;
  }
  return !q.contradictory();
}

// Sum over all labelings xi in [V]^n of weight(xi) * [array(xi) satisfies q].
inline Rational over_labelings(int n, int d, int V, const std::function<int(const std::vector<int>&, Subset)>& entry,
                               const EventQuery& q) {
  auto ents = entries(n, d);
  std::vector<int> xi(n, 0);
  long hits = 0, total = 0;
  for (;;) {
    std::vector<int> config;
    for (auto s : ents) config.push_back(entry(xi, s));
    if (satisfies(config, ents, q)) ++hits;
    ++total;
    int j = 0;
    for (; j < n; ++j) {
      if (++xi[j] < V) break;
      xi[j] = 0;
    }
    if (j == n) break;
  }
  Rational r(hits, total);
  r.canonicalize();
  return r;
}

inline Rational graph_sampling(int n, const arraylab::TupleTable& A, const EventQuery& q) {
  return over_labelings(n, A.arity, A.vertices, [&](const std::vector<int>& xi, Subset s) {
    std::vector<int> t;
    for (int i : s.elements()) t.push_back(xi[i - 1]);
    return A.at(t) ? 1 : 0;
  }, q);
}

// 1/2 i.i.d. fair entries + 1/2 equality-of-fair-bits. The i.i.d. part enumerates the constrained
// entries only; the latent part enumerates all of {0,1}^n.
inline Rational appendix_2d(int n, const EventQuery& q) {
  std::size_t k = q.size();
  long hits = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    bool ok = !q.contradictory();
    std::size_t i = 0;
    for (auto& [s, a] : q.constraints()) ok = ok && static_cast<int>((m >> i++) & 1u) == a;
    hits += ok;
  }
  Rational iid(hits, static_cast<long>(std::uint64_t{1} << k));
  iid.canonicalize();
  Rational lat = over_labelings(n, 2, 2, [](const std::vector<int>& xi, Subset s) {
    return xi[s.min() - 1] == xi[s.max() - 1] ? 1 : 0;
  }, q);
  return Rational(1, 2) * iid + Rational(1, 2) * lat;
}

inline Rational product(const std::vector<Rational>& p, int d, const EventQuery& q) {
  int n = static_cast<int>(p.size());
  auto ents = entries(n, d);
  Rational total = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    Rational w = 1;
    for (int i = 0; i < n; ++i) w *= ((m >> i) & 1u) ? p[i] : Rational(1 - p[i]);
    std::vector<int> config;
    for (auto s : ents) config.push_back((s.bits() & m) == s.bits() ? 1 : 0);
    if (satisfies(config, ents, q)) total += w;
  }
  return total;
}

inline Rational fixed_size(int n, int d, int k, const EventQuery& q) {
  auto ents = entries(n, d);
  std::size_t N = ents.size();
  long hits = 0, total = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << N); ++m) {
    if (__builtin_popcountll(m) != k) continue;
    std::vector<int> config(N);
    for (std::size_t i = 0; i < N; ++i) config[i] = (m >> i) & 1u;
    ++total;
    if (satisfies(config, ents, q)) ++hits;
  }
  Rational r(hits, total);
  r.canonicalize();
  return r;
}

// 1/2 i.i.d. fair entries + 1/2 X_s = H(xi_s), H(v) = 1 iff an even number of the d faces of v miss A.
inline Rational appendix_highd(int n, const arraylab::TupleTable& A, const EventQuery& q) {
  int d = A.arity + 1;
  auto ents = entries(n, d);
  Rational iid = 1;
  for (std::size_t i = 0; i < q.size(); ++i) iid /= 2;
  if (q.contradictory()) iid = 0;
  Rational lat = over_labelings(n, d, A.vertices, [&](const std::vector<int>& xi, Subset s) {
    auto idx = s.elements();
    int missing = 0;
    for (std::size_t drop = 0; drop < idx.size(); ++drop) {
      std::vector<int> face;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (j != drop) face.push_back(xi[idx[j] - 1]);
      if (!A.at(face)) ++missing;
    }
    return missing % 2 == 0 ? 1 : 0;
  }, q);
  return Rational(1, 2) * iid + Rational(1, 2) * lat;
}

// Explicit table over all configurations, colex entry j contributing a_j * m^j.
inline Rational dense(int n, int d, int m, const std::vector<Rational>& table, const EventQuery& q) {
  auto ents = entries(n, d);
  Rational total = 0;
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    std::vector<int> config;
    std::size_t r = idx;
    for (std::size_t j = 0; j < ents.size(); ++j) {
      config.push_back(static_cast<int>(r % m));
      r /= m;
    }
    if (satisfies(config, ents, q)) total += table[idx];
  }
  return total;
}

// E[f | X_E] evaluated at every full configuration, by grouping configurations on their E-values.
inline std::vector<Rational> conditional(int n, int d, int m, const std::vector<Rational>& law,
                                         const std::vector<Rational>& f, const std::vector<Subset>& E) {
  auto ents = entries(n, d);
  std::vector<std::size_t> pos;
  for (auto s : E)
    for (std::size_t j = 0; j < ents.size(); ++j)
      if (ents[j] == s) pos.push_back(j);
  std::vector<std::vector<int>> keys(law.size());
  std::map<std::vector<int>, std::pair<Rational, Rational>> acc;
  for (std::size_t idx = 0; idx < law.size(); ++idx) {
    std::vector<int> config;
    std::size_t r = idx;
    for (std::size_t j = 0; j < ents.size(); ++j) {
      config.push_back(static_cast<int>(r % m));
      r /= m;
    }
    for (auto p : pos) keys[idx].push_back(config[p]);
    auto& [P, PF] = acc[keys[idx]];
    P += law[idx];
    PF += law[idx] * f[idx];
  }
  std::vector<Rational> out(law.size());
  for (std::size_t idx = 0; idx < law.size(); ++idx) {
    auto& [P, PF] = acc[keys[idx]];
    if (P != 0) out[idx] = PF / P;
  }
  return out;
}

// (sum_x P(x) |g(x)|^p)^{1/p} on the full configuration space.
inline double norm(const std::vector<Rational>& law, const std::vector<Rational>& g, double p) {
  double s = 0;
  for (std::size_t i = 0; i < law.size(); ++i) s += law[i].get_d() * std::pow(std::fabs(g[i].get_d()), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace brute
