#include "arraylab/latent.hpp"

#include "arraylab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arraylab {

TupleTable TupleTable::empty(int vertices, int arity) {
  if (vertices < 1 || arity < 1) throw DomainError("tuple table needs vertices >= 1 and arity >= 1");
  long double cells = std::pow(static_cast<long double>(vertices), static_cast<long double>(arity));
  require_capacity(cells, "tuple table");
  TupleTable t;
  t.vertices = vertices;
  t.arity = arity;
  t.cells.assign(static_cast<std::size_t>(cells), 0);
  return t;
}

std::uint64_t TupleTable::index(const std::vector<int>& tuple) const {
  std::uint64_t idx = 0, p = 1;
  for (int j = 0; j < arity; ++j) {
    if (tuple[j] < 0 || tuple[j] >= vertices) throw DomainError("tuple entry out of range");
    idx += static_cast<std::uint64_t>(tuple[j]) * p;
    p *= static_cast<std::uint64_t>(vertices);
  }
  return idx;
}

namespace {

std::vector<int> decode(std::uint64_t idx, int vertices, int arity) {
  std::vector<int> t(arity);
  for (int j = 0; j < arity; ++j) {
    t[j] = static_cast<int>(idx % static_cast<std::uint64_t>(vertices));
    idx /= static_cast<std::uint64_t>(vertices);
  }
  return t;
}

}  // namespace

bool TupleTable::symmetric() const {
  for (std::uint64_t idx = 0; idx < cells.size(); ++idx) {
    if (!cells[idx]) continue;
    auto t = decode(idx, vertices, arity);
    std::sort(t.begin(), t.end());
    do {
      if (!cells[index(t)]) return false;
    } while (std::next_permutation(t.begin(), t.end()));
  }
  return true;
}

std::uint64_t TupleTable::close_symmetric() {
  std::uint64_t added = 0;
  auto snapshot = cells;
  for (std::uint64_t idx = 0; idx < snapshot.size(); ++idx) {
    if (!snapshot[idx]) continue;
    auto t = decode(idx, vertices, arity);
    std::sort(t.begin(), t.end());
    do {
      auto j = index(t);
      if (!cells[j]) {
        cells[j] = 1;
        ++added;
      }
    } while (std::next_permutation(t.begin(), t.end()));
  }
  return added;
}

std::uint64_t TupleTable::popcount() const {
  return static_cast<std::uint64_t>(std::count_if(cells.begin(), cells.end(), [](std::uint8_t c) { return c != 0; }));
}

namespace {

using u128 = unsigned __int128;

u128 brute_force(int V, int k, const std::vector<TupleConstraint>& cs) {
  // constraints checked at the level of their last variable
  std::vector<std::vector<const TupleConstraint*>> at_level(static_cast<std::size_t>(k));
  for (auto& c : cs) at_level[static_cast<std::size_t>(*std::max_element(c.vars.begin(), c.vars.end()))].push_back(&c);
  std::vector<int> label(static_cast<std::size_t>(k), 0);
  std::vector<int> tuple;
  u128 total = 0;
  int level = 0;
  label[0] = -1;
  while (level >= 0) {
    if (++label[level] == V) {
      --level;
      continue;
    }
    bool ok = true;
    for (auto* c : at_level[level]) {
      std::uint64_t idx = 0, p = 1;
      for (int v : c->vars) {
        idx += static_cast<std::uint64_t>(label[v]) * p;
        p *= static_cast<std::uint64_t>(V);
      }
      if ((c->table->cells[idx] != 0) != c->value) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (level == k - 1) {
      ++total;
    } else {
      ++level;
      label[level] = -1;
    }
  }
  return total;
}

struct Factor {
  std::vector<int> scope;  // sorted variable ids
  std::vector<u128> table;
};

std::uint64_t ipow(int V, std::size_t e) {
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < e; ++i) p *= static_cast<std::uint64_t>(V);
  return p;
}

Factor make_factor(int V, const TupleConstraint& c) {
  Factor f;
  f.scope = c.vars;
  std::sort(f.scope.begin(), f.scope.end());
  std::uint64_t size = ipow(V, f.scope.size());
  f.table.assign(size, 0);
  std::vector<int> label(f.scope.size());
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    std::uint64_t r = idx;
    for (std::size_t j = 0; j < f.scope.size(); ++j) {
      label[j] = static_cast<int>(r % static_cast<std::uint64_t>(V));
      r /= static_cast<std::uint64_t>(V);
    }
    std::uint64_t t = 0, p = 1;
    for (int v : c.vars) {
      auto pos = static_cast<std::size_t>(std::lower_bound(f.scope.begin(), f.scope.end(), v) - f.scope.begin());
      t += static_cast<std::uint64_t>(label[pos]) * p;
      p *= static_cast<std::uint64_t>(V);
    }
    f.table[idx] = ((c.table->cells[t] != 0) == c.value) ? 1 : 0;
  }
  return f;
}

u128 eliminate(int V, int k, const std::vector<TupleConstraint>& cs) {
  std::vector<Factor> factors;
  for (auto& c : cs) factors.push_back(make_factor(V, c));
  std::vector<bool> alive(static_cast<std::size_t>(k), true);
  u128 scalar = 1;
  for (int step = 0; step < k; ++step) {
    // pick the variable whose elimination creates the smallest table
    int best = -1;
    std::size_t best_width = ~std::size_t{0};
    for (int x = 0; x < k; ++x) {
      if (!alive[static_cast<std::size_t>(x)]) continue;
      std::vector<int> uni;
      for (auto& f : factors)
        if (std::binary_search(f.scope.begin(), f.scope.end(), x)) uni.insert(uni.end(), f.scope.begin(), f.scope.end());
      std::sort(uni.begin(), uni.end());
      uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
      if (uni.size() < best_width) {
        best_width = uni.size();
        best = x;
      }
    }
    alive[static_cast<std::size_t>(best)] = false;
    std::vector<Factor> touching, rest;
    for (auto& f : factors)
      (std::binary_search(f.scope.begin(), f.scope.end(), best) ? touching : rest).push_back(std::move(f));
    if (touching.empty()) {
      scalar *= static_cast<u128>(V);
      factors.swap(rest);
      continue;
    }
    std::vector<int> uni;
    for (auto& f : touching) uni.insert(uni.end(), f.scope.begin(), f.scope.end());
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    require_capacity(std::pow(static_cast<long double>(V), static_cast<long double>(uni.size())),
                     "latent variable elimination");
    Factor out;
    for (int v : uni)
      if (v != best) out.scope.push_back(v);
    out.table.assign(ipow(V, out.scope.size()), 0);
    // strides of each touching factor and of the output, in terms of positions in uni
    std::vector<std::vector<std::uint64_t>> stride(touching.size(), std::vector<std::uint64_t>(uni.size(), 0));
    for (std::size_t fi = 0; fi < touching.size(); ++fi) {
      std::uint64_t p = 1;
      for (int v : touching[fi].scope) {
        auto pos = static_cast<std::size_t>(std::lower_bound(uni.begin(), uni.end(), v) - uni.begin());
        stride[fi][pos] = p;
        p *= static_cast<std::uint64_t>(V);
      }
    }
    std::vector<std::uint64_t> out_stride(uni.size(), 0);
    {
      std::uint64_t p = 1;
      for (std::size_t j = 0; j < uni.size(); ++j) {
        if (uni[j] == best) continue;
        out_stride[j] = p;
        p *= static_cast<std::uint64_t>(V);
      }
    }
    std::vector<int> label(uni.size(), 0);
    std::vector<std::uint64_t> fidx(touching.size(), 0);
    std::uint64_t oidx = 0;
    for (;;) {
      u128 prod = 1;
      for (std::size_t fi = 0; fi < touching.size() && prod; ++fi) prod *= touching[fi].table[fidx[fi]];
      out.table[oidx] += prod;
      std::size_t j = 0;
      for (; j < uni.size(); ++j) {
        if (++label[j] < V) {
          for (std::size_t fi = 0; fi < touching.size(); ++fi) fidx[fi] += stride[fi][j];
          oidx += out_stride[j];
          break;
        }
        label[j] = 0;
        for (std::size_t fi = 0; fi < touching.size(); ++fi) fidx[fi] -= stride[fi][j] * static_cast<std::uint64_t>(V - 1);
        oidx -= out_stride[j] * static_cast<std::uint64_t>(V - 1);
      }
      if (j == uni.size()) break;
    }
    rest.push_back(std::move(out));
    factors.swap(rest);
  }
  for (auto& f : factors) scalar *= f.table.at(0);
  return scalar;
}

}  // namespace

u128 count_assignments(int vertices, int num_vars, const std::vector<TupleConstraint>& constraints) {
  if (vertices < 1) throw DomainError("need at least one vertex");
  if (num_vars == 0) return 1;
  if (std::log2(static_cast<double>(vertices)) * num_vars > 120.0)
    throw CapacityError("latent assignment count", std::pow(static_cast<long double>(vertices), num_vars),
                        enumeration_cap());
  for (auto& c : constraints) {
    if (!c.table || static_cast<int>(c.vars.size()) != c.table->arity || c.table->vertices != vertices)
      throw DomainError("constraint does not match its tuple table");
    for (int v : c.vars)
      if (v < 0 || v >= num_vars) throw DomainError("constraint variable out of range");
  }
  long double states = std::pow(static_cast<long double>(vertices), static_cast<long double>(num_vars));
  if (states <= 65536.0L) return brute_force(vertices, num_vars, constraints);
  return eliminate(vertices, num_vars, constraints);
}

Rational assignment_fraction(int vertices, int num_vars, const std::vector<TupleConstraint>& constraints) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(vertices), static_cast<unsigned long>(num_vars));
  Rational r(from_u128(count_assignments(vertices, num_vars, constraints)), den);
  r.canonicalize();
  return r;
}

}  // namespace arraylab
