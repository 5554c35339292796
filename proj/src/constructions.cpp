#include "arraylab/constructions.hpp"

#include "arraylab/boxes.hpp"
#include "arraylab/errors.hpp"
#include "arraylab/models.hpp"
#include "arraylab/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace arraylab {

namespace {

void for_each_permutation(std::vector<int> v, const std::function<void(const std::vector<int>&)>& fn) {
  std::sort(v.begin(), v.end());
  do fn(v);
  while (std::next_permutation(v.begin(), v.end()));
}

}  // namespace

TupleTable HypergraphSpec::tuple_set() const {
  if (vertices < 1) throw DomainError("hypergraph: need at least one vertex");
  if (d < 1) throw DomainError("hypergraph: d must be positive");
  TupleTable t = TupleTable::empty(vertices, d);
  for (auto& e : edges) for_each_permutation(e, [&](const std::vector<int>& p) { t.cells[t.index(p)] = 1; });
  return t;
}

void HypergraphSpec::add_edge(std::vector<int> e) {
  if (static_cast<int>(e.size()) != d) throw DomainError("hypergraph: edge size differs from d");
  std::sort(e.begin(), e.end());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 || e[i] >= vertices) throw DomainError("hypergraph: vertex out of range");
    if (i > 0 && e[i] == e[i - 1]) throw DomainError("hypergraph: repeated vertex in edge");
  }
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) edges.insert(it, std::move(e));
}

bool HypergraphSpec::has_edge(std::vector<int> e) const {
  std::sort(e.begin(), e.end());
  return std::binary_search(edges.begin(), edges.end(), e);
}

HypergraphSpec complete_hypergraph(int vertices, int d) {
  HypergraphSpec h{vertices, d, {}};
  if (vertices > kMaxGround) throw DomainError("complete_hypergraph: too many vertices");
  if (d > vertices) return h;
  for_each_k_subset(Subset::first(vertices), d, [&](Subset s) {
    std::vector<int> e;
    for (int x : s.elements()) e.push_back(x - 1);
    h.edges.push_back(std::move(e));
  });
  std::sort(h.edges.begin(), h.edges.end());
  return h;
}

HypergraphSpec random_hypergraph(int vertices, int d, double p, std::uint64_t seed) {
  if (p < 0 || p > 1) throw DomainError("random_hypergraph: p must lie in [0,1]");
  auto all = complete_hypergraph(vertices, d);
  Rng rng(seed);
  HypergraphSpec h{vertices, d, {}};
  for (auto& e : all.edges)
    if (rng.bernoulli(p)) h.edges.push_back(e);
  return h;
}

HypergraphSpec disjoint_cliques(const std::vector<int>& sizes) {
  int total = 0;
  for (int s : sizes) {
    if (s < 1) throw DomainError("disjoint_cliques: sizes must be positive");
    total += s;
  }
  HypergraphSpec h{total, 2, {}};
  int offset = 0;
  for (int s : sizes) {
    for (int a = 0; a < s; ++a)
      for (int b = a + 1; b < s; ++b) h.edges.push_back({offset + a, offset + b});
    offset += s;
  }
  std::sort(h.edges.begin(), h.edges.end());
  return h;
}

HypergraphSpec parse_edge_list(const std::string& text, int d, int vertices) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<int>> raw;
  int max_label = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<int> e;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v < 1)
        throw DomainError("edge list line " + std::to_string(lineno) + ": bad vertex '" + tok + "'");
      e.push_back(v);
      max_label = std::max(max_label, v);
    }
    if (e.empty()) continue;
    if (static_cast<int>(e.size()) != d)
      throw DomainError("edge list line " + std::to_string(lineno) + ": expected " + std::to_string(d) + " vertices");
    raw.push_back(std::move(e));
  }
  if (vertices == 0) vertices = max_label;
  if (max_label > vertices) throw DomainError("edge list: vertex label exceeds vertex count");
  HypergraphSpec h{vertices, d, {}};
  for (auto& e : raw) {
    for (auto& v : e) --v;
    h.add_edge(e);
  }
  return h;
}

ModelPtr from_hypergraph(const HypergraphSpec& h, int n) {
  if (n < h.d) throw DomainError("from_hypergraph: n must be at least d");
  return std::make_shared<GraphSampling>(n, h.tuple_set());
}

ModelPtr mixture(std::vector<std::pair<Rational, ModelPtr>> components) {
  return std::make_shared<Mixture>(std::move(components));
}

ModelPtr product_array(std::vector<Rational> p, int d) { return std::make_shared<ProductArray>(std::move(p), d); }

ModelPtr fixed_size_er(int n, int d, std::uint64_t ones) { return std::make_shared<FixedSizeER>(n, d, ones); }

ModelPtr appendix_a_2d(int n) {
  if (n < 4) throw DomainError("appendix_a_2d: n must be at least 4");
  return std::make_shared<ClosedFormTwoDim>(n);
}

ModelPtr iid_entries(int n, int d, std::vector<Rational> symbol_law) {
  return std::make_shared<IidEntries>(n, d, std::move(symbol_law));
}

std::uint64_t PairFamily::labelled_pairs() const {
  return std::accumulate(multiplicity.begin(), multiplicity.end(), std::uint64_t{0});
}

namespace {

// A labelled pattern: sorted codes (index of the (d-1)-set) * 2 + (1 if in G).
using Code = std::vector<std::uint32_t>;

struct FaceUniverse {
  int d;
  std::vector<Subset> faces;                  // C([2d], d-1), colex
  std::map<std::uint64_t, std::uint32_t> at;  // mask -> index
  std::vector<std::vector<std::uint32_t>> image;  // per permutation of [2d]

  explicit FaceUniverse(int d_) : d(d_) {
    faces = k_subsets(Subset::first(2 * d), d - 1);
    for (std::uint32_t i = 0; i < faces.size(); ++i) at[faces[i].bits()] = i;
    std::vector<int> perm(static_cast<std::size_t>(2 * d));
    std::iota(perm.begin(), perm.end(), 1);
    long double count = std::tgamma(static_cast<long double>(2 * d + 1));
    require_capacity(count * static_cast<long double>(faces.size()), "relabelling tables for [2d]");
    do {
      std::vector<std::uint32_t> img(faces.size());
      for (std::size_t i = 0; i < faces.size(); ++i) {
        Subset t;
        for (int x : faces[i].elements()) t = t.with(perm[static_cast<std::size_t>(x - 1)]);
        img[i] = at.at(t.bits());
      }
      image.push_back(std::move(img));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  Code canonical(const Code& c) const {
    Code best = c, cur(c.size());
    for (auto& img : image) {
      for (std::size_t k = 0; k < c.size(); ++k) cur[k] = (img[c[k] >> 1] << 1) | (c[k] & 1u);
      std::sort(cur.begin(), cur.end());
      if (cur < best) best = cur;
    }
    return best;
  }

  SignPattern decode(const Code& c) const {
    SignPattern p;
    for (auto x : c) (x & 1u ? p.G : p.F).push_back(faces[x >> 1]);
    return p;
  }
};

// All sign maps on the (d-1)-subsets of the members of `config` with an even number of
// G-faces inside every member.
std::vector<Code> consistent_patterns(const FaceUniverse& U, const std::vector<Subset>& config) {
  std::vector<std::uint32_t> vars;
  for (auto s : config)
    for (int x : s.elements()) vars.push_back(U.at.at(s.without(x).bits()));
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > 64) throw DomainError("designated_pair_family: configuration too large");
  auto pos = [&](std::uint32_t f) {
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), f) - vars.begin());
  };
  std::vector<std::uint64_t> rows;
  for (auto s : config) {
    std::uint64_t r = 0;
    for (int x : s.elements()) r |= std::uint64_t{1} << pos(U.at.at(s.without(x).bits()));
    rows.push_back(r);
  }
  // Reduced row echelon form over GF(2).
  int nv = static_cast<int>(vars.size());
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < nv && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && !((rows[sel] >> col) & 1u)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && ((rows[r] >> col) & 1u)) rows[r] ^= rows[rank];
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<int> free_cols;
  {
    std::uint64_t pivots = 0;
    for (int c : pivot_col) pivots |= std::uint64_t{1} << c;
    for (int c = 0; c < nv; ++c)
      if (!((pivots >> c) & 1u)) free_cols.push_back(c);
  }
  require_capacity(std::ldexp(1.0L, static_cast<int>(free_cols.size())), "sign patterns of a configuration");
  std::vector<Code> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << free_cols.size()); ++m) {
    std::uint64_t sigma = 0;
    for (std::size_t k = 0; k < free_cols.size(); ++k)
      if ((m >> k) & 1u) sigma |= std::uint64_t{1} << free_cols[k];
    for (std::size_t r = 0; r < rank; ++r) {
      std::uint64_t rest = rows[r] & ~(std::uint64_t{1} << pivot_col[r]);
      if (std::popcount(rest & sigma) % 2) sigma |= std::uint64_t{1} << pivot_col[r];
    }
    Code c;
    for (int k = 0; k < nv; ++k) c.push_back((vars[static_cast<std::size_t>(k)] << 1) | ((sigma >> k) & 1u));
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

PairFamily build_family(int d, int small_size) {
  if (d < 3) throw DomainError("designated_pair_family: d must be at least 3");
  if (small_size < 0) throw DomainError("designated_pair_family: small_size must be non-negative");
  FaceUniverse U(d);
  std::set<Code> labelled;

  std::vector<std::vector<Subset>> configs;
  configs.push_back({consecutive_set(d, 1)});
  for (int k = 2; k <= d + 1; ++k) configs.push_back({consecutive_set(d, 1), consecutive_set(d, k)});
  configs.push_back(highd_face(d));
  configs.push_back(standard_box(d).members());
  for (auto& cfg : configs)
    for (auto& c : consistent_patterns(U, cfg)) labelled.insert(std::move(c));

  int m = static_cast<int>(U.faces.size());
  long double small_count = 0;
  for (int k = 0; k <= std::min(small_size, m); ++k)
    small_count += static_cast<long double>(binomial(m, k)) * std::ldexp(1.0L, k);
  require_capacity(small_count * static_cast<long double>(U.image.size()), "small sign patterns up to relabelling");
  for (int k = 0; k <= std::min(small_size, m); ++k) {
    for_each_k_subset(Subset::first(m), k, [&](Subset chosen) {
      auto idx = chosen.elements();
      for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << k); ++signs) {
        Code c;
        for (int j = 0; j < k; ++j)
          c.push_back((static_cast<std::uint32_t>(idx[static_cast<std::size_t>(j)] - 1) << 1) |
                      static_cast<std::uint32_t>((signs >> j) & 1u));
        std::sort(c.begin(), c.end());
        labelled.insert(std::move(c));
      }
    });
  }

  std::map<Code, std::uint64_t> classes;
  for (auto& c : labelled) ++classes[U.canonical(c)];
  PairFamily fam;
  fam.d = d;
  for (auto& [c, mult] : classes) {
    fam.representatives.push_back(U.decode(c));
    fam.multiplicity.push_back(mult);
  }
  return fam;
}

}  // namespace

PairFamily designated_pair_family(int d, int small_size) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, PairFamily> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, small_size);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_family(d, small_size)).first;
  return it->second;
}

Rational sign_pattern_deviation(const TupleTable& A, const SignPattern& pattern) {
  std::size_t total = pattern.F.size() + pattern.G.size();
  if (total == 0) return 0;
  Subset support;
  for (auto u : pattern.F) support = support | u;
  for (auto u : pattern.G) support = support | u;
  std::vector<TupleConstraint> cons;
  auto add = [&](Subset u, bool value) {
    if (u.size() != A.arity) throw DomainError("sign pattern: set size differs from the arity of A");
    TupleConstraint c;
    c.table = &A;
    c.value = value;
    for (int x : u.elements()) c.vars.push_back(support.index_of(x));
    cons.push_back(std::move(c));
  };
  for (auto u : pattern.F) add(u, true);
  for (auto u : pattern.G) add(u, false);
  Rational value = assignment_fraction(A.vertices, support.size(), cons) - pow2(-static_cast<long>(total));
  return abs(value);
}

namespace {

void evaluate_into(SymmetricSetSearchResult& r, const PairFamily& fam) {
  r.achieved_exact = 0;
  r.worst = SignPattern{};
  for (auto& p : fam.representatives) {
    Rational dev = sign_pattern_deviation(r.set, p);
    if (dev > r.achieved_exact) {
      r.achieved_exact = dev;
      r.worst = p;
    }
  }
  r.achieved_eps = to_double(r.achieved_exact);
  r.checked_patterns = fam.representatives.size();
  r.checked_pairs = fam.labelled_pairs();
}

TupleTable sample_symmetric(int V, int arity, Rng& rng) {
  TupleTable A = TupleTable::empty(V, arity);
  std::vector<int> t(static_cast<std::size_t>(arity));
  for (std::uint64_t idx = 0; idx < A.cells.size(); ++idx) {
    std::uint64_t r = idx;
    for (auto& x : t) {
      x = static_cast<int>(r % static_cast<std::uint64_t>(V));
      r /= static_cast<std::uint64_t>(V);
    }
    if (!std::is_sorted(t.begin(), t.end())) continue;
    if (!rng.coin()) continue;
    for_each_permutation(t, [&](const std::vector<int>& p) { A.cells[A.index(p)] = 1; });
  }
  return A;
}

}  // namespace

SymmetricSetSearchResult evaluate_symmetric_set(int d, TupleTable A, int small_size) {
  if (A.arity != d - 1) throw DomainError("evaluate_symmetric_set: A must have arity d-1");
  if (!A.symmetric()) throw DomainError("evaluate_symmetric_set: A must be symmetric");
  SymmetricSetSearchResult r;
  r.d = d;
  r.vertices = A.vertices;
  r.small_size = small_size;
  r.set = std::move(A);
  evaluate_into(r, designated_pair_family(d, small_size));
  return r;
}

SymmetricSetSearchResult random_symmetric_set(int d, int vertices, double target_eps, std::uint64_t seed,
                                              int attempts, int small_size) {
  if (d < 3) throw DomainError("random_symmetric_set: d must be at least 3");
  if (vertices < 2 || vertices % 2 != 0) throw DomainError("random_symmetric_set: vertex count must be even");
  if (attempts < 1) throw DomainError("random_symmetric_set: attempts must be positive");
  require_capacity(std::pow(static_cast<long double>(vertices), d - 1), "symmetric set table");
  auto fam = designated_pair_family(d, small_size);
  SymmetricSetSearchResult best;
  bool have = false;
  int used = 0;
  for (int a = 0; a < attempts; ++a) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(a)));
    SymmetricSetSearchResult cur;
    cur.d = d;
    cur.vertices = vertices;
    cur.small_size = small_size;
    cur.set = sample_symmetric(vertices, d - 1, rng);
    evaluate_into(cur, fam);
    used = a + 1;
    if (!have || cur.achieved_exact < best.achieved_exact) {
      best = std::move(cur);
      have = true;
    }
    if (best.achieved_eps <= target_eps) break;
  }
  best.attempts_used = used;
  best.seed = seed;
  best.met_target = best.achieved_eps <= target_eps;
  return best;
}

ModelPtr appendix_a_highd(int d, const SymmetricSetSearchResult& search, int n) {
  if (d < 3) throw DomainError("appendix_a_highd: d must be at least 3");
  if (search.set.arity != d - 1) throw DomainError("appendix_a_highd: search result has the wrong dimension");
  if (n < 4 * d) throw DomainError("appendix_a_highd: n must be at least 4d");
  return std::make_shared<HighDimSemiRandom>(n, search.set);
}

HighDimBounds highd_bounds(int d, double eps) {
  double face_exp = (d - 1) * std::ldexp(1.0, d - 2);
  double box_exp = (d - 2) * std::ldexp(1.0, d - 1);
  HighDimBounds b{};
  b.single_integral = std::ldexp(eps, d - 1);
  b.single_moment = std::ldexp(eps, d - 2);
  b.pair_integral = std::ldexp(eps, 2 * d - 3);
  b.pair_moment = std::ldexp(eps, 2 * d - 4);
  b.face_integral = (d + 1) * std::exp2(d - 2 + face_exp) * eps;
  b.face_moment = (d + 1) * std::exp2(d - 3 + face_exp) * eps;
  b.box_integral = d * std::exp2(d + box_exp) * eps;
  b.box_moment = d * std::exp2(d - 1 + box_exp) * eps;
  b.box_union_integral = d * std::exp2(d + 1 + box_exp) * eps;
  b.box_union_moment = d * std::exp2(d + box_exp) * eps;
  return b;
}

std::vector<Subset> highd_face(int d) {
  if (d < 2) throw DomainError("highd_face: d must be at least 2");
  std::vector<Subset> out;
  for (auto u : standard_box(d - 1).members()) out.push_back(u.with(2 * d - 1));
  return out;
}

Subset consecutive_set(int d, int k) {
  if (d < 1 || k < 1) throw DomainError("consecutive_set: d and k must be positive");
  return Subset::interval(k, k + d - 1);
}

}  // namespace arraylab
