#include "arraylab/quasirandom.hpp"

#include "arraylab/defects.hpp"
#include "arraylab/errors.hpp"
#include "arraylab/latent.hpp"
#include "arraylab/parallel.hpp"
#include "arraylab/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace arraylab {

using nlohmann::json;

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_shape(int d, int omega) {
  if (d < 1) throw DomainError("kernel dimension must be positive");
  if (omega < 1) throw DomainError("kernel label set must be nonempty");
  if (std::log2(static_cast<double>(omega)) * d > 40) throw CapacityError("kernel table", std::pow(omega, d), enumeration_cap());
}

// Base offsets of the 2^{d-1} points w_eps' over the first d-1 coordinates, given digit pairs.
std::vector<std::uint64_t> corner_offsets(int d, int omega, const std::vector<int>& lo, const std::vector<int>& hi) {
  std::vector<std::uint64_t> out(std::size_t{1} << (d - 1), 0);
  for (std::size_t eps = 0; eps < out.size(); ++eps) {
    std::uint64_t idx = 0, stride = 1;
    for (int j = 0; j < d - 1; ++j) {
      idx += stride * static_cast<std::uint64_t>((eps >> j) & 1 ? hi[static_cast<std::size_t>(j)] : lo[static_cast<std::size_t>(j)]);
      stride *= static_cast<std::uint64_t>(omega);
    }
    out[eps] = idx;
  }
  return out;
}

// Calls fn(lo, hi) over all pairs of (d-1)-tuples.
template <class Fn>
void for_each_pair(int d, int omega, Fn&& fn) {
  std::vector<int> digits(static_cast<std::size_t>(2 * (d - 1)), 0);
  std::vector<int> lo(static_cast<std::size_t>(d - 1)), hi(static_cast<std::size_t>(d - 1));
  while (true) {
    for (int j = 0; j < d - 1; ++j) {
      lo[static_cast<std::size_t>(j)] = digits[static_cast<std::size_t>(2 * j)];
      hi[static_cast<std::size_t>(j)] = digits[static_cast<std::size_t>(2 * j + 1)];
    }
    fn(lo, hi);
    std::size_t p = 0;
    while (p < digits.size() && ++digits[p] == omega) digits[p++] = 0;
    if (p == digits.size()) return;
  }
}

}  // namespace

KernelFunction KernelFunction::constant(int d, int omega, const Rational& c) {
  check_shape(d, omega);
  KernelFunction f;
  f.d = d;
  f.omega = omega;
  f.values.assign(ipow(static_cast<std::uint64_t>(omega), d), c);
  return f;
}

KernelFunction KernelFunction::from_function(int d, int omega, const std::function<Rational(const std::vector<int>&)>& fn) {
  auto f = constant(d, omega, 0);
  std::vector<int> w(static_cast<std::size_t>(d), 0);
  for (std::uint64_t i = 0; i < f.values.size(); ++i) {
    std::uint64_t r = i;
    for (int j = 0; j < d; ++j) {
      w[static_cast<std::size_t>(j)] = static_cast<int>(r % static_cast<std::uint64_t>(omega));
      r /= static_cast<std::uint64_t>(omega);
    }
    f.values[i] = fn(w);
  }
  return f;
}

std::uint64_t KernelFunction::size() const { return values.size(); }

const Rational& KernelFunction::at(const std::vector<int>& w) const {
  if (static_cast<int>(w.size()) != d) throw DomainError("kernel point has the wrong dimension");
  std::uint64_t idx = 0, stride = 1;
  for (int v : w) {
    if (v < 0 || v >= omega) throw DomainError("kernel label out of range");
    idx += stride * static_cast<std::uint64_t>(v);
    stride *= static_cast<std::uint64_t>(omega);
  }
  return values.at(idx);
}

bool KernelFunction::symmetric() const {
  std::uint64_t stride = 1;
  for (int j = 0; j + 1 < d; ++j) {
    std::uint64_t next = stride * static_cast<std::uint64_t>(omega);
    for (std::uint64_t i = 0; i < values.size(); ++i) {
      std::uint64_t a = (i / stride) % static_cast<std::uint64_t>(omega);
      std::uint64_t b = (i / next) % static_cast<std::uint64_t>(omega);
      std::uint64_t swapped = i - a * stride - b * next + b * stride + a * next;
      if (values[i] != values[swapped]) return false;
    }
    stride = next;
  }
  return true;
}

KernelFunction operator+(const KernelFunction& f, const KernelFunction& g) {
  if (f.d != g.d || f.omega != g.omega || f.values.size() != g.values.size()) throw DomainError("kernel shape mismatch");
  KernelFunction h = f;
  for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] += g.values[i];
  return h;
}

Rational gowers_inner_product(const std::vector<KernelFunction>& fs) {
  if (fs.empty()) throw DomainError("empty kernel family");
  int d = fs[0].d, omega = fs[0].omega;
  if (fs.size() != std::size_t{1} << d) throw DomainError("need 2^d kernels");
  for (auto& f : fs)
    if (f.d != d || f.omega != omega || f.values.size() != fs[0].values.size()) throw DomainError("kernel shape mismatch");
  require_capacity(std::pow(static_cast<long double>(omega), 2 * d), "Gowers inner product");
  std::uint64_t top = ipow(static_cast<std::uint64_t>(omega), d - 1);
  std::size_t half = std::size_t{1} << (d - 1);
  Rational total = 0;
  for_each_pair(d, omega, [&](const std::vector<int>& lo, const std::vector<int>& hi) {
    auto base = corner_offsets(d, omega, lo, hi);
    Rational side[2] = {0, 0};
    for (int last = 0; last < 2; ++last)
      for (int y = 0; y < omega; ++y) {
        Rational prod = 1;
        for (std::size_t e = 0; e < half && prod != 0; ++e)
          prod *= fs[e + (static_cast<std::size_t>(last) << (d - 1))].values[base[e] + top * static_cast<std::uint64_t>(y)];
        side[last] += prod;
      }
    total += side[0] * side[1];
  });
  return total / Rational(Integer(ipow(static_cast<std::uint64_t>(omega), 2 * d)));
}

Rational box_norm_power(const KernelFunction& f) {
  check_shape(f.d, f.omega);
  require_capacity(std::pow(static_cast<long double>(f.omega), 2 * f.d), "box norm");
  int d = f.d, omega = f.omega;
  std::uint64_t top = ipow(static_cast<std::uint64_t>(omega), d - 1);
  std::size_t half = std::size_t{1} << (d - 1);
  Rational total = 0;
  for_each_pair(d, omega, [&](const std::vector<int>& lo, const std::vector<int>& hi) {
    auto base = corner_offsets(d, omega, lo, hi);
    Rational s = 0;
    for (int y = 0; y < omega; ++y) {
      Rational prod = 1;
      for (std::size_t e = 0; e < half && prod != 0; ++e) prod *= f.values[base[e] + top * static_cast<std::uint64_t>(y)];
      s += prod;
    }
    total += s * s;
  });
  return total / Rational(Integer(ipow(static_cast<std::uint64_t>(omega), 2 * d)));
}

double box_norm(const KernelFunction& f) {
  auto p = box_norm_power(f);
  if (p < 0) throw DomainError("negative box norm power");
  return std::pow(to_double(p), 1.0 / std::ldexp(1.0, f.d));
}

double gcs_defect(const std::vector<KernelFunction>& fs) {
  double lhs = std::fabs(to_double(gowers_inner_product(fs)));
  double rhs = 1;
  for (auto& f : fs) rhs *= box_norm(f);
  return lhs - rhs;
}

KernelFunction centered_indicator(const HypergraphSpec& h) {
  check_shape(h.d, h.vertices);
  auto table = h.tuple_set();
  Rational density(Integer(table.popcount()), Integer(ipow(static_cast<std::uint64_t>(h.vertices), h.d)));
  density.canonicalize();
  KernelFunction f;
  f.d = h.d;
  f.omega = h.vertices;
  f.values.reserve(table.cells.size());
  for (auto c : table.cells) f.values.push_back(Rational(c ? 1 : 0) - density);
  return f;
}

double box_uniformity(const HypergraphSpec& h) { return box_norm(centered_indicator(h)); }

BoxUniformityAudit box_uniformity_audit(const HypergraphSpec& h, int n) {
  if (n < 2 * h.d) throw DomainError("box audit needs n >= 2d");
  BoxUniformityAudit a;
  a.rho = box_uniformity(h);
  auto model = from_hypergraph(h, n);
  a.theta = std::max(0.0, box_independence_defect(*model, {1}, BoxMode::one_sided).value_double());
  a.part_i_bound = std::ldexp(1.0, h.d) * a.rho;
  a.part_ii_bound = 12 * std::pow(a.theta, 1 / std::pow(8.0, h.d));
  a.part_i = a.theta <= a.part_i_bound + 1e-12;
  a.part_ii = a.rho <= a.part_ii_bound + 1e-12;
  return a;
}

Rational homomorphism_density(const std::vector<Subset>& F, int n, const HypergraphSpec& h) {
  auto table = h.tuple_set();
  Subset ground = support_of(F);
  if (!ground.empty() && ground.max() > n) throw DomainError("pattern exceeds [n]");
  std::vector<TupleConstraint> cons;
  for (auto s : F) {
    if (s.size() != h.d) throw DomainError("pattern edges must have size d");
    TupleConstraint c;
    c.table = &table;
    for (int v : compress(s, ground).elements()) c.vars.push_back(v - 1);
    cons.push_back(std::move(c));
  }
  return assignment_fraction(h.vertices, ground.size(), cons);
}

int edge_count(int n) { return n * (n - 1) / 2; }

int edge_rank(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 1 || i == j) throw DomainError("edge needs two distinct positive vertices");
  return (j - 1) * (j - 2) / 2 + (i - 1);
}

Subset edge_at(int rank) {
  if (rank < 0) throw DomainError("negative edge rank");
  int j = 2;
  while ((j) * (j - 1) / 2 <= rank) ++j;
  return Subset::of({rank - (j - 1) * (j - 2) / 2 + 1, j});
}

std::uint64_t graph_mask(const std::vector<Subset>& edges) {
  std::uint64_t m = 0;
  for (auto e : edges) {
    if (e.size() != 2) throw DomainError("graph edges must have two vertices");
    int r = edge_rank(e.min(), e.max());
    if (r >= 64) throw DomainError("graph exceeds 64 edge slots");
    m |= std::uint64_t{1} << r;
  }
  return m;
}

std::vector<Subset> graph_edges(std::uint64_t mask) {
  std::vector<Subset> out;
  for (; mask; mask &= mask - 1) out.push_back(edge_at(std::countr_zero(mask)));
  return out;
}

namespace {

void check_family_size(int n, int limit) {
  if (n < 1) throw DomainError("family needs at least one vertex");
  if (n > limit) throw CapacityError("graph family on " + std::to_string(n) + " vertices", std::ldexp(1.0L, edge_count(n)), enumeration_cap());
}

std::size_t word_count(int n) { return std::max<std::size_t>(1, (std::size_t{1} << edge_count(n)) / 64); }

std::uint64_t full_mask(int n) {
  int N = edge_count(n);
  return N == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << N) - 1;
}

std::uint64_t clique_mask(Subset K) {
  std::uint64_t m = 0;
  auto v = K.elements();
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) m |= std::uint64_t{1} << edge_rank(v[a], v[b]);
  return m;
}

GraphFamily require_bits(const GraphFamily& A) { return A.explicit_bits() ? A : A.materialized(); }

std::vector<std::uint64_t> adjacency(int n, std::uint64_t g) {
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
  for (; g; g &= g - 1) {
    auto e = edge_at(std::countr_zero(g));
    adj[static_cast<std::size_t>(e.min() - 1)] |= std::uint64_t{1} << (e.max() - 1);
    adj[static_cast<std::size_t>(e.max() - 1)] |= std::uint64_t{1} << (e.min() - 1);
  }
  return adj;
}

bool has_triangle(int n, std::uint64_t g) {
  auto adj = adjacency(n, g);
  for (int i = 0; i < n; ++i)
    for (std::uint64_t nb = adj[static_cast<std::size_t>(i)] >> (i + 1); nb; nb &= nb - 1) {
      int j = i + 1 + std::countr_zero(nb);
      if (adj[static_cast<std::size_t>(i)] & adj[static_cast<std::size_t>(j)]) return true;
    }
  return false;
}

bool has_k4(int n, std::uint64_t g) {
  auto adj = adjacency(n, g);
  for (int i = 0; i < n; ++i)
    for (std::uint64_t nb = adj[static_cast<std::size_t>(i)] >> (i + 1); nb; nb &= nb - 1) {
      int j = i + 1 + std::countr_zero(nb);
      std::uint64_t common = adj[static_cast<std::size_t>(i)] & adj[static_cast<std::size_t>(j)];
      for (std::uint64_t c = common; c; c &= c - 1)
        if (adj[static_cast<std::size_t>(std::countr_zero(c))] & common) return true;
    }
  return false;
}

}  // namespace

GraphFamily GraphFamily::from_bits(int n, std::vector<std::uint64_t> words) {
  check_family_size(n, kMaxFamilyVertices);
  require_capacity(std::ldexp(1.0L, edge_count(n)), "graph family bitset");
  if (words.size() != word_count(n)) throw DomainError("bitset length must be 2^C(n,2) bits");
  if (edge_count(n) < 6) words[0] &= (std::uint64_t{1} << (std::uint64_t{1} << edge_count(n))) - 1;
  GraphFamily f;
  f.n_ = n;
  f.words_ = std::move(words);
  return f;
}

GraphFamily GraphFamily::from_graphs(int n, const std::vector<std::uint64_t>& graphs) {
  check_family_size(n, kMaxFamilyVertices);
  std::vector<std::uint64_t> words(word_count(n), 0);
  for (auto g : graphs) {
    if (g & ~full_mask(n)) throw DomainError("graph has an edge outside C([n], 2)");
    words[g / 64] |= std::uint64_t{1} << (g % 64);
  }
  return from_bits(n, std::move(words));
}

GraphFamily GraphFamily::from_predicate(int n, Predicate p, std::string name, std::string cost) {
  check_family_size(n, kMaxPredicateVertices);
  if (!p) throw DomainError("missing predicate");
  GraphFamily f;
  f.n_ = n;
  f.predicate_ = std::move(p);
  f.name_ = std::move(name);
  f.cost_ = std::move(cost);
  return f;
}

bool GraphFamily::contains(std::uint64_t graph) const {
  if (predicate_ && words_.empty()) return predicate_(graph);
  return (words_[graph / 64] >> (graph % 64)) & 1;
}

GraphFamily GraphFamily::materialized() const {
  if (explicit_bits()) return *this;
  check_family_size(n_, kMaxFamilyVertices);
  require_capacity(std::ldexp(1.0L, edge_count(n_)), "materializing " + name_);
  std::vector<std::uint64_t> words(word_count(n_), 0);
  for (std::uint64_t g = 0; g < graphs(); ++g)
    if (predicate_(g)) words[g / 64] |= std::uint64_t{1} << (g % 64);
  auto f = from_bits(n_, std::move(words));
  f.name_ = name_;
  return f;
}

std::uint64_t GraphFamily::popcount() const {
  if (!explicit_bits()) {
    require_capacity(std::ldexp(1.0L, edge_count(n_)), "counting " + name_);
    std::uint64_t c = 0;
    for (std::uint64_t g = 0; g < graphs(); ++g) c += predicate_(g) ? 1 : 0;
    return c;
  }
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

Rational GraphFamily::density() const {
  Rational r{Integer(popcount()), Integer(graphs())};
  r.canonicalize();
  return r;
}

std::string GraphFamily::to_bytes() const {
  auto bits = require_bits(*this);
  std::uint64_t nbytes = (graphs() + 7) / 8;
  std::string out(nbytes, '\0');
  for (std::uint64_t b = 0; b < nbytes; ++b)
    out[b] = static_cast<char>((bits.words_[b / 8] >> (8 * (b % 8))) & 0xff);
  return out;
}

GraphFamily GraphFamily::from_bytes(int n, const std::string& bytes) {
  check_family_size(n, kMaxFamilyVertices);
  std::uint64_t total = std::uint64_t{1} << edge_count(n);
  if (bytes.size() != (total + 7) / 8)
    throw DomainError("bitset dump for n = " + std::to_string(n) + " must have " + std::to_string((total + 7) / 8) + " bytes");
  std::vector<std::uint64_t> words(word_count(n), 0);
  for (std::size_t b = 0; b < bytes.size(); ++b)
    words[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[b])) << (8 * (b % 8));
  if (total < 8 && (words[0] >> total) != 0) throw DomainError("bitset dump has bits beyond 2^C(n,2)");
  return from_bits(n, std::move(words));
}

GraphFamily builtin_family(const std::string& spec, int n, std::uint64_t seed) {
  check_family_size(n, kMaxPredicateVertices);
  const std::string cost = "O(C(n,2)) per graph";
  if (spec == "everything") return GraphFamily::from_predicate(n, [](std::uint64_t) { return true; }, spec, "O(1)");
  if (spec == "empty") return GraphFamily::from_predicate(n, [](std::uint64_t) { return false; }, spec, "O(1)");
  if (spec == "triangle") return GraphFamily::from_predicate(n, [n](std::uint64_t g) { return has_triangle(n, g); }, spec, "O(n^3) per graph");
  if (spec == "contains-K4") return GraphFamily::from_predicate(n, [n](std::uint64_t g) { return has_k4(n, g); }, spec, "O(n^4) per graph");
  if (spec == "edge-parity")
    return GraphFamily::from_predicate(n, [](std::uint64_t g) { return std::popcount(g) % 2 == 0; }, spec, "O(1)");
  const std::string ec = "edge-count>=";
  if (spec.rfind(ec, 0) == 0) {
    int t = 0;
    try {
      std::size_t used = 0;
      t = std::stoi(spec.substr(ec.size()), &used);
      if (used != spec.size() - ec.size()) throw DomainError("");
    } catch (const std::exception&) {
      throw DomainError("bad edge-count threshold in '" + spec + "'");
    }
    return GraphFamily::from_predicate(n, [t](std::uint64_t g) { return std::popcount(g) >= t; }, spec, "O(1)");
  }
  if (spec.rfind("random:", 0) == 0) {
    double p = to_double(parse_rational(spec.substr(7)));
    if (!(p >= 0 && p <= 1)) throw DomainError("random family density must lie in [0, 1]");
    check_family_size(n, kMaxFamilyVertices);
    Rng rng(seed);
    std::vector<std::uint64_t> members;
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << edge_count(n)); ++g)
      if (rng.bernoulli(p)) members.push_back(g);
    return GraphFamily::from_graphs(n, members);
  }
  throw DomainError("unknown family '" + spec + "'");
}

GraphFamily parse_graph_list(const std::string& text, int n) {
  std::istringstream in(text);
  std::string line, block;
  std::vector<std::uint64_t> graphs;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    auto h = parse_edge_list(block, 2, n);
    std::vector<Subset> edges;
    for (auto& e : h.edges) edges.push_back(Subset::of({e[0] + 1, e[1] + 1}));
    graphs.push_back(graph_mask(edges));
    block.clear();
    open = false;
  };
  while (std::getline(in, line)) {
    std::string body = line.substr(0, line.find('#'));
    bool blank = body.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) {
      if (line.find('#') == std::string::npos) flush();
      continue;
    }
    if (body.find("empty") != std::string::npos) {
      open = true;
      continue;
    }
    block += body + "\n";
    open = true;
  }
  flush();
  return GraphFamily::from_graphs(n, graphs);
}

FamilyGamma family_gamma(const GraphFamily& A, Subset U, const SamplingOptions& opt) {
  int n = A.n();
  if (n < 4) throw DomainError("family_gamma needs n >= 4");
  if (U.size() != 4 || U.max() > n) throw DomainError("U must be a 4-subset of [n]");
  auto u = U.elements();
  std::uint64_t e[4] = {std::uint64_t{1} << edge_rank(u[0], u[2]), std::uint64_t{1} << edge_rank(u[0], u[3]),
                        std::uint64_t{1} << edge_rank(u[1], u[2]), std::uint64_t{1} << edge_rank(u[1], u[3])};
  std::uint64_t free = full_mask(n) & ~clique_mask(U);
  auto hit = [&](std::uint64_t w) {
    for (auto x : e)
      if (!A.contains(w | x)) return false;
    return true;
  };
  FamilyGamma out;
  out.U = U;
  int free_bits = std::popcount(free);
  long double space = std::ldexp(1.0L, free_bits);
  if (!opt.force_sampling && (A.explicit_bits() || space <= static_cast<long double>(enumeration_cap()))) {
    require_capacity(space, "family_gamma W-space");
    std::uint64_t count = 0, w = 0;
    do {
      count += hit(w) ? 1 : 0;
      w = (w - free) & free;
    } while (w != 0);
    out.exact = Rational(Integer(count), Integer(std::uint64_t{1} << free_bits));
    out.exact.canonicalize();
    out.value = to_double(out.exact);
    out.samples = std::uint64_t{1} << free_bits;
    out.method = "exact-enumeration";
    return out;
  }
  if (opt.samples == 0) throw DomainError("sampling needs at least one sample");
  Rng rng(Rng::derive(opt.seed, U.bits()));
  std::uint64_t count = 0;
  for (std::uint64_t s = 0; s < opt.samples; ++s) count += hit(rng.next() & free) ? 1 : 0;
  out.value = static_cast<double>(count) / static_cast<double>(opt.samples);
  out.exact = rational_from_double(out.value);
  out.standard_error = std::sqrt(out.value * (1 - out.value) / static_cast<double>(opt.samples));
  out.samples = opt.samples;
  out.method = "monte-carlo";
  return out;
}

Rational theta_star(std::vector<Rational> excess) {
  if (excess.empty()) return 0;
  std::sort(excess.begin(), excess.end(), [](const Rational& a, const Rational& b) { return a > b; });
  auto M = static_cast<long>(excess.size());
  Rational best = 1;
  for (long t = 0; t < M; ++t) {
    Rational frac(t, M);
    frac.canonicalize();
    Rational cand = std::max({excess[static_cast<std::size_t>(t)], frac, Rational(0)});
    if (cand < best) best = cand;
  }
  return best;
}

ThetaAudit theta_quasirandom_audit(const GraphFamily& A, int workers) {
  int n = A.n();
  if (n < 4) throw DomainError("theta audit needs n >= 4");
  ThetaAudit a;
  bool exact = A.explicit_bits() || std::ldexp(1.0L, edge_count(n)) <= static_cast<long double>(enumeration_cap());
  SamplingOptions opt;
  if (exact) {
    a.mu = A.density();
    a.method = "exact-enumeration";
  } else {
    Rng rng(Rng::derive(opt.seed, 0));
    std::uint64_t count = 0;
    for (std::uint64_t s = 0; s < opt.samples; ++s) count += A.contains(rng.next() & full_mask(n)) ? 1 : 0;
    a.mu = rational_from_double(static_cast<double>(count) / static_cast<double>(opt.samples));
    a.method = "monte-carlo";
    opt.force_sampling = true;
  }
  a.mu4 = a.mu * a.mu * a.mu * a.mu;
  auto Us = k_subsets(Subset::first(n), 4);
  a.gammas.resize(Us.size());
  parallel_for(Us.size(), workers, [&](std::uint64_t i) { a.gammas[i] = family_gamma(A, Us[i], opt); });
  for (auto& g : a.gammas) {
    if (g.method != a.method) throw DomainError("theta audit mixed exact and sampled values");
    a.excess.push_back(g.exact - a.mu4);
  }
  a.theta = theta_star(a.excess);
  return a;
}

std::optional<SmashWitness> smash_search(const GraphFamily& family, int k, int workers) {
  auto A = require_bits(family);
  int n = A.n();
  if (k < 2 || k > n) throw DomainError("smash_search needs 2 <= k <= n");
  auto Ks = k_subsets(Subset::first(n), k);
  auto first_w = [&](Subset K) -> std::optional<std::uint64_t> {
    std::uint64_t inside = clique_mask(K);
    std::uint64_t free = full_mask(n) & ~inside;
    std::vector<std::uint64_t> ext;
    for (std::uint64_t m = inside; m; m &= m - 1) ext.push_back(m & -m);
    std::uint64_t w = 0;
    do {
      if (A.contains(w) && std::all_of(ext.begin(), ext.end(), [&](std::uint64_t x) { return A.contains(w | x); }))
        return w;
      w = (w - free) & free;
    } while (w != 0);
    return std::nullopt;
  };
  require_capacity(static_cast<long double>(Ks.size()) * std::ldexp(1.0L, edge_count(n)), "smash search");
  if (workers <= 1) {
    for (auto K : Ks)
      if (auto w = first_w(K)) return SmashWitness{K, *w};
    return std::nullopt;
  }
  std::vector<std::optional<std::uint64_t>> found(Ks.size());
  parallel_for(Ks.size(), workers, [&](std::uint64_t i) { found[i] = first_w(Ks[i]); });
  for (std::size_t i = 0; i < Ks.size(); ++i)
    if (found[i]) return SmashWitness{Ks[i], *found[i]};
  return std::nullopt;
}

namespace {

std::vector<int> edge_image(int n, const std::vector<int>& perm) {
  std::vector<int> img(static_cast<std::size_t>(edge_count(n)));
  for (int r = 0; r < edge_count(n); ++r) {
    auto e = edge_at(r);
    img[static_cast<std::size_t>(r)] = edge_rank(perm[static_cast<std::size_t>(e.min() - 1)], perm[static_cast<std::size_t>(e.max() - 1)]);
  }
  return img;
}

std::uint64_t apply_image(std::uint64_t g, const std::vector<int>& img) {
  std::uint64_t out = 0;
  for (; g; g &= g - 1) out |= std::uint64_t{1} << img[static_cast<std::size_t>(std::countr_zero(g))];
  return out;
}

}  // namespace

std::uint64_t permute_graph(std::uint64_t graph, const std::vector<int>& perm) {
  int n = static_cast<int>(perm.size());
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[static_cast<std::size_t>(i)] != i + 1) throw DomainError("not a permutation of [n]");
  if (graph & ~full_mask(n)) throw DomainError("graph has an edge outside C([n], 2)");
  return apply_image(graph, edge_image(n, perm));
}

InvarianceCheck isomorphic_invariant_check(const GraphFamily& family) {
  auto A = require_bits(family);
  int n = A.n();
  InvarianceCheck c;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 1);
      std::swap(perm[static_cast<std::size_t>(a - 1)], perm[static_cast<std::size_t>(b - 1)]);
      auto img = edge_image(n, perm);
      auto& words = A.words();
      for (std::size_t wi = 0; wi < words.size(); ++wi)
        for (std::uint64_t w = words[wi]; w; w &= w - 1) {
          std::uint64_t g = wi * 64 + static_cast<std::uint64_t>(std::countr_zero(w));
          if (!A.contains(apply_image(g, img))) {
            c.invariant = false;
            c.graph = g;
            c.permutation = perm;
            return c;
          }
        }
    }
  return c;
}

json graph_json(std::uint64_t graph) {
  json edges = json::array();
  for (auto e : graph_edges(graph)) edges.push_back(e.elements());
  return {{"mask", graph}, {"edges", edges}};
}

json family_gamma_json(const FamilyGamma& g) {
  json j = {{"U", g.U.elements()}, {"value", g.value}, {"method", g.method}, {"samples", g.samples}};
  if (g.method == "exact-enumeration")
    j["exact"] = to_string(g.exact);
  else
    j["standard_error"] = g.standard_error;
  return j;
}

json theta_audit_json(const ThetaAudit& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.gammas.size(); ++i) {
    auto row = family_gamma_json(a.gammas[i]);
    row["excess"] = to_string(a.excess[i]);
    row["excess_double"] = to_double(a.excess[i]);
    rows.push_back(row);
  }
  return {{"mu", to_string(a.mu)},         {"mu_double", to_double(a.mu)},     {"mu4", to_string(a.mu4)},
          {"theta", to_string(a.theta)},   {"theta_double", to_double(a.theta)}, {"method", a.method},
          {"per_U", rows}};
}

json smash_json(const std::optional<SmashWitness>& w) {
  if (!w) return {{"found", false}, {"method", "exhaustive-scan"}};
  return {{"found", true}, {"method", "exhaustive-scan"}, {"K", w->K.elements()}, {"W", graph_json(w->W)}};
}

json invariance_json(const InvarianceCheck& c) {
  json j = {{"invariant", c.invariant}, {"method", "transposition-scan"}};
  if (!c.invariant) {
    j["graph"] = graph_json(c.graph);
    j["permutation"] = c.permutation;
  }
  return j;
}

json box_audit_json(const BoxUniformityAudit& a) {
  return {{"rho", a.rho},
          {"theta", a.theta},
          {"part_i_bound", a.part_i_bound},
          {"part_ii_bound", a.part_ii_bound},
          {"part_i", a.part_i},
          {"part_ii", a.part_ii},
          {"method", "exact-enumeration"}};
}

}  // namespace arraylab
