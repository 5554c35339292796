#pragma once

#include "arraylab/constructions.hpp"
#include "arraylab/rational.hpp"
#include "arraylab/subset.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace arraylab {

/// Real function on Omega^d under the uniform measure; (w_1, ..., w_d) sits at sum w_j |Omega|^{j-1}.
struct KernelFunction {
  int d = 2;
  int omega = 2;
  std::vector<Rational> values;

  static KernelFunction constant(int d, int omega, const Rational& c);
  static KernelFunction from_function(int d, int omega, const std::function<Rational(const std::vector<int>&)>& f);
  std::uint64_t size() const;
  const Rational& at(const std::vector<int>& w) const;
  bool symmetric() const;
};

KernelFunction operator+(const KernelFunction& f, const KernelFunction& g);

/// Average over Omega^{2d} of prod_eps f(w_eps); exact and nonnegative.
Rational box_norm_power(const KernelFunction& f);
/// box_norm_power^{1/2^d}.
double box_norm(const KernelFunction& f);

/// Average of prod_eps f_eps(w_eps); fs[eps] with eps_j in bit j-1.
Rational gowers_inner_product(const std::vector<KernelFunction>& fs);
/// |<f_eps>| - prod ||f_eps||; nonpositive up to rounding.
double gcs_defect(const std::vector<KernelFunction>& fs);

/// 1_G - |G| / |V|^d over V^d.
KernelFunction centered_indicator(const HypergraphSpec& h);
double box_uniformity(const HypergraphSpec& h);

struct BoxUniformityAudit {
  double rho = 0;
  double theta = 0;  // one-sided box defect of the sampled array with S = {1}
  double part_i_bound = 0;  // 2^d rho
  double part_ii_bound = 0;  // 12 theta^{1/8^d}
  bool part_i = false;
  bool part_ii = false;
};

BoxUniformityAudit box_uniformity_audit(const HypergraphSpec& h, int n);

/// Fraction of maps [n] -> V sending every edge of F (d-subsets of [n]) to an ordered tuple in G.
Rational homomorphism_density(const std::vector<Subset>& F, int n, const HypergraphSpec& h);

inline constexpr int kMaxFamilyVertices = 7;
inline constexpr int kMaxPredicateVertices = 11;

/// Graphs on [n] are edge masks: bit r is the edge of colex rank r in C([n], 2).
int edge_count(int n);
int edge_rank(int i, int j);
Subset edge_at(int rank);
std::uint64_t graph_mask(const std::vector<Subset>& edges);
std::vector<Subset> graph_edges(std::uint64_t mask);

class GraphFamily {
 public:
  using Predicate = std::function<bool(std::uint64_t)>;

  static GraphFamily from_bits(int n, std::vector<std::uint64_t> words);
  static GraphFamily from_graphs(int n, const std::vector<std::uint64_t>& graphs);
  static GraphFamily from_predicate(int n, Predicate p, std::string name, std::string cost);

  int n() const { return n_; }
  bool explicit_bits() const { return !words_.empty() || !predicate_; }
  bool contains(std::uint64_t graph) const;
  std::uint64_t graphs() const { return std::uint64_t{1} << edge_count(n_); }
  const std::string& name() const { return name_; }
  const std::string& cost() const { return cost_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  /// Bitset form; evaluates the predicate on every graph.
  GraphFamily materialized() const;
  std::uint64_t popcount() const;
  /// Exact for bitsets; requires the predicate to be evaluated on every graph otherwise.
  Rational density() const;

  /// Little-endian bytes of the bitset, bit g of the stream is graph g.
  std::string to_bytes() const;
  static GraphFamily from_bytes(int n, const std::string& bytes);

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
  Predicate predicate_;
  std::string name_ = "bitset";
  std::string cost_ = "O(1) lookup";
};

/// Named properties: everything, empty, triangle, contains-K4, edge-parity, edge-count>=t, random:p.
GraphFamily builtin_family(const std::string& spec, int n, std::uint64_t seed = 0);
/// Graphs as edge-list blocks (1-based "i j" lines) separated by blank lines.
GraphFamily parse_graph_list(const std::string& text, int n);

struct FamilyGamma {
  Subset U;
  Rational exact = 0;
  double value = 0;
  double standard_error = 0;
  std::uint64_t samples = 0;
  std::string method;
};

struct SamplingOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
  bool force_sampling = false;
};

/// Probability over W on C([n],2) minus C(U,2) that W + {i,k}, W + {i,l}, W + {j,k}, W + {j,l} all lie in A.
/// Exact enumeration when the W-space fits the cap, seeded sampling otherwise.
FamilyGamma family_gamma(const GraphFamily& A, Subset U, const SamplingOptions& opt = {});

struct ThetaAudit {
  Rational mu = 0;
  Rational mu4 = 0;
  std::vector<FamilyGamma> gammas;  // over C([n], 4) in colex order
  std::vector<Rational> excess;
  Rational theta = 0;
  std::string method;
};

/// theta* = min { theta >= 0 : #{U : excess(U) > theta} <= theta C(n, 4) }.
Rational theta_star(std::vector<Rational> excess);
ThetaAudit theta_quasirandom_audit(const GraphFamily& A, int workers = 1);

struct SmashWitness {
  Subset K;
  std::uint64_t W = 0;
};

/// First (K, W) in (colex K, increasing W) order with W in A and W + e in A for every e in C(K, 2).
std::optional<SmashWitness> smash_search(const GraphFamily& A, int k, int workers = 1);

struct InvarianceCheck {
  bool invariant = true;
  std::uint64_t graph = 0;
  std::vector<int> permutation;  // image of 1..n
};

/// Closure under the transpositions (1 2), (1 3), ..., (n-1 n), which generate all permutations.
InvarianceCheck isomorphic_invariant_check(const GraphFamily& A);
std::uint64_t permute_graph(std::uint64_t graph, const std::vector<int>& perm);

nlohmann::json graph_json(std::uint64_t graph);
nlohmann::json family_gamma_json(const FamilyGamma& g);
nlohmann::json theta_audit_json(const ThetaAudit& a);
nlohmann::json smash_json(const std::optional<SmashWitness>& w);
nlohmann::json invariance_json(const InvarianceCheck& c);
nlohmann::json box_audit_json(const BoxUniformityAudit& a);

}  // namespace arraylab
