#pragma once

#include "arraylab/latent.hpp"
#include "arraylab/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace arraylab {

/// d-uniform hypergraph on vertices 0..V-1.
struct HypergraphSpec {
  int vertices = 0;
  int d = 2;
  std::vector<std::vector<int>> edges;  // sorted, distinct vertices

  /// Tuples (v_1, ..., v_d) of distinct vertices whose set is an edge.
  TupleTable tuple_set() const;
  std::uint64_t edge_count() const { return edges.size(); }
  /// Adds an edge (vertices in any order); duplicates are ignored.
  void add_edge(std::vector<int> e);
  bool has_edge(std::vector<int> e) const;
};

HypergraphSpec complete_hypergraph(int vertices, int d);
/// Each d-set is an edge independently with probability p.
HypergraphSpec random_hypergraph(int vertices, int d, double p, std::uint64_t seed);
/// Disjoint cliques of the given sizes (d = 2).
HypergraphSpec disjoint_cliques(const std::vector<int>& sizes);
/// Reads a whitespace-separated edge list with 1-based vertices, one edge per line; '#' starts a comment.
HypergraphSpec parse_edge_list(const std::string& text, int d, int vertices = 0);

ModelPtr from_hypergraph(const HypergraphSpec& h, int n);
ModelPtr mixture(std::vector<std::pair<Rational, ModelPtr>> components);
ModelPtr product_array(std::vector<Rational> p, int d);
ModelPtr fixed_size_er(int n, int d, std::uint64_t ones);
ModelPtr appendix_a_2d(int n);
ModelPtr iid_entries(int n, int d, std::vector<Rational> symbol_law);

/// One sign-pattern monomial prod_{u in F} 1_A(v_u) prod_{u in G} 1_{A^c}(v_u) over (d-1)-subsets of [2d].
struct SignPattern {
  std::vector<Subset> F;
  std::vector<Subset> G;
};

/// Pairs checked by random_symmetric_set, up to relabelling [2d]: every sign pattern consumed by the
/// single-set, chain, face and box estimates, plus all pairs with |F| + |G| <= small_size.
struct PairFamily {
  int d = 0;
  std::vector<SignPattern> representatives;
  std::vector<std::uint64_t> multiplicity;  // labelled pairs per representative
  std::uint64_t labelled_pairs() const;
};

PairFamily designated_pair_family(int d, int small_size = 4);

/// |integral of the monomial - 2^{-(|F|+|G|)}| for symmetric A within V^{d-1}.
Rational sign_pattern_deviation(const TupleTable& A, const SignPattern& pattern);

struct SymmetricSetSearchResult {
  int d = 0;
  int vertices = 0;
  TupleTable set;                 // symmetric, within V^{d-1}
  Rational achieved_exact;        // max deviation over the designated family
  double achieved_eps = 0;
  std::uint64_t checked_pairs = 0;
  std::uint64_t checked_patterns = 0;
  SignPattern worst;
  bool met_target = false;
  int attempts_used = 0;
  std::uint64_t seed = 0;
  int small_size = 4;
};

SymmetricSetSearchResult random_symmetric_set(int d, int vertices, double target_eps, std::uint64_t seed,
                                              int attempts, int small_size = 4);
/// Max deviation of A over the designated family; fills achieved/worst/checked fields.
SymmetricSetSearchResult evaluate_symmetric_set(int d, TupleTable A, int small_size = 4);

ModelPtr appendix_a_highd(int d, const SymmetricSetSearchResult& search, int n);

/// Deviation bounds implied by an achieved epsilon for the d-dimensional construction.
struct HighDimBounds {
  double single_integral;  // |int H - 1/2|
  double single_moment;    // |E X_s - 1/2|
  double pair_integral;    // |int H(v_s)H(v_t) - 1/4|
  double pair_moment;      // |E X_s X_t - 1/4|
  double face_integral;    // |int prod_C H - 2^{-|C|}|
  double face_moment;      // |E prod_C X - 2^{-|C|}|
  double box_integral;     // |int prod_Box H - 2 * 2^{-2^d}|
  double box_moment;       // |E prod_Box X - (3/2) 2^{-2^d}|
  double box_union_integral;  // |int prod_{Box + B} H - 4 * 2^{-2^{d+1}}|, B a box beyond [2d]
  double box_union_moment;    // |E prod_{Box + B} X - (5/2) 2^{-2^{d+1}}|
};
HighDimBounds highd_bounds(int d, double eps);

/// {u + {2d-1} : u in Box(d-1)}, a (d-1)-face on [2d-1].
std::vector<Subset> highd_face(int d);
/// t_k = {k, ..., k+d-1}.
Subset consecutive_set(int d, int k);

}  // namespace arraylab
