#include "brute_force.hpp"

#include "arraylab/boxes.hpp"
#include "arraylab/constructions.hpp"
#include "arraylab/errors.hpp"
#include "arraylab/models.hpp"
#include "arraylab/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace arraylab;

namespace {

Subset S(std::initializer_list<int> e) { return Subset::of(e); }

// Homomorphism density of the bipartite pattern (F edges present, G edges absent) into the graph.
Rational hom_density(const HypergraphSpec& g, int pattern_vertices, const std::vector<std::pair<int, int>>& F) {
  int V = g.vertices;
  std::vector<int> phi(static_cast<std::size_t>(pattern_vertices), 0);
  long hits = 0, total = 0;
  for (;;) {
    bool ok = true;
    for (auto [a, b] : F) {
      int x = phi[static_cast<std::size_t>(a)], y = phi[static_cast<std::size_t>(b)];
      if (x == y || !g.has_edge({x, y})) ok = false;
    }
    hits += ok;
    ++total;
    int j = 0;
    for (; j < pattern_vertices; ++j) {
      if (++phi[static_cast<std::size_t>(j)] < V) break;
      phi[static_cast<std::size_t>(j)] = 0;
    }
    if (j == pattern_vertices) break;
  }
  Rational r(hits, total);
  r.canonicalize();
  return r;
}

Rational abs_diff(const Rational& a, const Rational& b) { return abs(Rational(a - b)); }

}  // namespace

TEST_CASE("hypergraph sampling from complete and empty hypergraphs") {
  auto k4 = complete_hypergraph(4, 2);
  CHECK(k4.edge_count() == 6);
  auto m = from_hypergraph(k4, 5);
  CHECK(moment(*m, {S({1, 2})}) == Rational(3, 4));
  auto k5 = complete_hypergraph(5, 3);
  CHECK(moment(*from_hypergraph(k5, 4), {S({1, 2, 4})}) == Rational(12, 25));

  HypergraphSpec empty{4, 2, {}};
  auto e = from_hypergraph(empty, 5);
  CHECK(moment(*e, {S({1, 2})}) == 0);
  CHECK(moment(*e, standard_box(2).members()) == 0);
  CHECK_THROWS_AS(from_hypergraph(k4, 1), DomainError);
}

TEST_CASE("four-cycle density equals the box moment") {
  auto g = random_hypergraph(8, 2, 0.5, 17);
  auto m = from_hypergraph(g, 4);
  // Box(2) = {1,3},{2,3},{1,4},{2,4}: a four-cycle 1-3-2-4.
  Rational t = hom_density(g, 4, {{0, 2}, {1, 2}, {0, 3}, {1, 3}});
  CHECK(moment(*m, standard_box(2).members()) == t);
}

TEST_CASE("edge lists parse with 1-based vertices") {
  auto h = parse_edge_list("# triangle\n1 2\n2 3\n\n3 1  # closing edge\n", 2);
  CHECK(h.vertices == 3);
  CHECK(h.edge_count() == 3);
  CHECK(h.has_edge({0, 2}));
  auto wide = parse_edge_list("1 2\n", 2, 6);
  CHECK(wide.vertices == 6);
  CHECK_THROWS_AS(parse_edge_list("1 2 3\n", 2), DomainError);
  CHECK_THROWS_AS(parse_edge_list("1 x\n", 2), DomainError);
  CHECK_THROWS_AS(parse_edge_list("1 1\n", 2), DomainError);
  CHECK_THROWS_AS(parse_edge_list("1 7\n", 2, 5), DomainError);
  auto cliques = disjoint_cliques({3, 2});
  CHECK(cliques.vertices == 5);
  CHECK(cliques.edge_count() == 4);
  auto t = cliques.tuple_set();
  CHECK(t.symmetric());
  CHECK(t.popcount() == 8);
}

TEST_CASE("product and fixed-size arrays") {
  auto ones = product_array(std::vector<Rational>(5, Rational(1)), 2);
  Rng rng(2);
  for (auto v : ones->sample(rng)) CHECK(v == 1);
  CHECK(moment(*ones, DSubsetIndex(5, 2).all()) == 1);

  std::vector<Rational> p = {Rational(1, 3), Rational(1, 2), Rational(3, 4), Rational(1, 5), Rational(2, 3)};
  auto prod = product_array(p, 2);
  CHECK(moment(*prod, {S({1, 2}), S({2, 5})}) == p[0] * p[1] * p[4]);

  auto full = fixed_size_er(5, 2, 10);
  CHECK(moment(*full, DSubsetIndex(5, 2).all()) == 1);
  CHECK_THROWS_AS(fixed_size_er(5, 2, 11), DomainError);
}

TEST_CASE("two-dimensional counterexample has the claimed low-order moments") {
  auto m = appendix_a_2d(8);
  auto ents = DSubsetIndex(8, 2).all();
  for (std::size_t i = 0; i < ents.size(); ++i) {
    CHECK(moment(*m, {ents[i]}) == Rational(1, 2));
    for (std::size_t j = i + 1; j < ents.size(); ++j) CHECK(moment(*m, {ents[i], ents[j]}) == Rational(1, 4));
  }
  auto box = standard_box(2).members();
  for (std::size_t drop = 0; drop < box.size(); ++drop) {
    std::vector<Subset> part;
    for (std::size_t k = 0; k < box.size(); ++k)
      if (k != drop) part.push_back(box[k]);
    CHECK(moment(*m, part) == Rational(1, 8));
  }
  CHECK(moment(*m, box) == Rational(3, 32));
  CHECK_THROWS_AS(appendix_a_2d(3), DomainError);
}

TEST_CASE("two-dimensional counterexample matches latent enumeration at n = 6") {
  auto m = appendix_a_2d(6);
  Rng rng(41);
  auto ents = DSubsetIndex(6, 2).all();
  for (int trial = 0; trial < 40; ++trial) {
    EventQuery q;
    for (auto s : ents)
      if (rng.below(4) == 0) q.require(s, static_cast<Symbol>(rng.coin()));
    CHECK(m->probability(q) == brute::appendix_2d(6, q));
  }
}

TEST_CASE("sign pattern deviations") {
  Rng rng(3);
  auto res = random_symmetric_set(3, 8, 0.0, 5, 1, 2);
  CHECK(res.set.symmetric());
  CHECK(sign_pattern_deviation(res.set, SignPattern{}) == 0);
  Rational density(static_cast<long>(res.set.popcount()), 64);
  density.canonicalize();
  CHECK(sign_pattern_deviation(res.set, {{S({2, 5})}, {}}) == abs_diff(density, Rational(1, 2)));
  CHECK(sign_pattern_deviation(res.set, {{}, {S({1, 3})}}) == abs_diff(1 - density, Rational(1, 2)));

  // A pair sharing a vertex: brute force over V^3.
  auto& A = res.set;
  long hits = 0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) hits += A.at({a, b}) && !A.at({b, c});
  Rational f(hits, 512);
  f.canonicalize();
  CHECK(sign_pattern_deviation(A, {{S({1, 2})}, {S({2, 3})}}) == abs_diff(f, Rational(1, 4)));
}

TEST_CASE("designated family covers the configurations used by the high-dimensional claims") {
  auto fam = designated_pair_family(3, 2);
  CHECK(fam.d == 3);
  CHECK(fam.representatives.size() == fam.multiplicity.size());
  // Small pairs on C([6], 2): 1 + 30 + 420 labelled, plus configuration patterns.
  CHECK(fam.labelled_pairs() >= 451);
  bool has_empty = false, has_box = false;
  for (auto& p : fam.representatives) {
    if (p.F.empty() && p.G.empty()) has_empty = true;
    if (p.F.size() + p.G.size() == 12) has_box = true;
  }
  CHECK(has_empty);
  CHECK(has_box);
  auto bigger = designated_pair_family(3, 4);
  CHECK(bigger.labelled_pairs() > fam.labelled_pairs());
  CHECK(bigger.representatives.size() > fam.representatives.size());
}

TEST_CASE("symmetric set search is seeded and re-evaluates exactly") {
  auto a = random_symmetric_set(3, 16, 1e-9, 99, 2, 3);
  auto b = random_symmetric_set(3, 16, 1e-9, 99, 2, 3);
  CHECK(a.set.cells == b.set.cells);
  CHECK(a.achieved_exact == b.achieved_exact);
  CHECK(a.attempts_used == 2);
  CHECK_FALSE(a.met_target);
  CHECK(a.set.symmetric());
  auto again = evaluate_symmetric_set(3, a.set, 3);
  CHECK(again.achieved_exact == a.achieved_exact);
  CHECK(a.achieved_exact == sign_pattern_deviation(a.set, a.worst));

  auto easy = random_symmetric_set(3, 8, 1.0, 1, 5, 2);
  CHECK(easy.met_target);
  CHECK(easy.attempts_used == 1);
  CHECK_THROWS_AS(random_symmetric_set(3, 7, 0.1, 1, 1), DomainError);
  CHECK_THROWS_AS(random_symmetric_set(2, 8, 0.1, 1, 1), DomainError);
}

TEST_CASE("high-dimensional counterexample stays within the claimed bounds") {
  auto search = random_symmetric_set(3, 8, 0.0, 12, 3, 2);
  double eps = search.achieved_eps;
  auto model = appendix_a_highd(3, search, 12);
  auto bounds = highd_bounds(3, eps);
  auto m = [&](const std::vector<Subset>& fam) { return to_double(moment(*model, fam)); };

  CHECK(std::abs(m({consecutive_set(3, 1)}) - 0.5) <= bounds.single_moment + 1e-12);
  for (int k = 2; k <= 4; ++k)
    CHECK(std::abs(m({consecutive_set(3, 1), consecutive_set(3, k)}) - 0.25) <= bounds.pair_moment + 1e-12);
  auto face = highd_face(3);
  CHECK(face.size() == 4);
  CHECK(std::abs(m(face) - std::ldexp(1.0, -4)) <= bounds.face_moment + 1e-12);
  auto box = standard_box(3).members();
  CHECK(std::abs(m(box) - 1.5 * std::ldexp(1.0, -8)) <= bounds.box_moment + 1e-12);
  auto both = box;
  for (auto s : make_box({S({7, 8}), S({9, 10}), S({11, 12})}).members()) both.push_back(s);
  CHECK(std::abs(m(both) - 2.5 * std::ldexp(1.0, -16)) <= bounds.box_union_moment + 1e-12);

  CHECK(bounds.single_integral == doctest::Approx(4 * eps));
  CHECK(bounds.box_moment == doctest::Approx(3 * std::ldexp(1.0, 2 + 4) * eps));
  CHECK_THROWS_AS(appendix_a_highd(3, search, 11), DomainError);
}

TEST_CASE("high-dimensional model matches enumeration over labels") {
  auto search = random_symmetric_set(3, 4, 0.0, 8, 1, 1);
  auto model = appendix_a_highd(3, search, 12);
  HighDimSemiRandom small(5, search.set);
  Rng rng(6);
  auto ents = DSubsetIndex(5, 3).all();
  for (int trial = 0; trial < 20; ++trial) {
    EventQuery q;
    for (int k = 0; k < 3; ++k) q.require(ents[rng.below(ents.size())], 1);
    CHECK(small.probability(q) == brute::appendix_highd(5, search.set, q));
  }
  CHECK(model->d() == 3);
}
