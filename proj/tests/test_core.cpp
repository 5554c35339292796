#include "brute_force.hpp"

#include "arraylab/boxes.hpp"
#include "arraylab/constructions.hpp"
#include "arraylab/errors.hpp"
#include "arraylab/models.hpp"
#include "arraylab/random.hpp"
#include "arraylab/slicing.hpp"

#include <doctest.h>

#include <set>

using namespace arraylab;

namespace {

Subset S(std::initializer_list<int> e) { return Subset::of(e); }

Rational Q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

EventQuery random_query(const ArrayModel& m, Rng& rng, int max_keys) {
  auto ents = DSubsetIndex(m.n(), m.d()).all();
  int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_keys)));
  EventQuery q;
  std::set<Subset> used;
  for (int i = 0; i < k; ++i) {
    Subset s = ents[rng.below(ents.size())];
    if (!used.insert(s).second) continue;
    q.require(s, static_cast<Symbol>(rng.below(static_cast<std::uint64_t>(m.alphabet_size()))));
  }
  return q;
}

TupleTable symmetric_random(int V, int arity, Rng& rng) {
  TupleTable A = TupleTable::empty(V, arity);
  for (auto& c : A.cells) c = rng.coin() ? 1 : 0;
  A.close_symmetric();
  return A;
}

std::vector<Rational> random_law(std::size_t size, Rng& rng) {
  std::vector<Rational> w(size);
  Rational total = 0;
  for (auto& x : w) {
    x = Rational(static_cast<long>(rng.below(5)));
    total += x;
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

TEST_CASE("subsets enumerate in colex order with consistent ranks") {
  DSubsetIndex idx(6, 3);
  auto all = idx.all();
  CHECK(all.size() == 20);
  CHECK(all == brute::entries(6, 3));
  for (std::uint64_t r = 0; r < idx.size(); ++r) CHECK(idx.rank(idx.unrank(r)) == r);
  CHECK(binomial(10, 3) == 120);
  CHECK(relabel(S({2, 5}), S({2, 3, 5}), S({1, 4, 6})) == S({1, 6}));
  CHECK(compress(S({3, 7}), S({1, 3, 5, 7})) == S({2, 4}));
  CHECK(expand(S({2, 4}), S({1, 3, 5, 7})) == S({3, 7}));
}

TEST_CASE("slicing groups a family by maxima") {
  auto sp = slicing({S({1, 3}), S({1, 6}), S({2, 3}), S({2, 5}), S({4, 5})});
  CHECK(sp.r == std::vector<int>{3, 5, 6});
  CHECK(sp.profile == std::vector<int>{2, 2, 1});

  auto single = slicing({S({1, 2})});
  CHECK(single.u() == 1);
  CHECK(single.r == std::vector<int>{2});
  CHECK(single.profile == std::vector<int>{1});

  auto full = slicing(brute::entries(4, 2));
  CHECK(full.r == std::vector<int>{2, 3, 4});
  CHECK(full.profile == std::vector<int>{1, 2, 3});

  CHECK_THROWS_AS(slicing({}), DomainError);
  CHECK_THROWS_AS(slicing({S({1, 2}), S({1, 2, 3})}), DomainError);
}

TEST_CASE("slicing round-trips on random families") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 3 + static_cast<int>(rng.below(6));
    int d = 1 + static_cast<int>(rng.below(3));
    auto ents = DSubsetIndex(n, d).all();
    std::vector<Subset> fam;
    for (auto s : ents)
      if (rng.coin()) fam.push_back(s);
    if (fam.empty()) fam.push_back(ents.front());
    auto back = reconstruct(slicing(fam));
    CHECK(back == fam);
  }
}

namespace {

// Ordered selections of d disjoint parts of sizes in {1,2}, increasing, by brute force over masks.
int count_boxes(int n, int d, bool face) {
  std::set<std::vector<std::uint64_t>> seen;
  std::function<void(int, std::uint64_t, std::vector<std::uint64_t>&, int)> rec =
      [&](int lo, std::uint64_t used, std::vector<std::uint64_t>& parts, int singles) {
        if (static_cast<int>(parts.size()) == d) {
          if (singles == (face ? 1 : 0)) seen.insert(parts);
          return;
        }
        for (int a = lo; a <= n; ++a) {
          std::uint64_t one = std::uint64_t{1} << (a - 1);
          parts.push_back(one);
          rec(a + 1, used | one, parts, singles + 1);
          parts.pop_back();
          for (int b = a + 1; b <= n; ++b) {
            std::uint64_t two = one | (std::uint64_t{1} << (b - 1));
            parts.push_back(two);
            rec(b + 1, used | two, parts, singles);
            parts.pop_back();
          }
        }
      };
  std::vector<std::uint64_t> parts;
  rec(1, 0, parts, 0);
  return static_cast<int>(seen.size());
}

}  // namespace

TEST_CASE("boxes and faces are enumerated exactly once") {
  auto four = enumerate_boxes(4, 2, BoxKind::full);
  REQUIRE(four.size() == 1);
  CHECK(four[0] == standard_box(2));
  CHECK(enumerate_boxes(5, 2, BoxKind::full).size() == 5);
  auto faces = enumerate_boxes(3, 2, BoxKind::face);
  REQUIRE(faces.size() == 2);
  CHECK(faces[0].parts == std::vector<Subset>{S({1}), S({2, 3})});
  CHECK(faces[1].parts == std::vector<Subset>{S({1, 2}), S({3})});
  for (int n = 4; n <= 8; ++n)
    for (int d = 1; 2 * d - 1 <= n && d <= 3; ++d) {
      if (2 * d <= n) CHECK(static_cast<int>(enumerate_boxes(n, d, BoxKind::full).size()) == count_boxes(n, d, false));
      CHECK(static_cast<int>(enumerate_boxes(n, d, BoxKind::face).size()) == count_boxes(n, d, true));
    }
  for (auto& b : enumerate_boxes(7, 3, BoxKind::full)) {
    CHECK(b.is_box());
    CHECK(b.members().size() == 8);
  }
  CHECK_THROWS_AS(enumerate_boxes(3, 2, BoxKind::full), DomainError);
}

TEST_CASE("event probabilities on small models") {
  auto coins = product_array(std::vector<Rational>(4, Rational(1, 2)), 1);
  CHECK(coins->probability(EventQuery{{S({3}), 1}}) == Rational(1, 2));
  auto half = product_array(std::vector<Rational>(4, Rational(1, 2)), 2);
  CHECK(half->probability(EventQuery{{S({1, 2}), 1}}) == Rational(1, 4));
  CHECK(moment(*half, standard_box(2).members()) == Rational(1, 16));

  auto cf = appendix_a_2d(4);
  CHECK(cf->probability(EventQuery::all_equal(standard_box(2).members(), 1)) == Rational(3, 32));

  TupleTable eq = TupleTable::empty(2, 2);
  eq.cells[eq.index({0, 0})] = 1;
  eq.cells[eq.index({1, 1})] = 1;
  GraphSampling g(3, eq);
  EventQuery q{{S({1, 2}), 1}, {S({2, 3}), 1}};
  CHECK(g.probability(q) == Rational(1, 4));
  CHECK(brute::graph_sampling(3, eq, q) == Rational(1, 4));

  EventQuery clash;
  clash.require(S({1, 2}), 1).require(S({1, 2}), 0);
  CHECK(clash.contradictory());
  CHECK(g.probability(clash) == 0);
  CHECK(g.probability(EventQuery{}) == 1);
  CHECK_THROWS_AS(g.probability(EventQuery{{S({1, 5}), 1}}), DomainError);
  CHECK_THROWS_AS(g.probability(EventQuery{{S({1, 2}), 2}}), DomainError);
}

TEST_CASE("moments match closed forms") {
  auto cf = appendix_a_2d(8);
  CHECK(moment(*cf, {S({3, 7})}) == Rational(1, 2));
  auto fam = standard_box(2).members();
  for (auto s : make_box({S({5, 6}), S({7, 8})}).members()) fam.push_back(s);
  CHECK(moment(*cf, fam) == Rational(5, 512));
  CHECK(brute::appendix_2d(8, EventQuery::all_equal(fam, 1)) == Rational(5, 512));

  auto er = fixed_size_er(5, 2, 3);
  CHECK(moment(*er, {S({1, 2}), S({3, 4})}) == Q(8, 120));
  CHECK(brute::fixed_size(5, 2, 3, EventQuery::all_equal({S({1, 2}), S({3, 4})}, 1)) == Q(8, 120));
  CHECK(moment(*er, {S({2, 5})}) == Rational(3, 10));
}

TEST_CASE("subarray laws") {
  auto coins = product_array(std::vector<Rational>(5, Rational(1, 2)), 1);
  auto law = subarray_law(*coins, S({1, 2, 4}));
  REQUIRE(law.size() == 8);
  for (auto& p : law) CHECK(p == Rational(1, 8));

  auto cf = appendix_a_2d(4);
  auto tri = subarray_law(*cf, S({1, 2, 3}));
  CHECK(tri[7] == Rational(3, 16));
  Rational total = 0;
  for (auto& p : tri) total += p;
  CHECK(total == 1);

  Rng rng(3);
  auto table = random_law(std::uint64_t{1} << 6, rng);
  DenseTable dense(4, 2, 2, table);
  CHECK(subarray_law(dense, Subset::first(4)) == table);

  CapGuard small(1000);
  CHECK_THROWS_AS(subarray_law(*appendix_a_2d(8), Subset::first(8)), CapacityError);
}

TEST_CASE("oracles agree with full enumeration") {
  Rng rng(11);
  std::vector<std::pair<std::string, std::function<void()>>> cases;
  for (int trial = 0; trial < 12; ++trial) {
    int n = 3 + static_cast<int>(rng.below(4));
    std::vector<Rational> p;
    for (int i = 0; i < n; ++i) p.push_back(Q(static_cast<long>(rng.below(5)), 4));
    ProductArray prod(p, 2);
    FixedSizeER er(n, 2, rng.below(binomial(n, 2) + 1));
    ClosedFormTwoDim cf(n);
    TupleTable A = symmetric_random(3, 2, rng);
    GraphSampling gs(n, A);
    TupleTable A3 = symmetric_random(3, 3, rng);
    GraphSampling gs3(n, A3);
    TupleTable B = symmetric_random(4, 2, rng);
    HighDimSemiRandom hd(std::min(n, 5), B);
    std::vector<Rational> dtab = random_law(std::uint64_t{1} << binomial(4, 2), rng);
    DenseTable dense(4, 2, 2, dtab);
    for (int rep = 0; rep < 8; ++rep) {
      auto q = random_query(prod, rng, 4);
      CHECK(prod.probability(q) == brute::product(p, 2, q));
      q = random_query(er, rng, 4);
      CHECK(er.probability(q) == brute::fixed_size(n, 2, static_cast<int>(er.ones()), q));
      q = random_query(cf, rng, 4);
      CHECK(cf.probability(q) == brute::appendix_2d(n, q));
      q = random_query(gs, rng, 4);
      CHECK(gs.probability(q) == brute::graph_sampling(n, gs.set(), q));
      q = random_query(gs3, rng, 4);
      CHECK(gs3.probability(q) == brute::graph_sampling(n, gs3.set(), q));
      q = random_query(hd, rng, 4);
      CHECK(hd.probability(q) == brute::appendix_highd(hd.n(), B, q));
      q = random_query(dense, rng, 4);
      CHECK(dense.probability(q) == brute::dense(4, 2, 2, dtab, q));
    }
  }
}

TEST_CASE("joint laws agree with per-configuration probabilities") {
  Rng rng(5);
  TupleTable A = symmetric_random(3, 2, rng);
  std::vector<ModelPtr> models = {
      std::make_shared<GraphSampling>(5, A), appendix_a_2d(5),
      product_array({Rational(1, 3), Rational(1, 2), Rational(1), Rational(0), Rational(2, 3)}, 2),
      fixed_size_er(5, 2, 4), iid_entries(5, 2, {Rational(1, 5), Rational(3, 5), Rational(1, 5)})};
  for (auto& m : models) {
    std::vector<Subset> coords = {S({1, 2}), S({2, 4}), S({3, 5})};
    auto law = m->joint_law(coords);
    ConfigCodec codec(m->alphabet_size(), coords.size());
    REQUIRE(law.size() == codec.size());
    for (std::uint64_t idx = 0; idx < codec.size(); ++idx) {
      auto digits = codec.decode(idx);
      EventQuery q;
      for (std::size_t j = 0; j < coords.size(); ++j) q.require(coords[j], digits[j]);
      CHECK(law[idx] == m->probability(q));
    }
  }
}

TEST_CASE("marginals are coherent") {
  Rng rng(19);
  TupleTable A = symmetric_random(4, 2, rng);
  std::vector<ModelPtr> models = {std::make_shared<GraphSampling>(6, A), appendix_a_2d(6), fixed_size_er(6, 2, 7),
                                  iid_entries(6, 2, {Rational(1, 6), Rational(1, 3), Rational(1, 2)}),
                                  product_array(std::vector<Rational>(6, Rational(2, 5)), 2)};
  for (int trial = 0; trial < 100; ++trial) {
    auto& m = models[trial % models.size()];
    auto q = random_query(*m, rng, 3);
    auto ents = DSubsetIndex(m->n(), m->d()).all();
    Subset s = ents[rng.below(ents.size())];
    Rational sum = 0;
    for (Symbol a = 0; a < m->alphabet_size(); ++a) {
      EventQuery ext = q;
      ext.require(s, a);
      sum += m->probability(ext);
    }
    CHECK(sum == m->probability(q));
  }
}

TEST_CASE("mixtures are linear in their components") {
  Rng rng(23);
  TupleTable A = symmetric_random(3, 2, rng);
  auto a = std::make_shared<GraphSampling>(5, A);
  auto b = appendix_a_2d(5);
  auto c = fixed_size_er(5, 2, 3);
  auto mix = mixture({{Rational(1, 2), a}, {Rational(1, 3), b}, {Rational(1, 6), c}});
  for (int trial = 0; trial < 40; ++trial) {
    auto q = random_query(*mix, rng, 4);
    CHECK(mix->probability(q) == Rational(1, 2) * a->probability(q) + Rational(1, 3) * b->probability(q) +
                                     Rational(1, 6) * c->probability(q));
  }
  auto single = mixture({{Rational(1), b}});
  auto half = product_array(std::vector<Rational>(5, Rational(1, 2)), 2);
  auto twice = mixture({{Rational(1, 2), half}, {Rational(1, 2), half}});
  for (int trial = 0; trial < 20; ++trial) {
    auto q = random_query(*b, rng, 4);
    CHECK(single->probability(q) == b->probability(q));
    CHECK(twice->probability(q) == half->probability(q));
  }
  CHECK_THROWS_AS(mixture({{Rational(1, 2), a}, {Rational(1, 3), b}}), DomainError);
  CHECK_THROWS_AS(mixture({{Rational(1, 2), a}, {Rational(1, 2), appendix_a_2d(6)}}), DomainError);
}

TEST_CASE("restriction and doubling read entries of the source") {
  Rng rng(29);
  TupleTable A = symmetric_random(3, 3, rng);
  auto src = std::make_shared<GraphSampling>(6, A);
  RestrictedLast r(src);
  CHECK(r.n() == 5);
  CHECK(r.d() == 2);
  Doubled dbl(src);
  CHECK(dbl.n() == 4);
  CHECK(dbl.alphabet_size() == 4);
  for (int trial = 0; trial < 30; ++trial) {
    auto q = random_query(r, rng, 3);
    EventQuery lifted;
    for (auto& [t, a] : q.constraints()) lifted.require(t.with(6), a);
    CHECK(r.probability(q) == src->probability(lifted));

    auto q2 = random_query(dbl, rng, 3);
    EventQuery lifted2;
    for (auto& [t, c] : q2.constraints()) lifted2.require(t.with(5), c % 2).require(t.with(6), c / 2);
    CHECK(dbl.probability(q2) == src->probability(lifted2));
  }
  std::vector<Subset> coords = {S({1, 2}), S({2, 3})};
  auto law = dbl.joint_law(coords);
  ConfigCodec codec(4, 2);
  for (std::uint64_t idx = 0; idx < codec.size(); ++idx) {
    auto dg = codec.decode(idx);
    EventQuery q;
    for (std::size_t j = 0; j < 2; ++j) q.require(coords[j], dg[j]);
    CHECK(law[idx] == dbl.probability(q));
  }
}

TEST_CASE("sampling produces configurations of the right shape") {
  Rng rng(31);
  auto er = fixed_size_er(6, 2, 5);
  for (int i = 0; i < 20; ++i) {
    auto x = er->sample(rng);
    CHECK(x.size() == 15);
    int ones = 0;
    for (auto v : x) ones += v;
    CHECK(ones == 5);
  }
  auto cf = appendix_a_2d(6);
  long hits = 0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    auto x = cf->sample(rng);
    hits += x[0];
  }
  CHECK(std::abs(static_cast<double>(hits) / reps - 0.5) < 0.02);
}
