#include "brute_force.hpp"

#include "arraylab/boxes.hpp"
#include "arraylab/concentration.hpp"
#include "arraylab/constructions.hpp"
#include "arraylab/defects.hpp"
#include "arraylab/errors.hpp"
#include "arraylab/models.hpp"
#include "arraylab/random.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace arraylab;

namespace {

Subset S(std::initializer_list<int> e) { return Subset::of(e); }

Rational Q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Rational> random_law(std::size_t size, Rng& rng) {
  std::vector<Rational> t(size);
  Rational total = 0;
  for (auto& x : t) {
    x = Rational(static_cast<long>(rng.below(10)));
    total += x;
  }
  if (total == 0) {
    t[0] = 1;
    total = 1;
  }
  for (auto& x : t) {
    x /= total;
    x.canonicalize();
  }
  return t;
}

std::vector<Rational> random_values(std::size_t size, Rng& rng) {
  std::vector<Rational> v(size);
  for (auto& x : v) x = Rational(static_cast<long>(rng.below(11)) - 5);
  return v;
}

struct Instance52 {
  std::vector<Rational> law;
  std::vector<Rational> f;
  std::shared_ptr<DenseTable> model;
};

Instance52 random_instance(Rng& rng) {
  Instance52 in;
  in.law = random_law(1024, rng);
  in.f = random_values(1024, rng);
  in.model = std::make_shared<DenseTable>(5, 2, 2, in.law);
  return in;
}

std::vector<Subset> cumulative(const std::vector<Subset>& blocks, std::size_t upto) {
  std::vector<Subset> E;
  for (std::size_t t = 0; t < upto; ++t)
    for (auto s : array_entries(blocks[t], 2)) E.push_back(s);
  return E;
}

// Increment norms of the Doob martingale along the block filtration, on the full space.
std::vector<double> brute_increment_norms(const Instance52& in, const std::vector<Subset>& blocks, double p) {
  std::vector<double> out;
  auto prev = brute::conditional(5, 2, 2, in.law, in.f, {});
  for (std::size_t i = 1; i <= blocks.size(); ++i) {
    auto cur = brute::conditional(5, 2, 2, in.law, in.f, cumulative(blocks, i));
    std::vector<Rational> d(cur.size());
    for (std::size_t x = 0; x < cur.size(); ++x) d[x] = cur[x] - prev[x];
    out.push_back(brute::norm(in.law, d, p));
    prev = cur;
  }
  return out;
}

}  // namespace

TEST_CASE("conditional expectation of simple functions") {
  auto coins = product_array(std::vector<Rational>(4, Q(1, 2)), 1);
  LocalTable constant{{}, {Q(7, 3)}};
  auto c = conditional_expectation(*coins, constant, S({1, 2}));
  for (std::size_t i = 0; i < c.value.size(); ++i) CHECK(c.value[i] == Q(7, 3));
  CHECK(c.mean() == Q(7, 3));

  MonomialMinusConstant centered{{S({1})}, Q(1, 2)};
  auto g = conditional_expectation(*coins, centered, S({2, 3}));
  CHECK(g.value.size() == 4);
  for (auto& v : g.value) CHECK(v == 0);
  CHECK(concentration_probability(*coins, centered, S({2, 3}), 1e-9) == 1);
  CHECK(concentration_probability(*coins, LocalTable{{}, {Rational(0)}}, S({2, 3}), 0.0) == 1);

  auto own = conditional_expectation(*coins, centered, S({1, 2}));
  CHECK(own.reduced());
  CHECK(second_moment(own) == Q(1, 4));
  CHECK_THROWS_AS(conditional_expectation(*appendix_a_2d(4), centered_monomial(*appendix_a_2d(4), {S({1, 2})}), S({3})),
                  DomainError);
}

TEST_CASE("zero-probability rows carry value zero") {
  auto eq = std::make_shared<DenseTable>(3, 2, 2, [] {
    std::vector<Rational> t(8, Rational(0));
    t[0] = Q(1, 2);
    t[7] = Q(1, 2);
    return t;
  }());
  auto g = conditional_expectation(*eq, MonomialMinusConstant{{S({2, 3})}, 0}, std::vector<Subset>{S({1, 2}), S({1, 3})});
  CHECK(g.value.size() == 4);
  CHECK(g.probability[1] == 0);
  CHECK(g.value[1] == 0);
  CHECK(g.value[2] == 0);
  CHECK(g.value[3] == 1);
}

TEST_CASE("conditioning the box monomial of the two-dimensional counterexample") {
  auto m = appendix_a_2d(8);
  auto box = standard_box(2).members();
  auto f = centered_monomial(*m, box);
  CHECK(std::get<MonomialMinusConstant>(f).c == Q(3, 32));
  CHECK(lp_norm(*m, f, kInf) <= 1.0);
  auto g = conditional_expectation(*m, f, Subset::first(8));
  CHECK(g.mean() == 0);
  EventQuery C = EventQuery::all_equal(make_box({S({5, 6}), S({7, 8})}).members(), 1);
  CHECK(expectation_on(*m, g, C) == Q(1, 1024));
  CHECK(tail_probability(g, 0, pow2(-11)) >= pow2(-11));
  CHECK(concentration_probability(g, std::ldexp(1.0, -11)) <= 1 - pow2(-11));
}

TEST_CASE("lp norms of simple variables") {
  auto coins = product_array(std::vector<Rational>(3, Q(1, 2)), 1);
  LocalTable one{{}, {Rational(1)}};
  LocalTable sign{{S({2})}, {Rational(-1), Rational(1)}};
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    CHECK(lp_norm(*coins, one, p) == doctest::Approx(1.0));
    CHECK(lp_norm(*coins, sign, p) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(lp_norm(*coins, one, 0.5), DomainError);
  LocalTable bit{{S({1})}, {Rational(0), Rational(2)}};
  CHECK(lp_norm(*coins, bit, 1.0) == doctest::Approx(1.0));
  CHECK(lp_norm(*coins, bit, 2.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("conditional expectations match grouping over the full space") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    auto in = random_instance(rng);
    Subset J = Subset::from_bits(rng.below(32));
    if (J.size() < 2) J = S({2, 4, 5});
    auto g = conditional_expectation(*in.model, ExplicitTable{in.f}, J);
    auto ref = brute::conditional(5, 2, 2, in.law, in.f, array_entries(J, 2));
    for (double p : {1.0, 1.5, 2.0}) CHECK(lp_norm(g, p) == doctest::Approx(brute::norm(in.law, ref, p)));
    CHECK(second_moment(g) == [&] {
      Rational s = 0;
      for (std::size_t x = 0; x < ref.size(); ++x) s += in.law[x] * ref[x] * ref[x];
      return s;
    }());
  }
}

TEST_CASE("tower property and contraction on random instances") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto in = random_instance(rng);
    ExplicitTable f{in.f};
    auto whole = function_table(*in.model, f);
    Subset J = Subset::from_bits(rng.below(32) | 3);
    auto g = conditional_expectation(*in.model, f, J);
    CHECK(g.mean() == whole.mean());
    for (double p : {1.0, 1.5, 2.0, kInf}) CHECK(lp_norm(g, p) <= lp_norm(whole, p) * (1 + 1e-12));
  }
}

TEST_CASE("doob increments of a block-measurable function") {
  Rng rng(3);
  auto in = random_instance(rng);
  std::vector<Subset> blocks = {S({1, 2, 3}), S({4, 5})};
  LocalTable f{array_entries(S({1, 2, 3}), 2), random_values(8, rng)};
  auto doob = doob_increments(*in.model, f, blocks, {1.5, 2.0});
  auto centered = shifted(function_table(*in.model, f), doob.mean);
  CHECK(doob.increments[0].norms[1] == doctest::Approx(lp_norm(centered, 2.0)));
  CHECK(doob.increments[0].norms[0] == doctest::Approx(lp_norm(centered, 1.5)));
  CHECK(doob.increments[1].norms[0] == 0);
  CHECK(doob.increments[1].norms[1] == 0);
  for (auto& v : doob.increments[1].table.value) CHECK(v == 0);

  LocalTable first_entry{{S({1, 2})}, {Rational(3), Rational(-1)}};
  auto sel = energy_increment_select(*in.model, first_entry, 2.0, Subset::first(5), 2);
  CHECK(sel.i0 == 2);
  CHECK(sel.achieved == 0);
  CHECK(sel.J == S({3, 4}));
  CHECK_THROWS_AS(doob_increments(*in.model, f, {S({1, 2}), S({2, 3})}), DomainError);
}

TEST_CASE("martingale increments are orthogonal") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto in = random_instance(rng);
    std::vector<Subset> blocks = {S({1, 2}), S({3, 4})};
    auto doob = doob_increments(*in.model, ExplicitTable{in.f}, blocks, {2.0});
    Rational sum = 0;
    for (auto& inc : doob.increments) sum += second_moment(inc.table);
    auto last = shifted(doob.conditional.back(), doob.mean);
    CHECK(sum == second_moment(last));
  }
}

TEST_CASE("increment norms match the full-table reference") {
  auto prod = product_array({Q(1, 2), Q(1, 3), Q(2, 3), Q(3, 4), Q(1, 5)}, 2);
  auto ents = DSubsetIndex(5, 2).all();
  Instance52 in;
  in.law = prod->joint_law(ents);
  in.model = std::make_shared<DenseTable>(5, 2, 2, in.law);
  in.f.resize(1024);
  Rational mean = 0;
  for (std::size_t x = 0; x < 1024; ++x) {
    in.f[x] = __builtin_popcountll(x);
    mean += in.law[x] * in.f[x];
  }
  for (auto& v : in.f) v -= mean;
  std::vector<Subset> blocks = {S({1, 2}), S({3, 4})};
  for (double p : {1.5, 2.0}) {
    auto doob = doob_increments(*prod, ExplicitTable{in.f}, blocks, {p});
    auto ref = brute_increment_norms(in, blocks, p);
    for (std::size_t i = 0; i < blocks.size(); ++i) CHECK(doob.increments[i].norms[0] == doctest::Approx(ref[i]));
  }
}

TEST_CASE("energy increment selection obeys the minimum-increment bound") {
  Rng rng(2024);
  for (double p : {2.0, 1.5}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto in = random_instance(rng);
      ExplicitTable f{in.f};
      auto sel = energy_increment_select(*in.model, f, p, Subset::first(5), 2);
      CHECK(sel.blocks.size() == 2);
      CHECK(sel.increment_bound == doctest::Approx(1 / std::sqrt(2 * (p - 1))));
      CHECK(sel.increment_bound_holds());
      CHECK(sel.interval);
      auto ref = brute_increment_norms(in, sel.blocks, p);
      for (std::size_t i = 0; i < ref.size(); ++i) CHECK(sel.increment_norms[i] * sel.scale == doctest::Approx(ref[i]));
      CHECK(sel.achieved == doctest::Approx(std::min(ref[0], ref[1]) / sel.scale));

      // Sum of squared increment norms against the p-norm of their sum.
      auto doob = doob_increments(*in.model, f, sel.blocks, {p});
      double sq = 0;
      for (auto& inc : doob.increments) sq += inc.norms[0] * inc.norms[0];
      double total = lp_norm(shifted(doob.conditional.back(), doob.mean), p);
      CHECK(std::sqrt(sq) <= total / std::sqrt(p - 1) * (1 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("selected block satisfies the moment bound with measured dissociation") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto in = random_instance(rng);
    double beta = dissociativity_defect(*in.model, 4).value_double();
    for (double p : {1.5, 2.0}) {
      auto sel = energy_increment_select(*in.model, ExplicitTable{in.f}, p, Subset::first(4), 2, beta);
      CHECK(sel.moment_bound_holds());
    }
  }
  auto iid = std::make_shared<IidEntries>(6, 2, std::vector<Rational>{Q(1, 3), Q(2, 3)});
  CHECK(dissociativity_defect(*iid, 6).value == 0);
  std::vector<Rational> vals(std::uint64_t{1} << 6);
  for (std::size_t x = 0; x < vals.size(); ++x) vals[x] = Rational(static_cast<long>((x * 7) % 5)) - 2;
  LocalTable f{array_entries(S({1, 2, 3, 4}), 2), vals};
  for (int k : {2, 3}) {
    auto sel = energy_increment_select(*iid, f, 1.5, Subset::first(6), k, 0.0);
    CHECK(sel.moment_bound_holds());
    CHECK(*sel.moment_bound == doctest::Approx(std::sqrt(2.0 * k / 6) / std::sqrt(0.5)));
  }
  CHECK_THROWS_AS(energy_increment_select(*iid, f, 1.5, Subset::first(6), 4), DomainError);
  CHECK_THROWS_AS(energy_increment_select(*iid, f, 1.5, Subset::first(6), 1), DomainError);
  CHECK_THROWS_AS(energy_increment_select(*iid, f, 2.5, Subset::first(6), 2), DomainError);
  CHECK_THROWS_AS(energy_increment_select(*iid, f, 1.0, Subset::first(6), 2), DomainError);
}

TEST_CASE("double conditioning across mixing sigma-algebras") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    auto in = random_instance(rng);
    Subset J = S({1, 2}), K = S({3, 4, 5});
    double beta = mixing_coefficient(*in.model, J, K).value_double();
    ExplicitTable f{in.f};
    auto whole = function_table(*in.model, f);
    Rational mean = whole.mean();
    auto inner = conditional_expectation(*in.model, f, J);
    auto outer = shifted(conditional_expectation(*in.model, as_function(inner), K), mean);
    for (double p : {1.5, 2.0}) {
      double r = (p + 1) / 2;
      double rhs = 10 * std::pow(beta, 1 / r - 1 / p) * lp_norm(shifted(whole, mean), p);
      CHECK(lp_norm(outer, r) <= rhs + 1e-12);
    }
  }
}

TEST_CASE("theorem constants") {
  auto c = theorem_constants(2, 2, 2.0, 1.0, 2);
  CHECK(c.beta == doctest::Approx(1e-10).epsilon(1e-9));
  CHECK(c.ell == 8);
  CHECK(c.log_C_2d == doctest::Approx(136.0));
  CHECK(c.C_2d == doctest::Approx(std::exp(136.0)));
  CHECK(c.c_dissoc == doctest::Approx(0.25));
  CHECK(theorem_constants(2, 2, 2.0, 0.5, 4).ell == 256);
  CHECK(c.log_C_gen == doctest::Approx(24 * 2 * std::log(2.0) * 4));
  CHECK(c.log_C_simult == doctest::Approx(24 * 2 * std::log(2.0) * 4 * std::pow(4.0, 8)));

  auto huge = theorem_constants(3, 4, 1.1, 0.1, 5);
  CHECK(std::isinf(huge.C_gen));
  CHECK(std::isfinite(huge.log_C_gen));
  CHECK(huge.ell >= 5);

  double prev_eps = kInf, prev_p = kInf;
  for (double e : {0.1, 0.3, 0.6, 1.0}) {
    auto t = theorem_constants(2, 3, 1.5, e, 3);
    CHECK(t.log_C_gen <= prev_eps);
    prev_eps = t.log_C_gen;
    CHECK(t.beta > 0);
    CHECK(t.c_dissoc > 0);
    CHECK(t.ell >= 3);
  }
  for (double p : {1.1, 1.4, 1.7, 2.0}) {
    auto t = theorem_constants(2, 3, p, 0.5, 3);
    CHECK(t.log_C_gen <= prev_p);
    prev_p = t.log_C_gen;
  }
  CHECK_THROWS_AS(theorem_constants(2, 2, 1.0, 0.5, 2), DomainError);
  CHECK_THROWS_AS(theorem_constants(2, 2, 2.0, 0.0, 2), DomainError);
  CHECK_THROWS_AS(theorem_constants(2, 2, 2.0, 1.5, 2), DomainError);
  CHECK_THROWS_AS(theorem_constants(3, 2, 2.0, 0.5, 2), DomainError);
  CHECK_THROWS_AS(theorem_constants(2, 1, 2.0, 0.5, 2), DomainError);
}

TEST_CASE("anti-concentration witnesses from dependent events") {
  auto iid = std::make_shared<IidEntries>(6, 2, std::vector<Rational>{Q(1, 2), Q(1, 2)});
  auto none = dissociativity_witness(*iid, 2, 2, 4);
  CHECK(none.vacuous());
  CHECK(none.rows.empty());
  CHECK(none.spreadable_within_tolerance);

  std::uint64_t N = binomial(5, 2);
  std::vector<Rational> t(std::uint64_t{1} << N, Rational(0));
  t.front() = Q(1, 2);
  t.back() = Q(1, 2);
  auto shared = std::make_shared<DenseTable>(5, 2, 2, t);
  auto w = dissociativity_witness(*shared, 2, 2, 4, std::vector<std::uint64_t>{1});
  CHECK(w.beta == Q(1, 4));
  CHECK(w.rows.size() == 5);
  CHECK(w.all_hold());
  for (auto& row : w.rows) CHECK(row.tail == 1);
  auto auto_w = dissociativity_witness(*shared, 2, 2, 4);
  CHECK(auto_w.beta == Q(1, 4));

  // All-ones on Box(2) inside C([4], 2): positions 1..4 of {12, 13, 23, 14, 24, 34}.
  auto cf = appendix_a_2d(8);
  auto v = dissociativity_witness(*cf, 4, 4, 8, std::vector<std::uint64_t>{30, 31, 62, 63});
  CHECK(v.spreadable_within_tolerance);
  CHECK(v.beta >= Q(1, 1024));
  CHECK(v.rows.size() == 1);
  CHECK(v.all_hold());
  CHECK_THROWS_AS(dissociativity_witness(*cf, 4, 4, 9), DomainError);
  CHECK_THROWS_AS(dissociativity_witness(*cf, 1, 2, 4), DomainError);
}

TEST_CASE("simultaneous selection across instances") {
  Rng rng(909);
  auto a = random_instance(rng);
  ExplicitTable fa{a.f};
  auto single = simultaneous_select({{Rational(1), a.model, fa}}, 2.0, Subset::first(5), 2);
  auto sel = energy_increment_select(*a.model, fa, 2.0, Subset::first(5), 2);
  CHECK(single.i0 == sel.i0);
  auto twin = simultaneous_select({{Q(1, 2), a.model, fa}, {Q(1, 2), a.model, fa}}, 2.0, Subset::first(5), 2);
  CHECK(twin.i0 == sel.i0);

  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Instance> inst;
    std::vector<Instance52> raw;
    for (int v = 0; v < 5; ++v) {
      raw.push_back(random_instance(rng));
      inst.push_back({Q(1, 5), raw.back().model, ExplicitTable{raw.back().f}});
    }
    auto rep = simultaneous_select(inst, 2.0, Subset::first(5), 2);
    double good = 0;
    for (std::size_t v = 0; v < 5; ++v) {
      auto ref = brute_increment_norms(raw[v], rep.blocks, 2.0);
      auto whole = brute::conditional(5, 2, 2, raw[v].law, raw[v].f, {});
      std::vector<Rational> c(raw[v].f.size());
      for (std::size_t x = 0; x < c.size(); ++x) c[x] = raw[v].f[x] - whole[x];
      double scale = brute::norm(raw[v].law, c, 2.0);
      double normed = ref[static_cast<std::size_t>(rep.i0 - 1)] / scale;
      CHECK(rep.normalized[v][static_cast<std::size_t>(rep.i0 - 1)] == doctest::Approx(normed));
      if (normed <= rep.threshold) good += 0.2;
    }
    CHECK(rep.good_weight == doctest::Approx(good));
    CHECK(rep.good_weight >= rep.guaranteed_weight - 1e-12);
  }
  CHECK_THROWS_AS(simultaneous_select({{Q(1, 3), a.model, fa}}, 2.0, Subset::first(5), 2), DomainError);
  auto iid = std::make_shared<IidEntries>(8, 2, std::vector<Rational>{Q(1, 2), Q(1, 2)});
  auto big = appendix_a_2d(8);
  CapGuard guard(5000);
  try {
    simultaneous_select({{Q(1, 2), iid, centered_monomial(*iid, {S({1, 2})})},
                         {Q(1, 2), big, centered_monomial(*big, {S({1, 5})})}},
                        2.0, Subset::first(8), 4);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("instance 1") != std::string::npos);
  }
}
