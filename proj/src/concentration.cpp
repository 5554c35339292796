#include "arraylab/concentration.hpp"

#include "arraylab/errors.hpp"
#include "arraylab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace arraylab {

using nlohmann::json;

namespace {

std::uint64_t power(int m, std::size_t len) {
  require_capacity(std::pow(static_cast<long double>(m), static_cast<long double>(len)), "function table");
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < len; ++i) s *= static_cast<std::uint64_t>(m);
  return s;
}

void check_distinct(const ArrayModel& model, const std::vector<Subset>& coords) {
  std::vector<Subset> sorted = coords;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("function coordinates must be distinct entries");
  for (auto s : coords) model.check_index(s);
}

std::vector<Subset> sorted_unique(std::vector<Subset> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool is_interval(Subset s) {
  if (s.empty()) return true;
  return s == Subset::interval(s.min(), s.max());
}

double abs_pow(const Rational& v, double p) { return std::pow(std::fabs(to_double(v)), p); }

}  // namespace

std::vector<Subset> function_coords(const ArrayModel& model, const FunctionSpec& f) {
  return std::visit(
      [&](const auto& g) -> std::vector<Subset> {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, MonomialMinusConstant>) {
          auto c = sorted_unique(g.family);
          for (auto s : c) model.check_index(s);
          return c;
        } else if constexpr (std::is_same_v<T, IndicatorLift>) {
          if (g.j < model.d() || g.j > model.n()) throw DomainError("indicator lift needs d <= j <= n");
          return array_entries(Subset::first(g.j), model.d());
        } else if constexpr (std::is_same_v<T, ExplicitTable>) {
          return DSubsetIndex(model.n(), model.d()).all();
        } else {
          check_distinct(model, g.coords);
          return g.coords;
        }
      },
      f);
}

LocalTable as_local(const ArrayModel& model, const FunctionSpec& f) {
  LocalTable out;
  out.coords = function_coords(model, f);
  int m = model.alphabet_size();
  std::uint64_t size = power(m, out.coords.size());
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, MonomialMinusConstant>) {
          ConfigCodec codec(m, out.coords.size());
          out.values.resize(size);
          for (std::uint64_t i = 0; i < size; ++i) {
            Integer prod = 1;
            for (std::size_t t = 0; t < out.coords.size() && prod != 0; ++t) prod *= codec.digit(i, t);
            out.values[i] = Rational(prod) - g.c;
          }
        } else if constexpr (std::is_same_v<T, IndicatorLift>) {
          out.values.assign(size, Rational(0));
          for (auto a : g.atoms) {
            if (a >= size) throw DomainError("indicator atom out of range");
            out.values[a] = 1;
          }
        } else if constexpr (std::is_same_v<T, ExplicitTable>) {
          if (g.values.size() != size) throw DomainError("explicit table has the wrong number of values");
          out.values = g.values;
        } else {
          if (g.values.size() != size) throw DomainError("local table has the wrong number of values");
          out.values = g.values;
        }
      },
      f);
  return out;
}

FunctionSpec centered_monomial(const ArrayModel& model, const std::vector<Subset>& family) {
  return MonomialMinusConstant{family, moment(model, sorted_unique(family))};
}

Rational RandomVariableTable::mean() const {
  Rational s = 0;
  for (std::size_t i = 0; i < value.size(); ++i)
    if (probability[i] != 0) s += probability[i] * value[i];
  return s;
}

namespace {

RandomVariableTable tabulate(const ArrayModel& model, const LocalTable& f, const std::vector<Subset>& conditioned) {
  RandomVariableTable t;
  t.J = support_of(conditioned);
  t.conditioned = conditioned;
  t.coords = f.coords;
  t.alphabet = model.alphabet_size();
  t.probability = model.joint_law(f.coords);
  t.value = f.values;
  for (std::size_t i = 0; i < t.value.size(); ++i)
    if (t.probability[i] == 0) t.value[i] = 0;
  return t;
}

// Joint law over cond followed by the remaining function coordinates, with f evaluated per configuration.
struct JointWithValues {
  std::vector<Rational> law;
  std::vector<Rational> fvals;
};

JointWithValues joint_with_values(const ArrayModel& model, const LocalTable& f, const std::vector<Subset>& cond) {
  std::vector<Subset> U = cond;
  for (auto s : f.coords)
    if (std::find(cond.begin(), cond.end(), s) == cond.end()) U.push_back(s);
  std::vector<std::size_t> pos;
  for (auto s : f.coords) pos.push_back(static_cast<std::size_t>(std::find(U.begin(), U.end(), s) - U.begin()));
  JointWithValues out;
  out.law = model.joint_law(U);
  ConfigCodec codec(model.alphabet_size(), U.size());
  out.fvals.resize(out.law.size());
  for (std::uint64_t i = 0; i < out.law.size(); ++i) out.fvals[i] = f.values[codec.project(i, pos)];
  return out;
}

// E[f | first `len` coordinates of the joint], which are a prefix so the projection is a remainder.
RandomVariableTable condition_prefix(const JointWithValues& jv, int m, const std::vector<Subset>& cond, std::size_t len) {
  RandomVariableTable t;
  t.conditioned.assign(cond.begin(), cond.begin() + static_cast<std::ptrdiff_t>(len));
  t.coords = t.conditioned;
  t.J = support_of(t.conditioned);
  t.alphabet = m;
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < len; ++i) size *= static_cast<std::uint64_t>(m);
  t.probability.assign(size, Rational(0));
  t.value.assign(size, Rational(0));
  for (std::uint64_t i = 0; i < jv.law.size(); ++i) {
    if (jv.law[i] == 0) continue;
    std::uint64_t c = i % size;
    t.probability[c] += jv.law[i];
    t.value[c] += jv.law[i] * jv.fvals[i];
  }
  for (std::uint64_t c = 0; c < size; ++c)
    if (t.probability[c] != 0) t.value[c] /= t.probability[c];
  return t;
}

}  // namespace

RandomVariableTable conditional_expectation(const ArrayModel& model, const FunctionSpec& f,
                                            const std::vector<Subset>& entries) {
  for (auto s : entries) model.check_index(s);
  auto cond = sorted_unique(entries);
  auto local = as_local(model, f);
  bool measurable = std::all_of(local.coords.begin(), local.coords.end(), [&](Subset s) {
    return std::binary_search(cond.begin(), cond.end(), s);
  });
  if (measurable) return tabulate(model, local, cond);
  auto jv = joint_with_values(model, local, cond);
  return condition_prefix(jv, model.alphabet_size(), cond, cond.size());
}

RandomVariableTable conditional_expectation(const ArrayModel& model, const FunctionSpec& f, Subset J) {
  if (J.size() < model.d()) throw DomainError("conditioning set must have at least d elements");
  if (J.max() > model.n()) throw DomainError("conditioning set outside [n]");
  auto t = conditional_expectation(model, f, array_entries(J, model.d()));
  t.J = J;
  return t;
}

RandomVariableTable function_table(const ArrayModel& model, const FunctionSpec& f) {
  auto local = as_local(model, f);
  return tabulate(model, local, local.coords);
}

FunctionSpec as_function(const RandomVariableTable& g) { return LocalTable{g.coords, g.value}; }

double lp_norm(const RandomVariableTable& g, double p) {
  if (std::isnan(p) || p < 1) throw DomainError("lp_norm needs p >= 1");
  if (std::isinf(p)) {
    double best = 0;
    for (std::size_t i = 0; i < g.value.size(); ++i)
      if (g.probability[i] > 0) best = std::max(best, std::fabs(to_double(g.value[i])));
    return best;
  }
  if (p == 2) return std::sqrt(to_double(second_moment(g)));
  double s = 0;
  for (std::size_t i = 0; i < g.value.size(); ++i)
    if (g.probability[i] != 0 && g.value[i] != 0) s += to_double(g.probability[i]) * abs_pow(g.value[i], p);
  return std::pow(s, 1.0 / p);
}

double lp_norm(const ArrayModel& model, const FunctionSpec& f, double p) { return lp_norm(function_table(model, f), p); }

Rational second_moment(const RandomVariableTable& g) {
  Rational s = 0;
  for (std::size_t i = 0; i < g.value.size(); ++i)
    if (g.probability[i] != 0) s += g.probability[i] * g.value[i] * g.value[i];
  return s;
}

RandomVariableTable shifted(RandomVariableTable g, const Rational& c) {
  for (std::size_t i = 0; i < g.value.size(); ++i)
    if (g.probability[i] != 0) g.value[i] -= c;
  return g;
}

Rational expectation_on(const ArrayModel& model, const RandomVariableTable& g, const EventQuery& C) {
  if (C.contradictory()) return 0;
  std::vector<Subset> U = g.coords;
  std::vector<std::pair<std::size_t, Symbol>> req;
  for (auto& [s, a] : C.constraints()) {
    model.check_index(s);
    model.check_symbol(a);
    auto it = std::find(U.begin(), U.end(), s);
    req.emplace_back(static_cast<std::size_t>(it - U.begin()), a);
    if (it == U.end()) U.push_back(s);
  }
  auto law = model.joint_law(U);
  ConfigCodec codec(model.alphabet_size(), U.size());
  std::uint64_t base = g.value.size();
  Rational s = 0;
  for (std::uint64_t i = 0; i < law.size(); ++i) {
    if (law[i] == 0) continue;
    bool ok = std::all_of(req.begin(), req.end(), [&](auto& r) { return codec.digit(i, r.first) == r.second; });
    if (ok) s += law[i] * g.value[i % base];
  }
  return s;
}

Rational concentration_probability(const RandomVariableTable& g, double eps) {
  if (std::isnan(eps) || eps < 0) throw DomainError("eps must be nonnegative");
  Rational e = std::isinf(eps) ? Rational(0) : rational_from_double(eps);
  Rational s = 0;
  for (std::size_t i = 0; i < g.value.size(); ++i)
    if (g.probability[i] != 0 && (std::isinf(eps) || abs(g.value[i]) <= e)) s += g.probability[i];
  return s;
}

Rational concentration_probability(const ArrayModel& model, const FunctionSpec& f, Subset J, double eps) {
  return concentration_probability(conditional_expectation(model, f, J), eps);
}

Rational tail_probability(const RandomVariableTable& g, const Rational& center, const Rational& t) {
  Rational s = 0;
  for (std::size_t i = 0; i < g.value.size(); ++i)
    if (g.probability[i] != 0 && abs(Rational(g.value[i] - center)) >= t) s += g.probability[i];
  return s;
}

DoobDecomposition doob_increments(const ArrayModel& model, const FunctionSpec& f, const std::vector<Subset>& blocks,
                                  const std::vector<double>& exponents, int workers) {
  if (blocks.empty()) throw DomainError("doob_increments needs at least one block");
  Subset seen;
  std::vector<Subset> cond;
  std::vector<std::size_t> prefix;
  for (auto b : blocks) {
    if (b.size() < model.d()) throw DomainError("every block needs at least d elements");
    if (b.max() > model.n()) throw DomainError("block outside [n]");
    if (!b.disjoint(seen)) throw DomainError("blocks must be disjoint");
    seen = seen | b;
    for (auto s : array_entries(b, model.d())) cond.push_back(s);
    prefix.push_back(cond.size());
  }
  auto local = as_local(model, f);
  auto jv = joint_with_values(model, local, cond);
  int m = model.alphabet_size();

  DoobDecomposition out;
  for (std::uint64_t i = 0; i < jv.law.size(); ++i)
    if (jv.law[i] != 0) out.mean += jv.law[i] * jv.fvals[i];

  std::size_t count = blocks.size();
  out.conditional.resize(count);
  parallel_for(count, workers, [&](std::uint64_t i) {
    out.conditional[i] = condition_prefix(jv, m, cond, prefix[i]);
    Subset J;
    for (std::size_t t = 0; t <= i; ++t) J = J | blocks[t];
    out.conditional[i].J = J;
  });
  out.increments.resize(count);
  parallel_for(count, workers, [&](std::uint64_t i) {
    auto d = out.conditional[i];
    std::uint64_t prev = i == 0 ? 1 : out.conditional[i - 1].value.size();
    for (std::uint64_t c = 0; c < d.value.size(); ++c) {
      if (d.probability[c] == 0) continue;
      d.value[c] -= i == 0 ? out.mean : out.conditional[i - 1].value[c % prev];
    }
    for (double p : exponents) out.increments[i].norms.push_back(lp_norm(d, p));
    out.increments[i].table = std::move(d);
  });
  return out;
}

std::vector<Subset> successive_blocks(Subset I, int k) {
  if (k < 1) throw DomainError("block size must be positive");
  auto e = I.elements();
  std::size_t m = e.size() / static_cast<std::size_t>(k);
  std::vector<Subset> out;
  for (std::size_t i = 0; i < m; ++i)
    out.push_back(Subset::from_vector(std::vector<int>(e.begin() + static_cast<std::ptrdiff_t>(i * k),
                                                       e.begin() + static_cast<std::ptrdiff_t>((i + 1) * k))));
  return out;
}

namespace {

constexpr double kSlack = 1e-12;

void check_p(double p) {
  if (!(p > 1 && p <= 2)) throw DomainError("p must lie in (1, 2]");
}

std::size_t argmin_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[best] - kSlack * std::max(1.0, v[best])) best = i;
  return best;
}

}  // namespace

bool SelectionReport::increment_bound_holds() const {
  return achieved <= increment_bound * (1 + kSlack) + kSlack;
}

bool SelectionReport::moment_bound_holds() const {
  return !moment_bound || conditional_deviation <= *moment_bound * (1 + kSlack) + kSlack;
}

SelectionReport energy_increment_select(const ArrayModel& model, const FunctionSpec& f, double p, Subset I, int k,
                                        std::optional<double> beta, std::optional<double> r, int workers) {
  check_p(p);
  if (I.empty() || I.max() > model.n()) throw DomainError("I must be a nonempty subset of [n]");
  if (k < model.d() || k > I.size() / 2) throw DomainError("k must satisfy d <= k <= |I|/2");
  SelectionReport rep;
  rep.p = p;
  rep.r = r.value_or((p + 1) / 2);
  if (!(rep.r >= 1 && rep.r < p)) throw DomainError("r must satisfy 1 <= r < p");
  rep.blocks = successive_blocks(I, k);
  auto doob = doob_increments(model, f, rep.blocks, {p}, workers);
  auto centered = shifted(function_table(model, f), doob.mean);
  rep.scale = lp_norm(centered, p);
  double m = static_cast<double>(rep.blocks.size());
  for (auto& inc : doob.increments) rep.increment_norms.push_back(rep.scale > 0 ? inc.norms[0] / rep.scale : 0.0);
  std::size_t best = argmin_first(rep.increment_norms);
  rep.i0 = static_cast<int>(best) + 1;
  rep.J = rep.blocks[best];
  rep.interval = is_interval(rep.J);
  rep.achieved = rep.increment_norms[best];
  rep.increment_bound = 1 / std::sqrt(m * (p - 1));
  auto cond = shifted(conditional_expectation(model, f, rep.J), doob.mean);
  rep.conditional_deviation = rep.scale > 0 ? lp_norm(cond, rep.r) / rep.scale : 0.0;
  if (beta) {
    if (*beta < 0) throw DomainError("beta must be nonnegative");
    rep.beta = beta;
    rep.moment_bound = std::sqrt(2.0 * k / I.size()) / std::sqrt(p - 1) + 10 * std::pow(*beta, 1 / rep.r - 1 / p);
  }
  return rep;
}

TheoremConstants theorem_constants(int d, int m, double p, double eps, int k) {
  check_p(p);
  if (!(eps > 0 && eps <= 1)) throw DomainError("eps must lie in (0, 1]");
  if (d < 1 || k < d) throw DomainError("need k >= d >= 1");
  if (m < 2) throw DomainError("need an alphabet of size at least 2");
  TheoremConstants c;
  double q = p - 1;
  c.log_beta = 10 / q * std::log(eps / 10);
  c.beta = std::exp(c.log_beta);
  double ell = 4.0 * k / (std::pow(eps, 4) * q);
  double rounded = std::round(ell);
  c.ell = std::fabs(ell - rounded) <= 1e-9 * std::max(1.0, ell) ? static_cast<long long>(rounded)
                                                                 : static_cast<long long>(std::ceil(ell));
  c.log_C_2d = 34.0 * k * k / (std::pow(eps, 8) * q * q);
  c.C_2d = std::exp(c.log_C_2d);
  auto log_gen = [&](double e) {
    return 24.0 * d * std::log(static_cast<double>(m)) * std::pow(static_cast<double>(k), d) /
           (std::pow(e, 4.0 * d) * std::pow(q, d));
  };
  c.log_C_gen = log_gen(eps);
  c.C_gen = std::exp(c.log_C_gen);
  c.c_dissoc = 0.25 * std::pow(eps, 2 * (p + 1) / p) * q;
  c.log_C_simult = log_gen(eps * eps * eps / 4);
  c.C_simult = std::exp(c.log_C_simult);
  return c;
}

bool DissociativityWitness::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const WitnessRow& r) { return r.holds; });
}

DissociativityWitness dissociativity_witness(const ArrayModel& model, int j, int k, int l,
                                             std::optional<std::vector<std::uint64_t>> atoms, double tolerance) {
  int d = model.d();
  if (j < d || k < d || j + k > l || l > model.n()) throw DomainError("need j, k >= d and j + k <= l <= n");
  Subset Jset = Subset::first(j);
  Subset K = Subset::interval(j + 1, j + k);
  DissociativityWitness w;
  w.spreadability = spreadability_defect(model, std::max(j, k)).value;
  w.spreadable_within_tolerance = to_double(w.spreadability) <= tolerance;

  if (!atoms) {
    auto mix = mixing_coefficient(model, Jset, K);
    auto* ev = std::get_if<EventPairWitness>(&mix.witness);
    atoms = ev ? ev->atoms_A : std::vector<std::uint64_t>{};
  }
  w.f = IndicatorLift{j, *atoms};

  auto eA = array_entries(Jset, d);
  auto eK = array_entries(K, d);
  std::vector<Subset> U = eA;
  U.insert(U.end(), eK.begin(), eK.end());
  auto law = model.joint_law(U);
  std::uint64_t sizeA = power(model.alphabet_size(), eA.size());
  std::uint64_t sizeB = law.size() / sizeA;
  std::vector<char> inA(sizeA, 0);
  for (auto a : *atoms) {
    if (a >= sizeA) throw DomainError("event atom out of range");
    inA[a] = 1;
  }
  std::vector<Rational> joint(sizeB), marg(sizeB);
  Rational pA = 0;
  for (std::uint64_t i = 0; i < law.size(); ++i) {
    if (law[i] == 0) continue;
    std::uint64_t a = i % sizeA, b = i / sizeA;
    marg[b] += law[i];
    if (inA[a]) {
      joint[b] += law[i];
      pA += law[i];
    }
  }
  for (std::uint64_t b = 0; b < sizeB; ++b) {
    Rational delta = joint[b] - pA * marg[b];
    if (delta > 0) {
      w.beta += delta;
      w.atoms_B.push_back(b);
    }
  }
  if (w.vacuous()) return w;

  std::uint64_t count = binomial(model.n(), l);
  require_capacity(static_cast<long double>(count), "index sets of size l");
  Rational half = w.beta / 2;
  Rational mean = function_table(model, w.f).mean();
  for_each_k_subset(Subset::first(model.n()), l, [&](Subset I) {
    auto g = conditional_expectation(model, w.f, I);
    WitnessRow row{I, tail_probability(g, mean, half), false};
    row.holds = row.tail >= half;
    w.rows.push_back(std::move(row));
  });
  return w;
}

SimultaneousReport simultaneous_select(const std::vector<Instance>& instances, double p, Subset I, int k,
                                       int workers) {
  check_p(p);
  if (instances.empty()) throw DomainError("simultaneous_select needs at least one instance");
  Rational total = 0;
  for (auto& inst : instances) {
    if (inst.weight < 0) throw DomainError("instance weights must be nonnegative");
    if (!inst.model) throw DomainError("instance without a model");
    total += inst.weight;
  }
  if (total != 1) throw DomainError("instance weights must sum to 1");
  SimultaneousReport rep;
  rep.blocks = successive_blocks(I, k);
  for (std::size_t v = 0; v < instances.size(); ++v) {
    auto& inst = instances[v];
    const std::string name = "instance " + std::to_string(v);
    if (k < inst.model->d() || k > I.size() / 2) throw DomainError(name + ": k must satisfy d <= k <= |I|/2");
    try {
      auto doob = doob_increments(*inst.model, inst.f, rep.blocks, {p}, workers);
      double scale = lp_norm(shifted(function_table(*inst.model, inst.f), doob.mean), p);
      std::vector<double> row;
      for (auto& inc : doob.increments) row.push_back(scale > 0 ? inc.norms[0] / scale : 0.0);
      rep.normalized.push_back(std::move(row));
    } catch (const CapacityError& e) {
      throw CapacityError(name + ": " + e.what(), e.required(), e.cap());
    } catch (const DomainError& e) {
      throw DomainError(name + ": " + e.what());
    }
  }
  std::size_t m = rep.blocks.size();
  rep.average_square.assign(m, 0.0);
  for (std::size_t v = 0; v < instances.size(); ++v)
    for (std::size_t i = 0; i < m; ++i)
      rep.average_square[i] += to_double(instances[v].weight) * rep.normalized[v][i] * rep.normalized[v][i];
  std::size_t best = argmin_first(rep.average_square);
  rep.i0 = static_cast<int>(best) + 1;
  double mq = static_cast<double>(m) * (p - 1);
  rep.threshold = std::pow(mq, -0.25);
  rep.guaranteed_weight = 1 - rep.threshold;
  for (std::size_t v = 0; v < instances.size(); ++v) {
    if (rep.normalized[v][best] <= rep.threshold * (1 + kSlack)) {
      rep.good.push_back(v);
      rep.good_weight += to_double(instances[v].weight);
    }
  }
  return rep;
}

namespace {

json subsets_json(const std::vector<Subset>& v) {
  json a = json::array();
  for (auto s : v) a.push_back(s.elements());
  return a;
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

json table_json(const RandomVariableTable& g) {
  json rows = json::array();
  ConfigCodec codec(g.alphabet, g.coords.size());
  for (std::uint64_t i = 0; i < g.value.size(); ++i) {
    if (g.probability[i] == 0) continue;
    rows.push_back({{"config", codec.decode(i)}, {"probability", to_string(g.probability[i])},
                    {"value", to_string(g.value[i])}});
  }
  return {{"J", g.J.elements()},
          {"conditioned", subsets_json(g.conditioned)},
          {"coords", subsets_json(g.coords)},
          {"mean", to_string(g.mean())},
          {"rows", rows}};
}

json selection_json(const SelectionReport& r) {
  return {{"blocks", subsets_json(r.blocks)},
          {"i0", r.i0},
          {"J", r.J.elements()},
          {"interval", r.interval},
          {"p", r.p},
          {"r", r.r},
          {"scale", r.scale},
          {"increment_norms", r.increment_norms},
          {"achieved", r.achieved},
          {"increment_bound", r.increment_bound},
          {"increment_bound_holds", r.increment_bound_holds()},
          {"conditional_deviation", r.conditional_deviation},
          {"beta", optional_json(r.beta)},
          {"moment_bound", optional_json(r.moment_bound)},
          {"moment_bound_holds", r.moment_bound_holds()}};
}

json constants_json(const TheoremConstants& c) {
  auto finite = [](double x) { return std::isfinite(x) ? json(x) : json("inf"); };
  return {{"beta", c.beta},          {"log_beta", c.log_beta},   {"ell", c.ell},
          {"C_2d", finite(c.C_2d)},  {"log_C_2d", c.log_C_2d},   {"C_gen", finite(c.C_gen)},
          {"log_C_gen", c.log_C_gen}, {"c_dissoc", c.c_dissoc},  {"C_simult", finite(c.C_simult)},
          {"log_C_simult", c.log_C_simult}};
}

json witness_json(const DissociativityWitness& w) {
  json rows = json::array();
  for (auto& r : w.rows) rows.push_back({{"I", r.I.elements()}, {"tail", to_string(r.tail)}, {"holds", r.holds}});
  auto* lift = std::get_if<IndicatorLift>(&w.f);
  return {{"j", lift ? lift->j : 0},
          {"atoms_A", lift ? lift->atoms : std::vector<std::uint64_t>{}},
          {"atoms_B", w.atoms_B},
          {"beta", to_string(w.beta)},
          {"vacuous", w.vacuous()},
          {"spreadability", to_string(w.spreadability)},
          {"spreadable_within_tolerance", w.spreadable_within_tolerance},
          {"all_hold", w.all_hold()},
          {"rows", rows}};
}

json simultaneous_json(const SimultaneousReport& r) {
  return {{"blocks", subsets_json(r.blocks)},
          {"i0", r.i0},
          {"average_square", r.average_square},
          {"normalized", r.normalized},
          {"good", r.good},
          {"threshold", r.threshold},
          {"good_weight", r.good_weight},
          {"guaranteed_weight", r.guaranteed_weight}};
}

}  // namespace arraylab
