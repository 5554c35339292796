#include "arraylab/models.hpp"

#include "arraylab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace arraylab {

namespace {

using json = nlohmann::json;

json rationals_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (auto& q : v) out.push_back(q.get_str());
  return out;
}

void check_law(const std::vector<Rational>& law, const char* what) {
  Rational total = 0;
  for (auto& q : law) {
    if (q < 0) throw DomainError(std::string(what) + ": negative probability");
    total += q;
  }
  if (total != 1) throw DomainError(std::string(what) + ": probabilities must sum to 1, got " + total.get_str());
}

Symbol draw(const std::vector<Rational>& law, Rng& rng) {
  double u = rng.uniform01();
  double acc = 0;
  for (std::size_t a = 0; a < law.size(); ++a) {
    acc += law[a].get_d();
    if (u < acc) return static_cast<Symbol>(a);
  }
  for (std::size_t a = law.size(); a-- > 0;)
    if (law[a] > 0) return static_cast<Symbol>(a);
  return 0;
}

std::vector<Symbol> fair_bits(std::uint64_t count, Rng& rng) {
  std::vector<Symbol> out(count);
  for (auto& x : out) x = rng.coin() ? 1 : 0;
  return out;
}

json tuples_json(const TupleTable& t) {
  json out = json::array();
  for (std::uint64_t idx = 0; idx < t.cells.size(); ++idx) {
    if (!t.cells[idx]) continue;
    json tup = json::array();
    std::uint64_t r = idx;
    for (int j = 0; j < t.arity; ++j) {
      tup.push_back(static_cast<int>(r % static_cast<std::uint64_t>(t.vertices)));
      r /= static_cast<std::uint64_t>(t.vertices);
    }
    out.push_back(tup);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- IidEntries

IidEntries::IidEntries(int n, int d, std::vector<Rational> symbol_law)
    : ArrayModel(n, d, static_cast<int>(symbol_law.size())), law_(std::move(symbol_law)) {
  check_law(law_, "iid_entries");
}

Rational IidEntries::do_probability(const EventQuery& q) const {
  Rational p = 1;
  for (auto& [s, a] : q.constraints()) p *= law_[static_cast<std::size_t>(a)];
  return p;
}

std::vector<Rational> IidEntries::do_joint_law(const std::vector<Subset>& coords) const {
  ConfigCodec codec(alphabet_size(), coords.size());
  std::vector<Rational> law(codec.size());
  for (std::uint64_t idx = 0; idx < codec.size(); ++idx) {
    Rational p = 1;
    for (Symbol a : codec.decode(idx)) p *= law_[static_cast<std::size_t>(a)];
    law[idx] = p;
  }
  return law;
}

std::vector<Symbol> IidEntries::sample(Rng& rng) const {
  std::vector<Symbol> out(entry_count());
  for (auto& x : out) x = draw(law_, rng);
  return out;
}

json IidEntries::to_json() const {
  return {{"kind", kind()}, {"n", n()}, {"d", d()}, {"law", rationals_json(law_)}};
}

// ---------------------------------------------------------------- DenseTable

DenseTable::DenseTable(int n, int d, int alphabet, std::vector<Rational> probabilities)
    : ArrayModel(n, d, alphabet), table_(std::move(probabilities)) {
  ConfigCodec codec(alphabet, entry_count());
  if (table_.size() != codec.size())
    throw DomainError("dense_table: expected " + std::to_string(codec.size()) + " probabilities");
  check_law(table_, "dense_table");
}

Rational DenseTable::do_probability(const EventQuery& q) const {
  DSubsetIndex index(n(), d());
  ConfigCodec codec(alphabet_size(), entry_count());
  std::vector<std::pair<std::size_t, Symbol>> pos;
  for (auto& [s, a] : q.constraints()) pos.emplace_back(index.rank(s), a);
  Rational p = 0;
  for (std::uint64_t idx = 0; idx < codec.size(); ++idx) {
    if (table_[idx] == 0) continue;
    bool ok = std::all_of(pos.begin(), pos.end(), [&](const auto& c) { return codec.digit(idx, c.first) == c.second; });
    if (ok) p += table_[idx];
  }
  return p;
}

std::vector<Rational> DenseTable::do_joint_law(const std::vector<Subset>& coords) const {
  DSubsetIndex index(n(), d());
  ConfigCodec codec(alphabet_size(), entry_count());
  ConfigCodec sub(alphabet_size(), coords.size());
  std::vector<std::size_t> pos;
  for (auto s : coords) pos.push_back(index.rank(s));
  std::vector<Rational> law(sub.size());
  for (std::uint64_t idx = 0; idx < codec.size(); ++idx)
    if (table_[idx] != 0) law[codec.project(idx, pos)] += table_[idx];
  return law;
}

std::vector<Symbol> DenseTable::sample(Rng& rng) const {
  ConfigCodec codec(alphabet_size(), entry_count());
  return codec.decode(static_cast<std::uint64_t>(draw(table_, rng)));
}

json DenseTable::to_json() const {
  return {{"kind", kind()}, {"n", n()}, {"d", d()}, {"alphabet", alphabet_size()},
          {"probabilities", rationals_json(table_)}};
}

// ---------------------------------------------------------------- GraphSampling

GraphSampling::GraphSampling(int n, TupleTable A) : ArrayModel(n, A.arity, 2), A_(std::move(A)) {
  added_ = A_.close_symmetric();
}

Rational GraphSampling::do_probability(const EventQuery& q) const {
  Subset sup = q.support();
  std::vector<TupleConstraint> cs;
  cs.reserve(q.size());
  for (auto& [s, a] : q.constraints()) {
    TupleConstraint c;
    for (int i : s.elements()) c.vars.push_back(sup.index_of(i));
    c.table = &A_;
    c.value = a == 1;
    cs.push_back(std::move(c));
  }
  return assignment_fraction(A_.vertices, sup.size(), cs);
}

std::vector<Rational> GraphSampling::do_joint_law(const std::vector<Subset>& coords) const {
  Subset sup = support_of(coords);
  int k = sup.size();
  int V = A_.vertices;
  long double states = std::pow(static_cast<long double>(V), static_cast<long double>(k));
  ConfigCodec codec(2, coords.size());
  if (states > static_cast<long double>(enumeration_cap())) return ArrayModel::do_joint_law(coords);
  std::vector<std::vector<int>> vars;
  for (auto s : coords) {
    std::vector<int> v;
    for (int i : s.elements()) v.push_back(sup.index_of(i));
    vars.push_back(std::move(v));
  }
  std::vector<std::uint64_t> tally(codec.size(), 0);
  std::vector<int> label(static_cast<std::size_t>(k), 0);
  for (;;) {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      std::uint64_t t = 0, p = 1;
      for (int v : vars[j]) {
        t += static_cast<std::uint64_t>(label[static_cast<std::size_t>(v)]) * p;
        p *= static_cast<std::uint64_t>(V);
      }
      if (A_.cells[t]) idx |= std::uint64_t{1} << j;
    }
    ++tally[idx];
    int j = 0;
    for (; j < k; ++j) {
      if (++label[static_cast<std::size_t>(j)] < V) break;
      label[static_cast<std::size_t>(j)] = 0;
    }
    if (j == k) break;
  }
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(V), static_cast<unsigned long>(k));
  std::vector<Rational> law(codec.size());
  for (std::uint64_t i = 0; i < codec.size(); ++i) {
    law[i] = Rational(Integer(static_cast<unsigned long>(tally[i])), den);
    law[i].canonicalize();
  }
  return law;
}

std::vector<Symbol> GraphSampling::evaluate(const std::vector<int>& labels) const {
  std::vector<Symbol> out;
  out.reserve(entry_count());
  for_each_k_subset(Subset::first(n()), d(), [&](Subset s) {
    std::vector<int> t;
    for (int i : s.elements()) t.push_back(labels[static_cast<std::size_t>(i - 1)]);
    out.push_back(A_.at(t) ? 1 : 0);
  });
  return out;
}

std::vector<Symbol> GraphSampling::sample(Rng& rng) const {
  std::vector<int> labels(static_cast<std::size_t>(n()));
  for (auto& x : labels) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(A_.vertices)));
  return evaluate(labels);
}

json GraphSampling::to_json() const {
  return {{"kind", kind()}, {"n", n()}, {"d", d()}, {"V", A_.vertices}, {"A", tuples_json(A_)}};
}

// ---------------------------------------------------------------- ClosedFormTwoDim

ClosedFormTwoDim::ClosedFormTwoDim(int n) : ArrayModel(n, 2, 2) {}

Rational ClosedFormTwoDim::latent_part(const EventQuery& q) {
  // union-find with parity: X_{ij} = 1 forces xi_i = xi_j, X_{ij} = 0 forces xi_i != xi_j
  std::map<int, std::pair<int, int>> node;  // vertex -> (parent, parity to parent)
  auto find = [&](auto&& self, int v) -> std::pair<int, int> {
    auto [p, par] = node[v];
    if (p == v) return {v, 0};
    auto [root, up] = self(self, p);
    node[v] = {root, par ^ up};
    return {root, par ^ up};
  };
  Subset sup = q.support();
  for (int v : sup.elements()) node[v] = {v, 0};
  int components = sup.size();
  for (auto& [s, a] : q.constraints()) {
    int i = s.min(), j = s.max();
    int want = a == 1 ? 0 : 1;
    auto [ri, pi] = find(find, i);
    auto [rj, pj] = find(find, j);
    if (ri == rj) {
      if ((pi ^ pj) != want) return 0;
      continue;
    }
    node[ri] = {rj, pi ^ pj ^ want};
    --components;
  }
  return pow2(components - sup.size());
}

Rational ClosedFormTwoDim::do_probability(const EventQuery& q) const {
  return Rational(1, 2) * pow2(-static_cast<long>(q.size())) + Rational(1, 2) * latent_part(q);
}

std::vector<Symbol> ClosedFormTwoDim::sample(Rng& rng) const {
  if (rng.coin()) return fair_bits(entry_count(), rng);
  auto xi = fair_bits(static_cast<std::uint64_t>(n()), rng);
  std::vector<Symbol> out;
  for_each_k_subset(Subset::first(n()), 2, [&](Subset s) {
    out.push_back(xi[static_cast<std::size_t>(s.min() - 1)] == xi[static_cast<std::size_t>(s.max() - 1)] ? 1 : 0);
  });
  return out;
}

json ClosedFormTwoDim::to_json() const { return {{"kind", kind()}, {"n", n()}}; }

// ---------------------------------------------------------------- HighDimSemiRandom

TupleTable HighDimSemiRandom::parity_lift(const TupleTable& A) {
  int V = A.vertices;
  int d = A.arity + 1;
  TupleTable H = TupleTable::empty(V, d);
  std::vector<int> v(static_cast<std::size_t>(d)), face(static_cast<std::size_t>(d - 1));
  for (std::uint64_t idx = 0; idx < H.cells.size(); ++idx) {
    std::uint64_t r = idx;
    for (auto& x : v) {
      x = static_cast<int>(r % static_cast<std::uint64_t>(V));
      r /= static_cast<std::uint64_t>(V);
    }
    int outside = 0;
    for (int i = 0; i < d; ++i) {
      std::size_t k = 0;
      for (int j = 0; j < d; ++j)
        if (j != i) face[k++] = v[static_cast<std::size_t>(j)];
      if (!A.at(face)) ++outside;
    }
    H.cells[idx] = (outside % 2 == 0) ? 1 : 0;
  }
  return H;
}

HighDimSemiRandom::HighDimSemiRandom(int n, TupleTable A)
    : ArrayModel(n, A.arity + 1, 2), A_(std::move(A)), latent_(n, parity_lift(A_)) {
  if (!A_.symmetric()) throw DomainError("appendix_a_highd: A must be symmetric");
}

Rational HighDimSemiRandom::do_probability(const EventQuery& q) const {
  return Rational(1, 2) * pow2(-static_cast<long>(q.size())) + Rational(1, 2) * latent_.probability(q);
}

std::vector<Rational> HighDimSemiRandom::do_joint_law(const std::vector<Subset>& coords) const {
  auto law = latent_.joint_law(coords);
  Rational uniform = pow2(-static_cast<long>(coords.size()));
  for (auto& p : law) p = Rational(1, 2) * uniform + Rational(1, 2) * p;
  return law;
}

std::vector<Symbol> HighDimSemiRandom::sample(Rng& rng) const {
  if (rng.coin()) return fair_bits(entry_count(), rng);
  return latent_.sample(rng);
}

json HighDimSemiRandom::to_json() const {
  return {{"kind", kind()}, {"n", n()}, {"d", d()}, {"V", A_.vertices}, {"A", tuples_json(A_)}};
}

// ---------------------------------------------------------------- Mixture

namespace {
const ArrayModel& first_component(const std::vector<std::pair<Rational, ModelPtr>>& parts) {
  if (parts.empty() || !parts.front().second) throw DomainError("mixture needs at least one component");
  return *parts.front().second;
}
}  // namespace

Mixture::Mixture(std::vector<std::pair<Rational, ModelPtr>> components)
    : ArrayModel(first_component(components).n(), first_component(components).d(),
                 first_component(components).alphabet_size()),
      parts_(std::move(components)) {
  Rational total = 0;
  for (auto& [w, m] : parts_) {
    if (!m) throw DomainError("mixture: null component");
    if (w < 0) throw DomainError("mixture: negative weight");
    if (m->n() != n() || m->d() != d() || m->alphabet_size() != alphabet_size())
      throw DomainError("mixture: components differ in (n, d, alphabet)");
    total += w;
  }
  if (total != 1) throw DomainError("mixture: weights must sum to 1");
}

Rational Mixture::do_probability(const EventQuery& q) const {
  Rational p = 0;
  for (auto& [w, m] : parts_)
    if (w != 0) p += w * m->probability(q);
  return p;
}

std::vector<Rational> Mixture::do_joint_law(const std::vector<Subset>& coords) const {
  std::vector<Rational> law;
  for (auto& [w, m] : parts_) {
    if (w == 0) continue;
    auto part = m->joint_law(coords);
    if (law.empty()) law.assign(part.size(), Rational(0));
    for (std::size_t i = 0; i < part.size(); ++i) law[i] += w * part[i];
  }
  return law;
}

std::vector<Symbol> Mixture::sample(Rng& rng) const {
  std::vector<Rational> weights;
  for (auto& part : parts_) weights.push_back(part.first);
  return parts_[static_cast<std::size_t>(draw(weights, rng))].second->sample(rng);
}

json Mixture::to_json() const {
  json comps = json::array();
  for (auto& [w, m] : parts_) comps.push_back({{"weight", w.get_str()}, {"model", m->to_json()}});
  return {{"kind", kind()}, {"components", comps}};
}

// ---------------------------------------------------------------- ProductArray

ProductArray::ProductArray(std::vector<Rational> p, int d)
    : ArrayModel(static_cast<int>(p.size()), d, 2), p_(std::move(p)) {
  for (auto& q : p_)
    if (q < 0 || q > 1) throw DomainError("product: parameters must lie in [0,1]");
}

Rational ProductArray::do_probability(const EventQuery& q) const {
  Subset forced;
  std::vector<Subset> zeros;
  for (auto& [s, a] : q.constraints()) {
    if (a == 1) forced = forced | s;
    else zeros.push_back(s);
  }
  Rational base = 1;
  for (int i : forced.elements()) base *= p_[static_cast<std::size_t>(i - 1)];
  if (base == 0) return 0;
  for (auto s : zeros)
    if (s.subset_of(forced)) return 0;
  Subset free = support_of(zeros) - forced;
  auto fv = free.elements();
  require_capacity(std::ldexp(1.0L, static_cast<int>(fv.size())), "product latent enumeration");
  Rational total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << fv.size()); ++mask) {
    Subset ones = forced;
    Rational w = 1;
    for (std::size_t j = 0; j < fv.size(); ++j) {
      const Rational& pi = p_[static_cast<std::size_t>(fv[j] - 1)];
      if ((mask >> j) & 1u) {
        ones = ones.with(fv[j]);
        w *= pi;
      } else {
        w *= 1 - pi;
      }
    }
    if (w == 0) continue;
    bool ok = std::none_of(zeros.begin(), zeros.end(), [&](Subset s) { return s.subset_of(ones); });
    if (ok) total += w;
  }
  return base * total;
}

std::vector<Rational> ProductArray::do_joint_law(const std::vector<Subset>& coords) const {
  Subset sup = support_of(coords);
  auto sv = sup.elements();
  require_capacity(std::ldexp(1.0L, static_cast<int>(sv.size())), "product latent enumeration");
  ConfigCodec codec(2, coords.size());
  std::vector<Rational> law(codec.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sv.size()); ++mask) {
    Rational w = 1;
    Subset ones;
    for (std::size_t j = 0; j < sv.size() && w != 0; ++j) {
      const Rational& pi = p_[static_cast<std::size_t>(sv[j] - 1)];
      if ((mask >> j) & 1u) {
        w *= pi;
        ones = ones.with(sv[j]);
      } else {
        w *= 1 - pi;
      }
    }
    if (w == 0) continue;
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < coords.size(); ++j)
      if (coords[j].subset_of(ones)) idx |= std::uint64_t{1} << j;
    law[idx] += w;
  }
  return law;
}

std::vector<Symbol> ProductArray::sample(Rng& rng) const {
  Subset ones;
  for (int i = 1; i <= n(); ++i)
    if (rng.bernoulli(p_[static_cast<std::size_t>(i - 1)].get_d())) ones = ones.with(i);
  std::vector<Symbol> out;
  for_each_k_subset(Subset::first(n()), d(), [&](Subset s) { out.push_back(s.subset_of(ones) ? 1 : 0); });
  return out;
}

json ProductArray::to_json() const { return {{"kind", kind()}, {"d", d()}, {"p", rationals_json(p_)}}; }

// ---------------------------------------------------------------- FixedSizeER

FixedSizeER::FixedSizeER(int n, int d, std::uint64_t ones) : ArrayModel(n, d, 2), k_(ones) {
  if (ones > entry_count()) throw DomainError("fixed_size_er: k exceeds C(n,d)");
  total_ = binomial_exact(entry_count(), k_);
}

Rational FixedSizeER::do_probability(const EventQuery& q) const {
  std::uint64_t o = 0, z = 0;
  for (auto& c : q.constraints()) (c.second == 1 ? o : z) += 1;
  std::uint64_t N = entry_count();
  if (o > k_ || (k_ - o) > N - o - z) return 0;
  Rational r(binomial_exact(N - o - z, k_ - o), total_);
  r.canonicalize();
  return r;
}

std::vector<Symbol> FixedSizeER::sample(Rng& rng) const {
  std::uint64_t N = entry_count();
  std::vector<std::uint64_t> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Symbol> out(N, 0);
  for (std::uint64_t i = 0; i < k_; ++i) {
    std::uint64_t j = i + rng.below(N - i);
    std::swap(perm[i], perm[j]);
    out[perm[i]] = 1;
  }
  return out;
}

json FixedSizeER::to_json() const { return {{"kind", kind()}, {"n", n()}, {"d", d()}, {"k", k_}}; }

// ---------------------------------------------------------------- RestrictedLast

namespace {
const ArrayModel& checked_source(const ModelPtr& m, int min_extra, const char* what) {
  if (!m) throw DomainError(std::string(what) + ": null source");
  if (m->d() < 2) throw DomainError(std::string(what) + ": source must have d >= 2");
  if (m->n() < m->d() + min_extra) throw DomainError(std::string(what) + ": source has too few indices");
  return *m;
}

std::vector<Symbol> entries_through(const ArrayModel& src, const std::vector<Symbol>& full, int n_small, int d_small,
                                    int extra) {
  DSubsetIndex index(src.n(), src.d());
  std::vector<Symbol> out;
  for_each_k_subset(Subset::first(n_small), d_small,
                    [&](Subset t) { out.push_back(full[index.rank(t.with(extra))]); });
  return out;
}
}  // namespace

RestrictedLast::RestrictedLast(ModelPtr source)
    : ArrayModel(checked_source(source, 1, "restrict_last").n() - 1, source->d() - 1, source->alphabet_size()),
      source_(std::move(source)) {}

Rational RestrictedLast::do_probability(const EventQuery& q) const {
  EventQuery lifted;
  for (auto& [t, a] : q.constraints()) lifted.require(lift(t), a);
  return source_->probability(lifted);
}

std::vector<Rational> RestrictedLast::do_joint_law(const std::vector<Subset>& coords) const {
  std::vector<Subset> lifted;
  for (auto t : coords) lifted.push_back(lift(t));
  return source_->joint_law(lifted);
}

std::vector<Symbol> RestrictedLast::sample(Rng& rng) const {
  return entries_through(*source_, source_->sample(rng), n(), d(), source_->n());
}

json RestrictedLast::to_json() const { return {{"kind", kind()}, {"source", source_->to_json()}}; }

// ---------------------------------------------------------------- Doubled

Doubled::Doubled(ModelPtr source)
    : ArrayModel(checked_source(source, 2, "doubling").n() - 2, source->d() - 1,
                 source->alphabet_size() * source->alphabet_size()),
      source_(std::move(source)) {}

Rational Doubled::do_probability(const EventQuery& q) const {
  int m = source_->alphabet_size();
  int N = source_->n();
  EventQuery lifted;
  for (auto& [t, c] : q.constraints()) {
    lifted.require(t.with(N - 1), c % m);
    lifted.require(t.with(N), c / m);
  }
  return source_->probability(lifted);
}

std::vector<Rational> Doubled::do_joint_law(const std::vector<Subset>& coords) const {
  // pair digit (a + m b) at place (m^2)^j is digit a at m^{2j} and b at m^{2j+1}
  int N = source_->n();
  std::vector<Subset> lifted;
  for (auto t : coords) {
    lifted.push_back(t.with(N - 1));
    lifted.push_back(t.with(N));
  }
  return source_->joint_law(lifted);
}

std::vector<Symbol> Doubled::sample(Rng& rng) const {
  auto full = source_->sample(rng);
  auto a = entries_through(*source_, full, n(), d(), source_->n() - 1);
  auto b = entries_through(*source_, full, n(), d(), source_->n());
  std::vector<Symbol> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = pair_symbol(a[i], b[i]);
  return out;
}

json Doubled::to_json() const { return {{"kind", kind()}, {"source", source_->to_json()}}; }

}  // namespace arraylab
