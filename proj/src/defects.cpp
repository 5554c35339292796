#include "arraylab/defects.hpp"

#include "arraylab/errors.hpp"
#include "arraylab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

namespace arraylab {

using nlohmann::json;

Rational total_variation(const std::vector<Rational>& p, const std::vector<Rational>& q) {
  if (p.size() != q.size()) throw DomainError("total_variation: laws of different sizes");
  Rational s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += abs(Rational(p[i] - q[i]));
  return s / 2;
}

namespace {

std::uint64_t budget(const DefectOptions& opt) {
  return opt.max_candidates ? opt.max_candidates : enumeration_cap();
}

// ------------------------------------------------------------------ bilinear maximization

struct Group {
  std::vector<Rational> vec;
  std::vector<std::size_t> members;
};

// Merges rows that are positive multiples of each other (their sum replaces them); drops zero rows.
std::vector<Group> merge_rows(const std::vector<Group>& rows) {
  std::map<std::vector<Rational>, std::size_t> key_of;
  std::vector<Group> out;
  for (auto& g : rows) {
    auto it = std::find_if(g.vec.begin(), g.vec.end(), [](const Rational& x) { return x != 0; });
    if (it == g.vec.end()) continue;
    Rational scale = abs(*it);
    std::vector<Rational> key(g.vec.size());
    for (std::size_t j = 0; j < g.vec.size(); ++j) key[j] = g.vec[j] / scale;
    auto [pos, fresh] = key_of.emplace(std::move(key), out.size());
    if (fresh) {
      out.push_back(g);
    } else {
      auto& tgt = out[pos->second];
      for (std::size_t j = 0; j < g.vec.size(); ++j) tgt.vec[j] += g.vec[j];
      tgt.members.insert(tgt.members.end(), g.members.begin(), g.members.end());
    }
  }
  return out;
}

std::vector<Group> transpose(const std::vector<Group>& rows, const std::vector<std::vector<std::size_t>>& col_members) {
  std::vector<Group> cols(col_members.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    cols[j].members = col_members[j];
    cols[j].vec.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) cols[j].vec[i] = rows[i].vec[j];
  }
  return cols;
}

std::vector<std::vector<std::size_t>> members_of(const std::vector<Group>& g) {
  std::vector<std::vector<std::size_t>> out;
  for (auto& x : g) out.push_back(x.members);
  return out;
}

// Exact value for row set `pick` (indices into rows) and the optimal column set.
std::pair<Rational, std::vector<std::size_t>> exact_for_rows(const std::vector<Group>& rows,
                                                            const std::vector<std::size_t>& pick, std::size_t ncols) {
  std::vector<Rational> v(ncols, Rational(0));
  for (auto i : pick)
    for (std::size_t j = 0; j < ncols; ++j) v[j] += rows[i].vec[j];
  Rational pos = 0, neg = 0;
  for (auto& x : v) (x > 0 ? pos : neg) += x;
  bool take_pos = pos >= -neg;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < ncols; ++j)
    if (take_pos ? v[j] > 0 : v[j] < 0) cols.push_back(j);
  return {take_pos ? pos : Rational(-neg), cols};
}

}  // namespace

BilinearMax bilinear_event_max(const std::vector<std::vector<Rational>>& M) {
  BilinearMax out;
  if (M.empty() || M[0].empty()) return out;
  std::size_t R0 = M.size(), C0 = M[0].size();
  for (auto& row : M)
    if (row.size() != C0) throw DomainError("bilinear_event_max: ragged matrix");

  std::vector<Group> rows(R0);
  for (std::size_t i = 0; i < R0; ++i) rows[i] = {M[i], {i}};
  std::vector<std::vector<std::size_t>> col_members(C0);
  for (std::size_t j = 0; j < C0; ++j) col_members[j] = {j};

  // Alternate row and column merging until both stabilize.
  bool transposed = false;
  for (;;) {
    std::size_t before_r = rows.size(), before_c = col_members.size();
    rows = merge_rows(rows);
    auto cols = merge_rows(transpose(rows, col_members));
    col_members = members_of(cols);
    auto row_members = members_of(rows);
    rows = transpose(cols, row_members);
    if (rows.size() == before_r && col_members.size() == before_c) break;
  }
  if (rows.empty()) {
    out.method = "zero";
    return out;
  }
  if (rows.size() > col_members.size()) {
    auto cols = transpose(rows, col_members);
    col_members = members_of(rows);
    rows = std::move(cols);
    transposed = true;
  }
  std::size_t R = rows.size(), C = col_members.size();

  bool balanced = true;
  for (std::size_t j = 0; j < C && balanced; ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < R; ++i) s += rows[i].vec[j];
    balanced = (s == 0);
  }

  std::vector<std::size_t> best_rows;
  std::vector<std::size_t> best_cols;
  Rational best = -1;
  auto consider = [&](const std::vector<std::size_t>& pick) {
    auto [val, cols] = exact_for_rows(rows, pick, C);
    if (val > best) {
      best = val;
      best_rows = pick;
      best_cols = std::move(cols);
    }
  };

  std::size_t free_rows = balanced ? R - 1 : R;
  long double work = std::ldexp(1.0L, static_cast<int>(std::min<std::size_t>(free_rows, 200))) * static_cast<long double>(C);
  if (free_rows <= 26 && work <= std::ldexp(1.0L, 30)) {
    // Gray-code walk over row subsets in floating point; near-best masks are re-evaluated exactly.
    std::vector<std::vector<double>> rd(R, std::vector<double>(C));
    double scale = 0;
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) {
        rd[i][j] = to_double(rows[i].vec[j]);
        scale = std::max(scale, std::abs(rd[i][j]));
      }
    double tol = 1e-9 * std::max(scale, 1e-300) * static_cast<double>(R);
    std::vector<double> v(C, 0.0);
    std::uint64_t mask = 0;
    double fbest = 0;
    std::vector<std::uint64_t> candidates{0};
    std::uint64_t total = std::uint64_t{1} << free_rows;
    for (std::uint64_t g = 1; g < total; ++g) {
      int bit = std::countr_zero(g);
      mask ^= std::uint64_t{1} << bit;
      double sign = ((mask >> bit) & 1u) ? 1.0 : -1.0;
      auto& row = rd[static_cast<std::size_t>(bit)];
      double pos = 0, neg = 0;
      for (std::size_t j = 0; j < C; ++j) {
        v[j] += sign * row[j];
        (v[j] > 0 ? pos : neg) += v[j];
      }
      double f = std::max(pos, -neg);
      if (f > fbest + tol) {
        fbest = f;
        candidates.clear();
        candidates.push_back(mask);
      } else if (f >= fbest - tol && candidates.size() < 4096) {
        candidates.push_back(mask);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    for (auto m : candidates) {
      std::vector<std::size_t> pick;
      for (std::size_t i = 0; i < free_rows; ++i)
        if ((m >> i) & 1u) pick.push_back(i);
      consider(pick);
    }
    out.method = "exhaustive-merged";
  } else {
    // Alternating best responses from several starts; a lower bound.
    auto improve = [&](std::vector<std::size_t> pick) {
      for (int iter = 0; iter < 100; ++iter) {
        auto [val, cols] = exact_for_rows(rows, pick, C);
        if (val > best) {
          best = val;
          best_rows = pick;
          best_cols = cols;
        }
        std::vector<Rational> u(R, Rational(0));
        for (std::size_t i = 0; i < R; ++i)
          for (auto j : cols) u[i] += rows[i].vec[j];
        Rational pos = 0, neg = 0;
        for (auto& x : u) (x > 0 ? pos : neg) += x;
        std::vector<std::size_t> next;
        for (std::size_t i = 0; i < R; ++i)
          if (pos >= -neg ? u[i] > 0 : u[i] < 0) next.push_back(i);
        if (next == pick) break;
        pick = std::move(next);
      }
    };
    for (std::size_t i = 0; i < std::min<std::size_t>(R, 64); ++i) improve({i});
    out.exact = false;
    out.method = "alternating-lower-bound";
  }

  out.value = best < 0 ? Rational(0) : best;
  std::vector<std::size_t> rsel, csel;
  for (auto i : best_rows) rsel.insert(rsel.end(), rows[i].members.begin(), rows[i].members.end());
  for (auto j : best_cols) csel.insert(csel.end(), col_members[j].begin(), col_members[j].end());
  std::sort(rsel.begin(), rsel.end());
  std::sort(csel.begin(), csel.end());
  if (transposed) std::swap(rsel, csel);
  out.rows = std::move(rsel);
  out.cols = std::move(csel);
  return out;
}

// ------------------------------------------------------------------ spreadability

int default_spread_size(const ArrayModel& model) {
  return std::max(model.d(), std::min(model.n(), model.n() / 2 + 1));
}

DefectReport spreadability_defect(const ArrayModel& model, int size_cap, const DefectOptions& opt) {
  int n = model.n(), d = model.d();
  if (size_cap < d || size_cap > n) throw DomainError("spreadability_defect: need d <= size_cap <= n");
  DefectReport rep;
  rep.method = "exact-subarray-laws";
  rep.value = 0;
  bool have = false;
  for (int m = d; m <= size_cap; ++m) {
    auto Js = k_subsets(Subset::first(n), m);
    ConfigCodec codec(model.alphabet_size(), binomial(m, d));
    require_capacity(static_cast<long double>(codec.size()) * static_cast<long double>(Js.size()),
                     "subarray laws of size " + std::to_string(m));
    std::vector<std::vector<Rational>> laws(Js.size());
    parallel_for(Js.size(), opt.workers, [&](std::uint64_t i) { laws[i] = subarray_law(model, Js[i]); });
    std::map<std::vector<Rational>, std::size_t> distinct;
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < laws.size(); ++i)
      if (distinct.emplace(laws[i], i).second) reps.push_back(i);
    Rational best_m = 0;
    for (std::size_t a = 0; a < reps.size(); ++a)
      for (std::size_t b = a + 1; b < reps.size(); ++b) {
        Rational tv = total_variation(laws[reps[a]], laws[reps[b]]);
        if (tv > best_m) best_m = tv;
        if (tv > rep.value || !have) {
          rep.value = tv;
          rep.witness = SubsetPairWitness{Js[reps[a]], Js[reps[b]]};
          have = true;
        }
      }
    if (!have && Js.size() >= 2) {
      rep.witness = SubsetPairWitness{Js[0], Js[1]};
      have = true;
    }
    rep.per_size[m] = best_m;
    rep.scanned += Js.size() * (Js.size() - 1) / 2;
  }
  return rep;
}

// ------------------------------------------------------------------ box independence

namespace {

class MarginalCache {
 public:
  explicit MarginalCache(const ArrayModel& m) : model_(m) {}
  Rational get(Subset s, Symbol a) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find({s, a});
      if (it != cache_.end()) return it->second;
    }
    Rational p = model_.probability(EventQuery{{s, a}});
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(std::make_pair(s, a), p);
    return p;
  }

 private:
  const ArrayModel& model_;
  std::mutex mu_;
  std::map<std::pair<Subset, Symbol>, Rational> cache_;
};

Rational box_gap(const ArrayModel& model, MarginalCache& marg, const BoxSpec& box, Symbol a) {
  auto members = box.members();
  Rational prod = 1;
  for (auto s : members) prod *= marg.get(s, a);
  return model.probability(EventQuery::all_equal(members, a)) - prod;
}

void check_symbols(const ArrayModel& model, const std::vector<Symbol>& S) {
  if (S.empty()) throw DomainError("symbol set S must be nonempty");
  for (auto a : S) model.check_symbol(a);
}

}  // namespace

DefectReport box_independence_defect(const ArrayModel& model, const std::vector<Symbol>& S, BoxMode mode,
                                     const DefectOptions& opt) {
  int n = model.n(), d = model.d();
  if (n < 2 * d) throw DomainError("box_independence_defect: need n >= 2d");
  check_symbols(model, S);
  auto boxes = enumerate_boxes(n, d, BoxKind::full);
  MarginalCache marg(model);
  std::vector<Rational> best(boxes.size());
  std::vector<Symbol> best_sym(boxes.size());
  parallel_for(boxes.size(), opt.workers, [&](std::uint64_t i) {
    bool first = true;
    for (auto a : S) {
      Rational g = box_gap(model, marg, boxes[i], a);
      Rational v = mode == BoxMode::absolute ? Rational(abs(g)) : g;
      if (first || v > best[i]) {
        best[i] = v;
        best_sym[i] = a;
        first = false;
      }
    }
  });
  DefectReport rep;
  rep.method = mode == BoxMode::absolute ? "exact-boxes-absolute" : "exact-boxes-one-sided";
  std::size_t arg = 0;
  for (std::size_t i = 1; i < boxes.size(); ++i)
    if (best[i] > best[arg]) arg = i;
  rep.value = best[arg];
  if (mode == BoxMode::one_sided && rep.value < 0) rep.value = 0;
  rep.witness = BoxWitness{boxes[arg], best_sym[arg]};
  rep.scanned = boxes.size() * S.size();
  return rep;
}

// ------------------------------------------------------------------ gamma independence

std::vector<DefectReport> gamma_independence_defect(const ArrayModel& model, const std::vector<Symbol>& S, int k_max,
                                                    const DefectOptions& opt) {
  int n = model.n(), d = model.d();
  int half = n / 2;
  if (k_max < 1) throw DomainError("gamma_independence_defect: k_max must be positive");
  if (half < d || static_cast<std::uint64_t>(k_max) > binomial(half, d))
    throw DomainError("gamma_independence_defect: need k_max <= C(floor(n/2), d)");
  check_symbols(model, S);
  auto ents = DSubsetIndex(n, d).all();
  MarginalCache marg(model);
  std::uint64_t limit = budget(opt);
  std::atomic<std::uint64_t> spent{0};
  std::atomic<bool> capped{false};

  struct Best {
    Rational value = -1;
    FamilyWitness w;
    std::uint64_t scanned = 0;
  };
  // One slot per (first entry, k); merged in entry order for determinism.
  std::vector<std::vector<Best>> slots(ents.size(), std::vector<Best>(static_cast<std::size_t>(k_max)));

  parallel_for(ents.size(), opt.workers, [&](std::uint64_t root) {
    std::vector<Subset> fam{ents[root]};
    auto& mine = slots[root];
    std::function<void(Subset, std::size_t)> visit = [&](Subset support, std::size_t next) {
      if (capped.load()) return;
      std::size_t k = fam.size();
      // all assignments in S^k
      std::vector<std::size_t> pick(k, 0);
      for (;;) {
        if (spent.fetch_add(1) >= limit) {
          capped = true;
          return;
        }
        EventQuery q;
        Rational prod = 1;
        std::vector<Symbol> assign(k);
        for (std::size_t i = 0; i < k; ++i) {
          assign[i] = S[pick[i]];
          q.require(fam[i], assign[i]);
          prod *= marg.get(fam[i], assign[i]);
        }
        Rational v = abs(Rational(model.probability(q) - prod));
        auto& slot = mine[k - 1];
        ++slot.scanned;
        if (v > slot.value) {
          slot.value = v;
          slot.w = FamilyWitness{fam, assign};
        }
        std::size_t j = 0;
        for (; j < k; ++j) {
          if (++pick[j] < S.size()) break;
          pick[j] = 0;
        }
        if (j == k) break;
      }
      if (static_cast<int>(k) == k_max) return;
      for (std::size_t e = next; e < ents.size(); ++e) {
        Subset u = support | ents[e];
        if (u.size() > half) continue;
        fam.push_back(ents[e]);
        visit(u, e + 1);
        fam.pop_back();
        if (capped.load()) return;
      }
    };
    if (ents[root].size() <= half) visit(ents[root], root + 1);
  });

  std::vector<DefectReport> out(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    auto& rep = out[static_cast<std::size_t>(k - 1)];
    rep.method = "exhaustive-families";
    rep.capped = capped.load();
    Rational best = -1;
    for (auto& row : slots) {
      auto& s = row[static_cast<std::size_t>(k - 1)];
      rep.scanned += s.scanned;
      if (s.scanned && s.value > best) {
        best = s.value;
        rep.witness = s.w;
      }
    }
    rep.value = best < 0 ? Rational(0) : best;
  }
  return out;
}

// ------------------------------------------------------------------ dissociativity and mixing

DefectReport mixing_coefficient(const ArrayModel& model, Subset J, Subset K) {
  int d = model.d();
  if (!J.disjoint(K)) throw DomainError("mixing_coefficient: J and K must be disjoint");
  if (J.size() < d || K.size() < d) throw DomainError("mixing_coefficient: need |J|, |K| >= d");
  if (J.max() > model.n() || K.max() > model.n()) throw DomainError("mixing_coefficient: index outside [n]");
  auto cJ = array_entries(J, d);
  auto cK = array_entries(K, d);
  std::vector<Subset> coords = cJ;
  coords.insert(coords.end(), cK.begin(), cK.end());
  auto law = model.joint_law(coords);
  ConfigCodec codecJ(model.alphabet_size(), cJ.size());
  ConfigCodec codecK(model.alphabet_size(), cK.size());
  std::uint64_t RA = codecJ.size(), RB = codecK.size();
  std::vector<Rational> pa(RA, Rational(0)), pb(RB, Rational(0));
  for (std::uint64_t b = 0; b < RB; ++b)
    for (std::uint64_t a = 0; a < RA; ++a) {
      const auto& p = law[a + RA * b];
      pa[a] += p;
      pb[b] += p;
    }
  std::vector<std::vector<Rational>> M(RA, std::vector<Rational>(RB));
  for (std::uint64_t a = 0; a < RA; ++a)
    for (std::uint64_t b = 0; b < RB; ++b) M[a][b] = law[a + RA * b] - pa[a] * pb[b];
  auto bm = bilinear_event_max(M);
  DefectReport rep;
  rep.value = bm.value;
  rep.method = bm.method;
  rep.capped = !bm.exact;
  rep.scanned = 1;
  EventPairWitness w{J, K, {}, {}};
  for (auto i : bm.rows) w.atoms_A.push_back(i);
  for (auto j : bm.cols) w.atoms_B.push_back(j);
  rep.witness = std::move(w);
  return rep;
}

DefectReport dissociativity_defect(const ArrayModel& model, int l, const DefectOptions& opt) {
  int n = model.n(), d = model.d();
  if (l < 2 * d || l > n) throw DomainError("dissociativity_defect: need 2d <= l <= n");
  // F_J grows with J, so only pairs with |J| + |K| = l matter.
  std::vector<std::pair<Subset, Subset>> pairs;
  for (auto W : k_subsets(Subset::first(n), l)) {
    auto el = W.elements();
    for (int j = d; j <= l - d; ++j) {
      Subset J, K;
      for (int i = 0; i < l; ++i) (i < j ? J : K) = (i < j ? J : K).with(el[static_cast<std::size_t>(i)]);
      pairs.emplace_back(J, K);
    }
  }
  if (pairs.size() > budget(opt))
    throw CapacityError("dissociativity_defect: too many (J, K) pairs", static_cast<long double>(pairs.size()),
                        budget(opt));
  std::vector<DefectReport> reps(pairs.size());
  parallel_for(pairs.size(), opt.workers,
               [&](std::uint64_t i) { reps[i] = mixing_coefficient(model, pairs[i].first, pairs[i].second); });
  DefectReport out;
  std::size_t arg = 0;
  bool exact = true;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].value > reps[arg].value) arg = i;
    exact = exact && !reps[i].capped;
    int size = pairs[i].first.size();
    auto it = out.per_size.find(size);
    if (it == out.per_size.end() || reps[i].value > it->second) out.per_size[size] = reps[i].value;
  }
  out.value = reps[arg].value;
  out.witness = reps[arg].witness;
  out.scanned = pairs.size();
  out.capped = !exact;
  out.method = exact ? "exact-event-max" : "event-max-with-lower-bounds";
  return out;
}

// ------------------------------------------------------------------ witnesses

Rational reevaluate(const ArrayModel& model, const DefectReport& report, BoxMode mode) {
  return std::visit(
      [&](const auto& w) -> Rational {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return 0;
        } else if constexpr (std::is_same_v<T, SubsetPairWitness>) {
          return total_variation(subarray_law(model, w.J), subarray_law(model, w.K));
        } else if constexpr (std::is_same_v<T, BoxWitness>) {
          MarginalCache marg(model);
          Rational g = box_gap(model, marg, w.box, w.symbol);
          if (mode == BoxMode::absolute) return abs(g);
          return g < 0 ? Rational(0) : g;
        } else if constexpr (std::is_same_v<T, FamilyWitness>) {
          EventQuery q;
          Rational prod = 1;
          for (std::size_t i = 0; i < w.family.size(); ++i) {
            q.require(w.family[i], w.assignment[i]);
            prod *= model.probability(EventQuery{{w.family[i], w.assignment[i]}});
          }
          return abs(Rational(model.probability(q) - prod));
        } else {
          int d = model.d();
          auto cJ = array_entries(w.J, d);
          auto cK = array_entries(w.K, d);
          std::vector<Subset> coords = cJ;
          coords.insert(coords.end(), cK.begin(), cK.end());
          auto law = model.joint_law(coords);
          std::uint64_t RA = ConfigCodec(model.alphabet_size(), cJ.size()).size();
          std::uint64_t RB = ConfigCodec(model.alphabet_size(), cK.size()).size();
          std::vector<char> inA(RA, 0), inB(RB, 0);
          for (auto a : w.atoms_A) inA.at(a) = 1;
          for (auto b : w.atoms_B) inB.at(b) = 1;
          Rational pA = 0, pB = 0, pAB = 0;
          for (std::uint64_t b = 0; b < RB; ++b)
            for (std::uint64_t a = 0; a < RA; ++a) {
              const auto& p = law[a + RA * b];
              if (inA[a]) pA += p;
              if (inB[b]) pB += p;
              if (inA[a] && inB[b]) pAB += p;
            }
          return abs(Rational(pAB - pA * pB));
        }
      },
      report.witness);
}

json witness_json(const Witness& w) {
  auto subsets = [](const std::vector<Subset>& v) {
    json a = json::array();
    for (auto s : v) a.push_back(s.elements());
    return a;
  };
  return std::visit(
      [&](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, SubsetPairWitness>) {
          return {{"type", "subset_pair"}, {"J", x.J.elements()}, {"K", x.K.elements()}};
        } else if constexpr (std::is_same_v<T, BoxWitness>) {
          return {{"type", "box"}, {"box", subsets(x.box.parts)}, {"symbol", x.symbol}};
        } else if constexpr (std::is_same_v<T, FamilyWitness>) {
          return {{"type", "family"}, {"family", subsets(x.family)}, {"assignment", x.assignment}};
        } else {
          return {{"type", "event_pair"}, {"J", x.J.elements()}, {"K", x.K.elements()},
                  {"atoms_A", x.atoms_A}, {"atoms_B", x.atoms_B}};
        }
      },
      w);
}

json report_json(const DefectReport& r) {
  json per = json::object();
  for (auto& [k, v] : r.per_size) per[std::to_string(k)] = {{"exact", to_string(v)}, {"value", to_double(v)}};
  json out = {{"value", r.value_double()}, {"exact", to_string(r.value)}, {"witness", witness_json(r.witness)},
              {"scanned", r.scanned}, {"capped", r.capped}, {"method", r.method}};
  if (!r.per_size.empty()) out["per_size"] = per;
  return out;
}

}  // namespace arraylab
