#include "arraylab/propagation.hpp"

#include "arraylab/errors.hpp"
#include "arraylab/models.hpp"
#include "arraylab/slicing.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace arraylab {

using nlohmann::json;

namespace {

void check_parameters(double eta, double theta, int d, int n) {
  if (!(eta >= 0 && eta <= 1)) throw DomainError("eta must lie in [0, 1]");
  if (!(theta >= 0) || !std::isfinite(theta)) throw DomainError("theta must be finite and nonnegative");
  if (d < 1) throw DomainError("d must be positive");
  if (d == 1 && n < 2) throw DomainError("d = 1 needs n >= 2");
  if (d >= 2 && n < 4 * d) throw DomainError("d >= 2 needs n >= 4d");
}

constexpr double kNone = -std::numeric_limits<double>::infinity();

}  // namespace

double theta1(double eta, double theta, int d, int n) {
  return 1 / std::sqrt(static_cast<double>(n - 2 * d + 2)) + (std::ldexp(1.0, d) + 5) * std::sqrt(eta) +
         std::sqrt(theta);
}

double theta2(double eta, double theta, int d, int n) {
  return std::ldexp(1.0, d - 1) / (n - d + 1) + std::ldexp(1.0, d) * 3 * eta + theta;
}

double theta3(double eta, double theta, int d, int n) {
  double e = 1 / std::ldexp(1.0, d - 1);
  return (d - 1) / std::pow(static_cast<double>(n - 2 * d + 2), e) + (std::ldexp(1.0, d) + 5) * std::pow(eta, e) +
         std::pow(theta, e) + 3 * eta;
}

std::uint64_t gamma_k_limit(int d, int n) {
  if (d == 1) return static_cast<std::uint64_t>(n / 2);
  return binomial(n / 2, d);
}

int gamma_part_limit(int d, int n) { return (n - 2 * d) / 2; }

GammaTable gamma_table(double eta, double theta, int d, int n, int k_max) {
  check_parameters(eta, theta, d, n);
  if (k_max < 1 || static_cast<std::uint64_t>(k_max) > gamma_k_limit(d, n))
    throw DomainError("k must satisfy 1 <= k <= C(floor(n/2), d)");
  GammaTable t;
  t.eta = eta;
  t.theta = theta;
  t.d = d;
  t.n = n;
  t.k_max = k_max;

  if (d == 1) {
    double root = std::sqrt(1.0 / (n / 2) + theta);
    for (int k = 1; k <= k_max; ++k) {
      t.gamma.push_back((3 * k - 1) * eta + (k - 1) * root);
      t.profile.push_back({k});
    }
  } else {
    t.theta1 = theta1(eta, theta, d, n);
    t.theta2 = theta2(eta, theta, d, n);
    t.theta3 = theta3(eta, theta, d, n);
    int part_cap = static_cast<int>(std::min<std::uint64_t>(binomial((n - 2) / 2, d - 1), static_cast<std::uint64_t>(k_max)));
    auto sub1 = gamma_table(eta, t.theta1, d - 1, n - 1, part_cap);
    auto sub2 = gamma_table(eta, t.theta2, d - 1, n - 2, part_cap);
    double half = 1.0 / (n / 2);
    for (int k = 1; k <= part_cap; ++k) {
      double g1 = sub1.at(k) + (k + 1) * eta;
      double g2 = sub2.at(k);
      double g3 = 2 * g1 + g2 + k * t.theta3;
      t.gamma1.push_back(g1);
      t.gamma2.push_back(g2);
      t.gamma3.push_back(g3);
      t.gamma4.push_back(std::sqrt(g3 + half + (2 * k + 1) * eta) + 2 * eta);
    }
    int U = gamma_part_limit(d, n);
    if (U < 1) throw DomainError("no admissible compositions");
    // G[u][s]: best sum of gamma1 + gamma4 over u parts summing to s; from[u][s] the last part.
    std::vector<std::vector<double>> G(static_cast<std::size_t>(U), std::vector<double>(static_cast<std::size_t>(k_max) + 1, kNone));
    std::vector<std::vector<int>> from(G.size(), std::vector<int>(static_cast<std::size_t>(k_max) + 1, 0));
    G[0][0] = 0;
    for (std::size_t u = 1; u < G.size(); ++u)
      for (int s = 1; s <= k_max; ++s)
        for (int part = 1; part <= std::min(s, part_cap); ++part) {
          double prev = G[u - 1][static_cast<std::size_t>(s - part)];
          if (prev == kNone) continue;
          double v = prev + t.gamma1[static_cast<std::size_t>(part - 1)] + t.gamma4[static_cast<std::size_t>(part - 1)];
          if (v > G[u][static_cast<std::size_t>(s)]) {
            G[u][static_cast<std::size_t>(s)] = v;
            from[u][static_cast<std::size_t>(s)] = part;
          }
        }
    for (int k = 1; k <= k_max; ++k) {
      double best = kNone;
      int best_first = 0;
      std::size_t best_u = 0;
      for (int first = 1; first <= std::min(k, part_cap); ++first)
        for (std::size_t u = 0; u < G.size(); ++u) {
          double rest = G[u][static_cast<std::size_t>(k - first)];
          if (rest == kNone) continue;
          double v = t.gamma1[static_cast<std::size_t>(first - 1)] + rest;
          if (v > best) {
            best = v;
            best_first = first;
            best_u = u;
          }
        }
      if (best == kNone) throw DomainError("no admissible composition of k = " + std::to_string(k));
      std::vector<int> prof = {best_first};
      std::vector<int> tail;
      for (std::size_t u = best_u, s = static_cast<std::size_t>(k - best_first); u > 0; --u) {
        int part = from[u][s];
        tail.push_back(part);
        s -= static_cast<std::size_t>(part);
      }
      prof.insert(prof.end(), tail.rbegin(), tail.rend());
      t.gamma.push_back((k + 1) * eta + best);
      t.profile.push_back(std::move(prof));
    }
  }
  for (std::size_t i = 1; i < t.gamma.size(); ++i)
    if (t.gamma[i] < t.gamma[i - 1]) t.monotone = false;
  return t;
}

double gamma_value(double eta, double theta, int d, int n, int k) { return gamma_table(eta, theta, d, n, k).at(k); }

double closed_bound(int k, int d, int n, double eta, double theta) {
  check_parameters(eta, theta, d, n);
  if (theta > 1) throw DomainError("theta must lie in [0, 1]");
  if (k < 1) throw DomainError("k must be positive");
  double e = std::pow(4.0, -d);
  return 100.0 * k * std::ldexp(1.0, d) * (std::pow(static_cast<double>(n), -e) + std::pow(eta, e) + std::pow(theta, e));
}

double closed_bound_2d(int k, int n, double eta, double theta) {
  check_parameters(eta, theta, 2, n);
  if (k < 1) throw DomainError("k must be positive");
  return 400.0 * k * (std::pow(static_cast<double>(n), -1.0 / 16) + std::pow(eta, 1.0 / 16) + std::pow(theta, 1.0 / 16));
}

bool PropagationReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const PropagationRow& r) { return r.holds; });
}

PropagationReport verify_propagation(const ArrayModel& model, const std::vector<Symbol>& S, int k_max,
                                     const DefectOptions& opt) {
  int d = model.d(), n = model.n();
  if (d >= 2 && n < 4 * d) throw DomainError("verify_propagation needs n >= 4d");
  PropagationReport rep;
  rep.spreadability = spreadability_defect(model, default_spread_size(model), opt);
  rep.box = box_independence_defect(model, S, BoxMode::one_sided, opt);
  rep.eta = std::min(1.0, rep.spreadability.value_double());
  rep.theta = std::max(0.0, rep.box.value_double());
  auto table = gamma_table(rep.eta, rep.theta, d, n, k_max);
  auto defects = gamma_independence_defect(model, S, k_max, opt);
  int parts = gamma_part_limit(d, n);
  for (int k = 1; k <= k_max; ++k) {
    PropagationRow row;
    row.k = k;
    auto& r = defects[static_cast<std::size_t>(k - 1)];
    row.defect = r.value;
    row.gamma = table.at(k);
    row.holds = !r.capped && to_double(r.value) <= row.gamma * (1 + 1e-12);
    if (auto* w = std::get_if<FamilyWitness>(&r.witness); w && !w->family.empty()) {
      Subset ground = support_of(w->family);
      std::vector<Subset> local;
      for (auto s : w->family) local.push_back(compress(s, ground));
      row.witness_profile = slicing(local).profile;
      row.profile_within_parts = d == 1 || row.witness_profile.size() < 2 ||
                                 static_cast<int>(row.witness_profile.size()) <= parts;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

ModelPtr restrict_last(ModelPtr model) { return std::make_shared<RestrictedLast>(std::move(model)); }

ModelPtr doubling(ModelPtr model) { return std::make_shared<Doubled>(std::move(model)); }

namespace {

LemmaCheck measure_source(const ModelPtr& model, const std::vector<Symbol>& S, const DefectOptions& opt) {
  if (!model) throw DomainError("missing model");
  if (model->d() < 2) throw DomainError("derived arrays need d >= 2");
  if (model->n() < 2 * model->d()) throw DomainError("derived arrays need n >= 2d");
  LemmaCheck c;
  c.eta = spreadability_defect(*model, default_spread_size(*model), opt).value_double();
  c.theta = std::max(0.0, box_independence_defect(*model, S, BoxMode::one_sided, opt).value_double());
  return c;
}

}  // namespace

LemmaCheck check_restriction(const ModelPtr& model, const std::vector<Symbol>& S, const DefectOptions& opt) {
  auto c = measure_source(model, S, opt);
  auto derived = restrict_last(model);
  c.derived_defect = box_independence_defect(*derived, S, BoxMode::one_sided, opt).value;
  c.bound = theta1(c.eta, c.theta, model->d(), model->n());
  c.holds = to_double(c.derived_defect) <= c.bound * (1 + 1e-12);
  return c;
}

LemmaCheck check_doubling(const ModelPtr& model, const std::vector<Symbol>& S, const DefectOptions& opt) {
  auto c = measure_source(model, S, opt);
  auto derived = std::make_shared<Doubled>(model);
  std::vector<Symbol> diag;
  for (auto a : S) diag.push_back(derived->pair_symbol(a, a));
  c.derived_defect = box_independence_defect(*derived, diag, BoxMode::one_sided, opt).value;
  c.bound = theta2(c.eta, c.theta, model->d(), model->n());
  c.holds = to_double(c.derived_defect) <= c.bound * (1 + 1e-12);
  return c;
}

json gamma_json(const GammaTable& g) {
  return {{"eta", g.eta},       {"theta", g.theta},   {"d", g.d},           {"n", g.n},
          {"k_max", g.k_max},   {"theta1", g.theta1}, {"theta2", g.theta2}, {"theta3", g.theta3},
          {"gamma1", g.gamma1}, {"gamma2", g.gamma2}, {"gamma3", g.gamma3}, {"gamma4", g.gamma4},
          {"gamma", g.gamma},   {"profile", g.profile}, {"monotone", g.monotone}};
}

json propagation_json(const PropagationReport& r) {
  json rows = json::array();
  for (auto& row : r.rows)
    rows.push_back({{"k", row.k},
                    {"defect", to_string(row.defect)},
                    {"defect_double", to_double(row.defect)},
                    {"gamma", row.gamma},
                    {"holds", row.holds},
                    {"witness_profile", row.witness_profile},
                    {"profile_within_parts", row.profile_within_parts}});
  return {{"eta", r.eta},
          {"theta", r.theta},
          {"spreadability", report_json(r.spreadability)},
          {"box", report_json(r.box)},
          {"rows", rows},
          {"passed", r.passed()}};
}

json lemma_json(const LemmaCheck& c) {
  return {{"eta", c.eta},
          {"theta", c.theta},
          {"derived_defect", to_string(c.derived_defect)},
          {"bound", c.bound},
          {"holds", c.holds}};
}

}  // namespace arraylab
