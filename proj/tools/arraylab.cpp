#include "arraylab/concentration.hpp"
#include "arraylab/constructions.hpp"
#include "arraylab/defects.hpp"
#include "arraylab/errors.hpp"
#include "arraylab/io.hpp"
#include "arraylab/models.hpp"
#include "arraylab/propagation.hpp"
#include "arraylab/quasirandom.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

using namespace arraylab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFinding = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::uint64_t cap = 0;
  std::string format;
  double tolerance = 1e-9;
  int workers = 1;

  std::uint64_t require_seed(const std::string& what) const {
    if (!seed_opt || seed_opt->count() == 0) throw UsageError(what + " is randomized and needs --seed");
    return seed;
  }
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(parse_rational(tok));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (int i : parse_subset(text).elements()) out.push_back(i);
  return out;
}

std::vector<Symbol> parse_symbols(const std::string& text) {
  std::vector<Symbol> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v < 0) throw UsageError("bad symbol '" + tok + "'");
    out.push_back(static_cast<Symbol>(v));
  }
  if (out.empty()) throw UsageError("symbol set S is empty");
  return out;
}

const char* kModelHelp =
    "Model kinds: appendix-a-2d (--n), appendix-a-highd (--d --V --target-eps --attempts --n, seeded), product (--probs --d), "
    "fixed-size-er (--n --d --ones), iid (--n --d --law), random-graph (--V --edge-prob --d --n, seeded), "
    "complete-graph (--V --d --n), disjoint-cliques (--sizes --n), edge-list (--edges --V --d --n), or a model spec "
    "JSON file.";

const char* kFamilyHelp =
    "Family sources: --builtin everything|empty|triangle|contains-K4|edge-parity|edge-count>=t|random:p (seeded), "
    "--graphs FILE (edge-list blocks separated by blank lines), --bitset FILE (2^C(n,2) bits, little-endian).";

struct ModelArgs {
  std::string model;
  std::optional<int> n;
  int d = 0;
  std::string probs = "1/2";
  std::uint64_t ones = 0;
  std::string law = "1/2,1/2";
  int V = 0;
  double edge_prob = 0.5;
  std::string sizes;
  std::string edges;
  double eps = 0.25;
  int attempts = 8;

  void attach(CLI::App* sub) {
    sub->add_option("--model", model, "Model kind or spec file")->required();
    sub->add_option("--n", n, "Number of indices");
    sub->add_option("--d", d, "Dimension (default 2, 3 for appendix-a-highd)");
    sub->add_option("--probs", probs, "Bernoulli parameters for product (one value or a comma list)");
    sub->add_option("--ones", ones, "Number of ones for fixed-size-er");
    sub->add_option("--law", law, "Symbol law for iid");
    sub->add_option("--V", V, "Vertex count");
    sub->add_option("--edge-prob", edge_prob, "Edge probability for random-graph");
    sub->add_option("--sizes", sizes, "Clique sizes for disjoint-cliques");
    sub->add_option("--edges", edges, "Edge-list file (1-based vertices)");
    sub->add_option("--target-eps", eps, "Target epsilon for appendix-a-highd");
    sub->add_option("--attempts", attempts, "Search attempts for appendix-a-highd");
  }

  int dim(int fallback = 2) const { return d > 0 ? d : fallback; }

  int need_n() const {
    if (!n) throw UsageError("model '" + model + "' needs --n");
    return *n;
  }

  std::optional<HypergraphSpec> hypergraph(const Globals& g) const {
    if (model == "random-graph") {
      if (V < 1) throw UsageError("random-graph needs --V");
      return random_hypergraph(V, dim(), edge_prob, g.require_seed("random-graph"));
    }
    if (model == "complete-graph") {
      if (V < 1) throw UsageError("complete-graph needs --V");
      return complete_hypergraph(V, dim());
    }
    if (model == "disjoint-cliques") {
      if (sizes.empty()) throw UsageError("disjoint-cliques needs --sizes");
      return disjoint_cliques(parse_int_list(sizes));
    }
    if (model == "edge-list") {
      if (edges.empty()) throw UsageError("edge-list needs --edges");
      return parse_edge_list(read_file(edges), dim(), V);
    }
    return std::nullopt;
  }

  ModelPtr build(const Globals& g, json* extra = nullptr) const {
    if (auto h = hypergraph(g)) return from_hypergraph(*h, need_n());
    if (model == "appendix-a-2d") return appendix_a_2d(need_n());
    if (model == "product") {
      auto p = parse_rational_list(probs);
      if (n && p.size() == 1) p.assign(static_cast<std::size_t>(*n), p[0]);
      if (n && static_cast<int>(p.size()) != *n) throw UsageError("--probs must list one value or n values");
      return product_array(std::move(p), dim());
    }
    if (model == "fixed-size-er") return fixed_size_er(need_n(), dim(), ones);
    if (model == "iid") return iid_entries(need_n(), dim(), parse_rational_list(law));
    if (model == "appendix-a-highd") {
      int dd = dim(3);
      if (V < 2) throw UsageError("appendix-a-highd needs an even --V");
      auto search = random_symmetric_set(dd, V, eps, g.require_seed("appendix-a-highd"), attempts);
      if (extra)
        *extra = {{"achieved_eps", search.achieved_eps},
                  {"achieved_exact", to_string(search.achieved_exact)},
                  {"met_target", search.met_target},
                  {"attempts_used", search.attempts_used},
                  {"checked_pairs", search.checked_pairs}};
      return appendix_a_highd(dd, search, need_n());
    }
    if (std::filesystem::exists(model)) {
      json spec;
      try {
        spec = json::parse(read_file(model));
      } catch (const json::parse_error& e) {
        throw DomainError("model spec '" + model + "' is not valid JSON: " + e.what());
      }
      return model_from_json(spec, n);
    }
    throw UsageError("unknown model '" + model + "'. " + kModelHelp);
  }
};

struct FamilyArgs {
  int n = 0;
  std::string builtin;
  std::string graphs;
  std::string bitset;

  void attach(CLI::App* sub) {
    sub->add_option("--n", n, "Vertex count")->required();
    sub->add_option("--builtin", builtin, "Built-in property");
    sub->add_option("--graphs", graphs, "Graph list file");
    sub->add_option("--bitset", bitset, "Bitset dump file");
  }

  GraphFamily build(const Globals& g) const {
    int given = !builtin.empty() + !graphs.empty() + !bitset.empty();
    if (given != 1) throw UsageError(std::string("give exactly one family source. ") + kFamilyHelp);
    if (!graphs.empty()) return parse_graph_list(read_file(graphs), n);
    if (!bitset.empty()) return GraphFamily::from_bytes(n, read_file(bitset));
    std::uint64_t seed = builtin.rfind("random:", 0) == 0 ? g.require_seed("random family") : 0;
    return builtin_family(builtin, n, seed);
  }

  json describe(const GraphFamily& A) const {
    return {{"n", A.n()},
            {"source", !builtin.empty() ? builtin : !graphs.empty() ? graphs : bitset},
            {"representation", A.explicit_bits() ? "bitset" : "predicate"},
            {"evaluation_cost", A.cost()}};
  }
};

json envelope(const std::string& command, const std::string& method) {
  return {{"schema", report_schema_version()}, {"command", command}, {"method", method}};
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

bool wants_csv(const Globals& g, bool default_csv) {
  if (g.format.empty()) return default_csv;
  if (g.format == "csv") return true;
  if (g.format == "json") return false;
  throw UsageError("--format must be json or csv");
}

void json_only(const Globals& g, const std::string& command) {
  if (wants_csv(g, false)) throw UsageError(command + " has no CSV form");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact toolkit for finite exchangeable random arrays.", "arraylab"};
  app.footer(std::string(kModelHelp) + "\n" + kFamilyHelp);
  app.require_subcommand(1);
  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "Seed for randomized paths");
  app.add_option("--cap", g.cap, "Enumeration cap override");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tolerance", g.tolerance, "Slack for theorem-check comparisons");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag_callback("--version", [] {
    std::cout << "arraylab report schema " << report_schema_version() << "\n";
    throw CLI::Success();
  });

  std::function<int()> action;

  // construct
  ModelArgs construct_m;
  std::string construct_out;
  auto* construct = app.add_subcommand("construct", "Materialize a model to a spec file");
  construct_m.attach(construct);
  construct->add_option("--output", construct_out, "Write the spec here as well");
  construct->callback([&] {
    action = [&] {
      json_only(g, "construct");
      json extra;
      auto m = construct_m.build(g, &extra);
      auto spec = model_spec_json(*m);
      if (!construct_out.empty()) {
        std::ofstream out(construct_out);
        if (!out) throw DomainError("cannot write '" + construct_out + "'");
        out << spec.dump(2) << "\n";
      }
      auto r = envelope("construct", "exact-rational");
      r["model"] = spec;
      if (!extra.is_null()) r["search"] = extra;
      emit_json(r);
      return kExitOk;
    };
  });

  // sample
  ModelArgs sample_m;
  std::uint64_t sample_count = 1;
  auto* sample = app.add_subcommand("sample", "Draw seeded configurations");
  sample_m.attach(sample);
  sample->add_option("--count", sample_count, "Number of draws");
  sample->callback([&] {
    action = [&] {
      json_only(g, "sample");
      auto seed = g.require_seed("sample");
      auto m = sample_m.build(g);
      Rng rng(seed);
      json draws = json::array();
      for (std::uint64_t i = 0; i < sample_count; ++i) draws.push_back(m->sample(rng));
      json entries = json::array();
      for (auto s : array_entries(Subset::first(m->n()), m->d())) entries.push_back(s.elements());
      auto r = envelope("sample", "exact-sampler");
      r["model"] = model_spec_json(*m);
      r["seed"] = seed;
      r["entries"] = entries;
      r["samples"] = draws;
      emit_json(r);
      return kExitOk;
    };
  });

  // defects
  auto* defects = app.add_subcommand("defects", "Exact defect audits");
  defects->require_subcommand(1);
  ModelArgs def_m;
  std::optional<int> spread_cap;
  std::string box_mode = "one-sided", symbols = "1", mix_J, mix_K;
  int gamma_kmax = 4, dissoc_l = 4;
  auto defect_action = [&](const std::string& which) {
    return [&, which] {
      action = [&, which] {
        json_only(g, "defects");
        auto m = def_m.build(g);
        DefectOptions opt;
        opt.workers = g.workers;
        auto r = envelope("defects " + which, "exact-rational");
        r["model"] = model_spec_json(*m);
        if (which == "spread") {
          r["size_cap"] = spread_cap.value_or(default_spread_size(*m));
          r["report"] = report_json(spreadability_defect(*m, spread_cap.value_or(default_spread_size(*m)), opt));
        } else if (which == "box") {
          auto mode = box_mode == "absolute" ? BoxMode::absolute : BoxMode::one_sided;
          r["mode"] = box_mode;
          r["S"] = parse_symbols(symbols);
          r["report"] = report_json(box_independence_defect(*m, parse_symbols(symbols), mode, opt));
        } else if (which == "gamma") {
          json rows = json::array();
          int k = 1;
          for (auto& rep : gamma_independence_defect(*m, parse_symbols(symbols), gamma_kmax, opt)) {
            auto row = report_json(rep);
            row["k"] = k++;
            rows.push_back(row);
          }
          r["S"] = parse_symbols(symbols);
          r["rows"] = rows;
        } else if (which == "dissoc") {
          r["l"] = dissoc_l;
          r["report"] = report_json(dissociativity_defect(*m, dissoc_l, opt));
        } else {
          if (mix_J.empty() || mix_K.empty()) throw UsageError("mixing needs --J and --K");
          r["report"] = report_json(mixing_coefficient(*m, parse_index_set(mix_J), parse_index_set(mix_K)));
        }
        emit_json(r);
        return kExitOk;
      };
    };
  };
  auto* d_spread = defects->add_subcommand("spread", "Spreadability defect");
  def_m.attach(d_spread);
  d_spread->add_option("--size-cap", spread_cap, "Largest subarray size");
  d_spread->callback(defect_action("spread"));
  auto* d_box = defects->add_subcommand("box", "Box-independence defect");
  def_m.attach(d_box);
  d_box->add_option("--mode", box_mode, "one-sided or absolute")->check(CLI::IsMember({"one-sided", "absolute"}));
  d_box->add_option("--S", symbols, "Symbol set, comma separated");
  d_box->callback(defect_action("box"));
  auto* d_gamma = defects->add_subcommand("gamma", "Gamma-independence defects for k = 1..kmax");
  def_m.attach(d_gamma);
  d_gamma->add_option("--kmax", gamma_kmax, "Largest family size");
  d_gamma->add_option("--S", symbols, "Symbol set, comma separated");
  d_gamma->callback(defect_action("gamma"));
  auto* d_dissoc = defects->add_subcommand("dissoc", "Dissociativity defect");
  def_m.attach(d_dissoc);
  d_dissoc->add_option("--l", dissoc_l, "Bound on |J| + |K|");
  d_dissoc->callback(defect_action("dissoc"));
  auto* d_mixing = defects->add_subcommand("mixing", "Mixing coefficient of two index sets");
  def_m.attach(d_mixing);
  d_mixing->add_option("--J", mix_J, "First index set, e.g. 1,2 or 1..3");
  d_mixing->add_option("--K", mix_K, "Second index set");
  d_mixing->callback(defect_action("mixing"));

  // concentrate
  ModelArgs conc_m;
  std::string conc_function, conc_monomial, conc_I;
  double conc_p = 2;
  std::optional<double> conc_eps, conc_beta, conc_r;
  int conc_k = 1;
  auto* conc = app.add_subcommand("concentrate", "Energy-increment block selection");
  conc_m.attach(conc);
  conc->add_option("--function", conc_function, "Function spec JSON file");
  conc->add_option("--monomial", conc_monomial, "Centered monomial, e.g. 1,2;1,3");
  conc->add_option("--p", conc_p, "Exponent p > 1");
  conc->add_option("--eps", conc_eps, "Accuracy for the theorem constants");
  conc->add_option("--k", conc_k, "Block size");
  conc->add_option("--I", conc_I, "Index interval, e.g. 1..8 (default [n])");
  conc->add_option("--beta", conc_beta, "Dissociativity level for the moment bound");
  conc->add_option("--r", conc_r, "Lower exponent r (default (p+1)/2)");
  conc->callback([&] {
    action = [&] {
      json_only(g, "concentrate");
      auto m = conc_m.build(g);
      if (conc_function.empty() == conc_monomial.empty()) throw UsageError("give exactly one of --function, --monomial");
      FunctionSpec f = conc_function.empty() ? centered_monomial(*m, parse_subset_list(conc_monomial))
                                             : function_from_json(*m, json::parse(read_file(conc_function)));
      Subset I = conc_I.empty() ? Subset::first(m->n()) : parse_index_set(conc_I);
      auto sel = energy_increment_select(*m, f, conc_p, I, conc_k, conc_beta, conc_r, g.workers);
      bool inc_ok = sel.achieved <= sel.increment_bound + g.tolerance;
      bool mom_ok = !sel.moment_bound || sel.conditional_deviation <= *sel.moment_bound + g.tolerance;
      auto r = envelope("concentrate", "exact-float");
      r["model"] = model_spec_json(*m);
      r["selection"] = selection_json(sel);
      r["increment_bound_holds"] = inc_ok;
      if (sel.moment_bound) r["moment_bound_holds"] = mom_ok;
      if (conc_eps) r["constants"] = constants_json(theorem_constants(m->d(), m->alphabet_size(), conc_p, *conc_eps, conc_k));
      emit_json(r);
      return inc_ok && mom_ok ? kExitOk : kExitFinding;
    };
  });

  // gamma-table
  int gt_d = 1, gt_n = 2, gt_kmax = 1;
  double gt_eta = 0, gt_theta = 0;
  auto* gt = app.add_subcommand("gamma-table", "Gamma recursion with the closed-form bound");
  gt->add_option("--d", gt_d, "Dimension")->required();
  gt->add_option("--n", gt_n, "Index count")->required();
  gt->add_option("--eta", gt_eta, "Spreadability level")->required();
  gt->add_option("--theta", gt_theta, "Box-independence level")->required();
  gt->add_option("--kmax", gt_kmax, "Largest k")->required();
  gt->callback([&] {
    action = [&] {
      auto t = gamma_table(gt_eta, gt_theta, gt_d, gt_n, gt_kmax);
      std::vector<double> bound;
      for (int k = 1; k <= gt_kmax; ++k)
        bound.push_back(gt_theta <= 1 ? closed_bound(k, gt_d, gt_n, gt_eta, gt_theta) : std::nan(""));
      bool dominated = true;
      for (int k = 1; k <= gt_kmax; ++k)
        if (!std::isnan(bound[static_cast<std::size_t>(k - 1)]) && bound[static_cast<std::size_t>(k - 1)] + g.tolerance < t.at(k))
          dominated = false;
      if (wants_csv(g, true)) {
        std::cout << "d,n,eta,theta,k,gamma_k,closed_bound,slack\n";
        for (int k = 1; k <= gt_kmax; ++k) {
          double b = bound[static_cast<std::size_t>(k - 1)];
          std::cout << gt_d << "," << gt_n << "," << num(gt_eta) << "," << num(gt_theta) << "," << k << "," << num(t.at(k))
                    << "," << num(b) << "," << num(b - t.at(k)) << "\n";
        }
      } else {
        auto r = envelope("gamma-table", "exact-float");
        r["table"] = gamma_json(t);
        json cb = json::array();
        for (double b : bound) cb.push_back(std::isnan(b) ? json(nullptr) : json(b));
        r["closed_bound"] = cb;
        r["dominated"] = dominated;
        emit_json(r);
      }
      return dominated ? kExitOk : kExitFinding;
    };
  });

  // family
  auto* family = app.add_subcommand("family", "Quasirandom graph families");
  family->require_subcommand(1);
  FamilyArgs fam;
  std::string fam_U = "1,2,3,4", fam_out;
  std::uint64_t fam_samples = 100000;
  int fam_k = 3;
  auto needs_sampling = [](const GraphFamily& A, int free_bits) {
    return !A.explicit_bits() && std::ldexp(1.0L, free_bits) > static_cast<long double>(enumeration_cap());
  };
  auto* f_gamma = family->add_subcommand("gamma", "Four-edge extension probability for one U");
  fam.attach(f_gamma);
  f_gamma->add_option("--U", fam_U, "Four vertices, e.g. 1,2,3,4");
  f_gamma->add_option("--samples", fam_samples, "Monte Carlo samples for predicate families");
  f_gamma->callback([&] {
    action = [&] {
      json_only(g, "family gamma");
      auto A = fam.build(g);
      SamplingOptions opt;
      opt.samples = fam_samples;
      if (needs_sampling(A, edge_count(A.n()) - 6)) opt.seed = g.require_seed("sampled family_gamma");
      auto res = family_gamma(A, parse_subset(fam_U), opt);
      auto r = envelope("family gamma", res.method);
      r["family"] = fam.describe(A);
      r["report"] = family_gamma_json(res);
      emit_json(r);
      return kExitOk;
    };
  });
  auto* f_theta = family->add_subcommand("theta-audit", "Per-U excesses and theta*");
  fam.attach(f_theta);
  f_theta->callback([&] {
    action = [&] {
      auto A = fam.build(g);
      if (needs_sampling(A, edge_count(A.n()))) throw UsageError("theta-audit needs an exactly enumerable family");
      auto a = theta_quasirandom_audit(A, g.workers);
      if (wants_csv(g, false)) {
        std::cout << "U,gamma,excess\n";
        for (std::size_t i = 0; i < a.gammas.size(); ++i)
          std::cout << a.gammas[i].U.to_string() << "," << to_string(a.gammas[i].exact) << "," << to_string(a.excess[i]) << "\n";
        std::cout << "theta*," << to_string(a.theta) << ",\n";
        return kExitOk;
      }
      auto r = envelope("family theta-audit", a.method);
      r["family"] = fam.describe(A);
      r["report"] = theta_audit_json(a);
      emit_json(r);
      return kExitOk;
    };
  });
  auto* f_smash = family->add_subcommand("smash", "Search for W with all single-edge extensions inside K");
  fam.attach(f_smash);
  f_smash->add_option("--k", fam_k, "Clique size")->required();
  f_smash->callback([&] {
    action = [&] {
      json_only(g, "family smash");
      auto A = fam.build(g);
      auto r = envelope("family smash", "exhaustive-scan");
      r["family"] = fam.describe(A);
      r["k"] = fam_k;
      r["report"] = smash_json(smash_search(A, fam_k, g.workers));
      emit_json(r);
      return kExitOk;
    };
  });
  auto* f_inv = family->add_subcommand("invariance", "Closure under vertex permutations");
  fam.attach(f_inv);
  f_inv->callback([&] {
    action = [&] {
      json_only(g, "family invariance");
      auto A = fam.build(g);
      auto r = envelope("family invariance", "exhaustive-scan");
      r["family"] = fam.describe(A);
      r["report"] = invariance_json(isomorphic_invariant_check(A));
      emit_json(r);
      return kExitOk;
    };
  });
  auto* f_dump = family->add_subcommand("dump", "Write the family as a bitset file");
  fam.attach(f_dump);
  f_dump->add_option("--output", fam_out, "Destination file")->required();
  f_dump->callback([&] {
    action = [&] {
      json_only(g, "family dump");
      auto A = fam.build(g);
      std::ofstream out(fam_out, std::ios::binary);
      if (!out) throw DomainError("cannot write '" + fam_out + "'");
      out << A.to_bytes();
      auto r = envelope("family dump", "exact-rational");
      r["family"] = fam.describe(A);
      r["density"] = to_string(A.density());
      r["bytes"] = (A.graphs() + 7) / 8;
      emit_json(r);
      return kExitOk;
    };
  });

  // verify-propagation
  ModelArgs vp_m;
  std::string vp_S = "1";
  int vp_kmax = 4;
  bool vp_lemmas = false;
  auto* vp = app.add_subcommand("verify-propagation", "Check gamma-independence defects against gamma_k");
  vp_m.attach(vp);
  vp->add_option("--S", vp_S, "Symbol set");
  vp->add_option("--kmax", vp_kmax, "Largest k");
  vp->add_flag("--lemmas", vp_lemmas, "Also check the restriction and doubling bounds");
  vp->callback([&] {
    action = [&] {
      json_only(g, "verify-propagation");
      auto m = vp_m.build(g);
      DefectOptions opt;
      opt.workers = g.workers;
      auto S = parse_symbols(vp_S);
      auto rep = verify_propagation(*m, S, vp_kmax, opt);
      bool ok = true;
      for (auto& row : rep.rows)
        if (to_double(row.defect) > row.gamma + g.tolerance) ok = false;
      auto r = envelope("verify-propagation", "exact-rational");
      r["model"] = model_spec_json(*m);
      r["report"] = propagation_json(rep);
      if (vp_lemmas) {
        auto rc = check_restriction(m, S, opt);
        auto dc = check_doubling(m, S, opt);
        ok = ok && to_double(rc.derived_defect) <= rc.bound + g.tolerance && to_double(dc.derived_defect) <= dc.bound + g.tolerance;
        r["restriction"] = lemma_json(rc);
        r["doubling"] = lemma_json(dc);
      }
      r["passed"] = ok;
      emit_json(r);
      return ok ? kExitOk : kExitFinding;
    };
  });

  // box-uniformity
  ModelArgs bu_m;
  auto* bu = app.add_subcommand("box-uniformity", "Box norm of a graph against the box defect of its sampled array");
  bu_m.attach(bu);
  bu->callback([&] {
    action = [&] {
      json_only(g, "box-uniformity");
      auto h = bu_m.hypergraph(g);
      if (!h) throw UsageError("box-uniformity needs a graph model (random-graph, complete-graph, disjoint-cliques, edge-list)");
      auto a = box_uniformity_audit(*h, bu_m.n.value_or(2 * h->d));
      bool ok = a.theta <= a.part_i_bound + g.tolerance && a.rho <= a.part_ii_bound + g.tolerance;
      auto r = envelope("box-uniformity", "exact-float");
      r["graph"] = {{"V", h->vertices}, {"d", h->d}, {"edges", h->edge_count()}};
      r["report"] = box_audit_json(a);
      r["passed"] = ok;
      emit_json(r);
      return ok ? kExitOk : kExitFinding;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  std::optional<CapGuard> guard;
  if (g.cap > 0) guard.emplace(g.cap);
  try {
    return action ? action() : kExitUsage;
  } catch (const CapacityError& e) {
    std::cerr << json{{"schema", report_schema_version()}, {"error", "capacity"}, {"message", e.what()},
                      {"required", static_cast<double>(e.required())}, {"cap", e.cap()}}.dump()
              << "\n";
  } catch (const UsageError& e) {
    std::cerr << json{{"schema", report_schema_version()}, {"error", "usage"}, {"message", e.what()}}.dump() << "\n";
  } catch (const DomainError& e) {
    std::cerr << json{{"schema", report_schema_version()}, {"error", "domain"}, {"message", e.what()}}.dump() << "\n";
  } catch (const json::exception& e) {
    std::cerr << json{{"schema", report_schema_version()}, {"error", "domain"}, {"message", e.what()}}.dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << json{{"schema", report_schema_version()}, {"error", "internal"}, {"message", e.what()}}.dump() << "\n";
  }
  return kExitUsage;
}
