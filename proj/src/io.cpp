#include "arraylab/io.hpp"

#include "arraylab/constructions.hpp"
#include "arraylab/errors.hpp"
#include "arraylab/models.hpp"
#include "arraylab/propagation.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace arraylab {

using nlohmann::json;

std::string report_schema_version() { return kSchemaVersion; }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  throw DomainError("expected a rational, got " + j.dump());
}

std::vector<Rational> rationals_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("expected an array of rationals");
  std::vector<Rational> out;
  for (auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

namespace {

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::string cleaned;
  for (char c : text) cleaned += (c == ',' || c == '{' || c == '}' || c == '(' || c == ')') ? ' ' : c;
  std::istringstream in(cleaned);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw DomainError("bad integer '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

Subset subset_from_ints(const std::vector<int>& v) {
  for (int i : v)
    if (i < 1 || i > kMaxGround) throw DomainError("index " + std::to_string(i) + " outside 1..63");
  return Subset::from_vector(v);
}

Subset subset_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("expected an index list");
  return subset_from_ints(j.get<std::vector<int>>());
}

std::vector<Subset> family_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("expected a list of index lists");
  std::vector<Subset> out;
  for (auto& s : j) out.push_back(subset_from_json(s));
  return out;
}

TupleTable tuples_from_json(const json& j, int vertices, int arity) {
  if (vertices < 1) throw DomainError("V must be positive");
  if (!j.is_array()) throw DomainError("A must be a list of tuples");
  auto t = TupleTable::empty(vertices, arity);
  for (auto& tup : j) {
    auto v = tup.get<std::vector<int>>();
    if (static_cast<int>(v.size()) != arity) throw DomainError("tuple " + tup.dump() + " has the wrong arity");
    for (int x : v)
      if (x < 0 || x >= vertices) throw DomainError("tuple " + tup.dump() + " leaves [0, V)");
    t.cells[t.index(v)] = 1;
  }
  return t;
}

int need_int(const json& spec, const char* key, std::optional<int> fallback = std::nullopt) {
  if (spec.contains(key)) return spec.at(key).get<int>();
  if (fallback) return *fallback;
  throw DomainError(std::string("model spec needs '") + key + "'");
}

}  // namespace

Subset parse_subset(const std::string& text) { return subset_from_ints(parse_ints(text)); }

std::vector<Subset> parse_subset_list(const std::string& text) {
  std::vector<Subset> out;
  std::string cur;
  auto flush = [&] {
    if (cur.find_first_not_of(" \t,") != std::string::npos) out.push_back(parse_subset(cur));
    cur.clear();
  };
  bool braces = text.find('{') != std::string::npos;
  for (char c : text) {
    if (c == ';' || (braces && c == '}')) {
      flush();
      continue;
    }
    if (braces && c == '{') {
      flush();
      continue;
    }
    cur += c;
  }
  flush();
  return out;
}

Subset parse_index_set(const std::string& text) {
  if (auto dots = text.find(".."); dots != std::string::npos) {
    auto lo = parse_ints(text.substr(0, dots)), hi = parse_ints(text.substr(dots + 2));
    if (lo.size() != 1 || hi.size() != 1 || lo[0] < 1 || hi[0] > kMaxGround) throw DomainError("bad index range '" + text + "'");
    return Subset::interval(lo[0], hi[0]);
  }
  return parse_subset(text);
}

ModelPtr model_from_json(const json& spec, std::optional<int> n_override) {
  if (!spec.is_object() || !spec.contains("kind")) throw DomainError("model spec needs a 'kind'");
  auto kind = spec.at("kind").get<std::string>();
  for (auto& c : kind)
    if (c == '-') c = '_';
  std::optional<int> n = n_override;
  if (!n && spec.contains("n")) n = spec.at("n").get<int>();
  try {
    if (kind == "appendix_a_2d") return appendix_a_2d(need_int(spec, "n", n));
    if (kind == "iid_entries") return iid_entries(need_int(spec, "n", n), need_int(spec, "d"), rationals_from_json(spec.at("law")));
    if (kind == "dense_table")
      return std::make_shared<DenseTable>(need_int(spec, "n", n), need_int(spec, "d"), need_int(spec, "alphabet"),
                                          rationals_from_json(spec.at("probabilities")));
    if (kind == "graph_sampling") {
      int d = need_int(spec, "d", 2);
      return std::make_shared<GraphSampling>(need_int(spec, "n", n), tuples_from_json(spec.at("A"), need_int(spec, "V"), d));
    }
    if (kind == "hypergraph") {
      HypergraphSpec h{need_int(spec, "V"), need_int(spec, "d", 2), {}};
      for (auto& e : spec.at("edges")) {
        auto v = e.get<std::vector<int>>();
        for (auto& x : v) {
          if (x < 1 || x > h.vertices) throw DomainError("hypergraph edge " + e.dump() + " leaves [1, V]");
          --x;
        }
        if (static_cast<int>(v.size()) != h.d) throw DomainError("hypergraph edge " + e.dump() + " has the wrong size");
        h.add_edge(v);
      }
      return from_hypergraph(h, need_int(spec, "n", n));
    }
    if (kind == "appendix_a_highd") {
      int d = need_int(spec, "d");
      return std::make_shared<HighDimSemiRandom>(need_int(spec, "n", n), tuples_from_json(spec.at("A"), need_int(spec, "V"), d - 1));
    }
    if (kind == "product") {
      auto p = rationals_from_json(spec.at("p"));
      if (n && p.size() == 1) p.assign(static_cast<std::size_t>(*n), p[0]);
      if (n && static_cast<int>(p.size()) != *n) throw DomainError("product: p has " + std::to_string(p.size()) + " entries, n is " + std::to_string(*n));
      return product_array(std::move(p), need_int(spec, "d", 2));
    }
    if (kind == "fixed_size_er") return fixed_size_er(need_int(spec, "n", n), need_int(spec, "d", 2), spec.at("k").get<std::uint64_t>());
    if (kind == "mixture") {
      std::vector<std::pair<Rational, ModelPtr>> parts;
      for (auto& c : spec.at("components")) parts.emplace_back(rational_from_json(c.at("weight")), model_from_json(c.at("model"), n_override));
      return mixture(std::move(parts));
    }
    if (kind == "restrict_last") return restrict_last(model_from_json(spec.at("source")));
    if (kind == "doubling") return doubling(model_from_json(spec.at("source")));
  } catch (const json::exception& e) {
    throw DomainError("malformed " + kind + " spec: " + e.what());
  }
  throw DomainError("unknown model kind '" + kind + "'");
}

json model_spec_json(const ArrayModel& model) {
  json j = model.to_json();
  if (!j.contains("n")) j["n"] = model.n();
  if (auto* g = dynamic_cast<const GraphSampling*>(&model)) j["closure_added"] = g->added_by_closure();
  return j;
}

FunctionSpec function_from_json(const ArrayModel& model, const json& spec) {
  if (!spec.is_object() || !spec.contains("type")) throw DomainError("function spec needs a 'type'");
  auto type = spec.at("type").get<std::string>();
  try {
    if (type == "monomial") {
      auto family = family_from_json(spec.at("family"));
      if (!spec.contains("c")) return centered_monomial(model, family);
      return MonomialMinusConstant{family, rational_from_json(spec.at("c"))};
    }
    if (type == "indicator") return IndicatorLift{spec.at("j").get<int>(), spec.at("atoms").get<std::vector<std::uint64_t>>()};
    if (type == "table") return ExplicitTable{rationals_from_json(spec.at("values"))};
    if (type == "local") return LocalTable{family_from_json(spec.at("coords")), rationals_from_json(spec.at("values"))};
  } catch (const json::exception& e) {
    throw DomainError("malformed " + type + " function: " + e.what());
  }
  throw DomainError("unknown function type '" + type + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace arraylab
