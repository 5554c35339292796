#pragma once

#include "arraylab/concentration.hpp"
#include "arraylab/model.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace arraylab {

inline constexpr const char* kSchemaVersion = "1.0.0";
std::string report_schema_version();

/// Accepts a JSON string ("3/7", "0.25") or number.
Rational rational_from_json(const nlohmann::json& j);
std::vector<Rational> rationals_from_json(const nlohmann::json& j);

/// "1,2;3,4" or "{1,2} {3,4}" style lists of subsets; "" is the empty list.
std::vector<Subset> parse_subset_list(const std::string& text);
Subset parse_subset(const std::string& text);
/// "1..8" or "1,3,5".
Subset parse_index_set(const std::string& text);

/// Builds a model from a spec with a `kind` discriminator; n overrides or supplies the index count.
ModelPtr model_from_json(const nlohmann::json& spec, std::optional<int> n = std::nullopt);
/// The model's own JSON plus reporting fields (symmetric-closure additions for graph sampling).
nlohmann::json model_spec_json(const ArrayModel& model);

/// {"type":"monomial","family":[[1,2]],"c":"1/4"} (c omitted: centered), {"type":"indicator","j":4,"atoms":[..]},
/// {"type":"table","values":[..]}, {"type":"local","coords":[[1,2]],"values":[..]}.
FunctionSpec function_from_json(const ArrayModel& model, const nlohmann::json& spec);

std::string read_file(const std::string& path);

}  // namespace arraylab
