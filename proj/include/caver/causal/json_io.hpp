#pragma once

#include <string>

#include <json.hpp>

#include "caver/causal/model.hpp"

namespace caver::causal {

using json = nlohmann::ordered_json;

/// Model file layout:
/// {
///   "exogenous":  {"U": ["0","1"], ...},
///   "endogenous": {"V": ["0","1"], ...},
///   "equations":  {"V": "U & !W"  or  {"inputs": [...], "rows": {"0,1": "1", ...}}},
///   "contexts":   {"name": {"U": "1", ...}}          (optional presets)
/// }
CausalModel model_from_json(const json& j);
json model_to_json(const CausalModel& model);

CausalModel load_model(const std::string& path);
void save_model(const CausalModel& model, const std::string& path);

json read_json_file(const std::string& path);
void write_json_file(const json& j, const std::string& path);

}  // namespace caver::causal
