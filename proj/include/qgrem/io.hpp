#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qgrem/model.hpp"
#include "qgrem/nonhier.hpp"
#include "qgrem/verify.hpp"

namespace qgrem::io {

/// Hierarchical profiles:
///   {"kind": "step", "x": [...], "a": [...]}
///   {"kind": "piecewise_linear", "x": [...], "A": [...]}
/// Non-hierarchical models:
///   {"n": 2, "L": [0.5, 0.5], "weights": {"1": 0.2, "2": 0.3, "1,2": 0.5}}
DisorderSource parse_model(const nlohmann::json& doc);
DisorderSource load_model(const std::string& path);

NonHierModel parse_nonhier(const nlohmann::json& doc);
nlohmann::json to_json(const NonHierModel& model);

/// constant:G | discrete:FILE | gaussian:m,s | empirical:FILE.
/// Discrete files hold "value probability" pairs; empirical files hold numbers.
FieldSpec parse_field(const std::string& text);

/// "start:stop:count"; count >= 1 and start <= stop. Single points may be given bare.
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// Shortest decimal with 17 significant digits.
std::string format_number(double v);

/// FNV-1a over a canonical string, as 16 hex digits.
std::string config_hash(const std::string& canonical);

}  // namespace qgrem::io
