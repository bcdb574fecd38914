#pragma once

// JSON schemas shared by the CLI and the experiment harness.
//
// Operator:  {"p": [p0, ..., pr], "A0": [[...]], "B": [B_1, ..., B_r]}
// Domain:    {"op": "ball" | "box" | "halfspace" | "cone" | "complement" |
//             "union" | "intersect" | "puncture" | "whole_space" | "empty",
//             ...params, "children": [...]}
// Functions: {"type": "constant" | "linear" | "distance" | "log_radius" |
//             "quadratic", ...params, "time_coef": c}

#include "kolmo/barrier.hpp"
#include "kolmo/dirichlet.hpp"
#include "kolmo/domain.hpp"
#include "kolmo/operator.hpp"
#include "kolmo/wiener.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace kolmo {

using json = nlohmann::json;

// All parsers throw ConfigError with the offending key in the message.
Vector vector_from_json(const json& j, const std::string& what);
Matrix matrix_from_json(const json& j, const std::string& what);
json to_json(const Vector& v);
json to_json(const Matrix& m);

OUOperator operator_from_json(const json& j);
json operator_to_json(const OUOperator& op);
// An inline operator object, or a path (relative to base_dir) to a JSON file
// holding one.
json operator_node_from_json(const json& node, const std::string& base_dir = ".");

// Cone nodes without "exponents" take the operator's dilation exponents when
// op is given, and all-ones otherwise.
Domain domain_from_json(const json& j, const OUOperator* op = nullptr);

BoundaryFunction boundary_function_from_json(const json& j);
// Spatial part from boundary_function_from_json plus time_coef * t.
SpaceTimeFunction space_time_function_from_json(const json& j);

CriterionParams criterion_params_from_json(const json& j, CriterionParams defaults = {});
SolverConfig solver_config_from_json(const json& j, SolverConfig defaults = {});
ProbeConfig probe_config_from_json(const json& j, ProbeConfig defaults = {});
GridConfig grid_config_from_json(const json& j, GridConfig defaults = {});

json to_json(const ValidationReport& r);
json to_json(const CriterionReport& r);
json to_json(const UpperBoundCheck& r);
json to_json(const DirichletEstimate& e);
json to_json(const RegularityVerdict& v);
json to_json(const SuperharmonicityReport& r);
json to_json(const MonotoneReport& r);

std::string to_csv(const CriterionReport& r);
std::string to_csv(const RegularityVerdict& v);

}  // namespace kolmo
