#pragma once

#include <memory>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "toric/polytope.hpp"
#include "toric/potential.hpp"
#include "toric/test_function.hpp"

namespace toric::io {

// Polytope spec format:
//   { "dim": n,
//     "facets": [ { "normal": [int, ...], "offset": int }, ... ],
//     "perturbation": [ { "exponents": [int, ...], "coeff": real }, ... ] }
// The perturbation block is optional.  All structural problems throw
// std::invalid_argument with a facet-level diagnostic.
DelzantPolytope polytope_from_json(const nlohmann::json& spec);
Perturbation perturbation_from_json(const nlohmann::json& spec, int dim);

// Builds the full potential (canonical if no perturbation block).
SymplecticPotential potential_from_json(const nlohmann::json& spec);

// Test function block: {"kind": "bump", "center": [...], "radius": r,
// "scale": s} | {"kind": "polynomial", "terms": [{"exponents": [...],
// "coeff": c}, ...]} | {"kind": "constant", "value": c}.
std::unique_ptr<TestFunction> test_function_from_json(const nlohmann::json& spec,
                                                      int dim);

nlohmann::json load_json_file(const std::string& path);

}  // namespace toric::io
