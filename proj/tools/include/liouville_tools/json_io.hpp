#pragma once

#include "liouville/blowup_geometry.hpp"
#include "liouville/continuation.hpp"
#include "liouville/leading_terms.hpp"
#include "liouville/mass_map.hpp"
#include "liouville/radial_solver.hpp"
#include "liouville/system_algebra.hpp"

#include "json.hpp"

#include <string>

namespace liouville::tools {

using nlohmann::json;

json to_json(const Vector& v);
json to_json(const Matrix& m);
Vector vector_from_json(const json& j);
Matrix matrix_from_json(const json& j);

/// {"n": 2, "a": [[...], [...]]}; "n" is optional on input.
json matrix_to_json(const InteractionMatrix& a);
InteractionMatrix interaction_from_json(const json& j);

/// A number is a constant weight. Otherwise
/// {"form": "polynomial" | "exponential", "constant": c,
///  "terms": [{"k": [k1, k2], "cos": a, "sin": b}, ...]}.
json weight_to_json(const WeightFunction& w);
WeightFunction weight_from_json(const json& j);

json points_to_json(const std::vector<TorusPoint>& points);
std::vector<TorusPoint> points_from_json(const json& j);

json to_json(const HypothesisReport& r);
json to_json(const RegionReport& r);
json to_json(const GlobalSolutionSummary& s);
json to_json(const ExpansionReport& r);
json to_json(const MassMapSample& s);
json to_json(const InversionResult& r);
json to_json(const BlowupConfiguration& c);
json to_json(const CoefficientReport& r);
json to_json(const LeadingTermReport& r);
json to_json(const BCoefficientReport& r);
json to_json(const ContinuationRecord& r);

/// Finite doubles as numbers; NaN and infinities as strings, since JSON has no encoding for them.
json number(double x);

}  // namespace liouville::tools
