#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fractalhand/complexity.hpp"
#include "fractalhand/grasp.hpp"
#include "fractalhand/rcm.hpp"
#include "fractalhand/synthesis.hpp"

namespace fractalhand::io {

using nlohmann::json;

// Fixed-precision rendering used by every CSV writer.
std::string format_number(double v);

json to_json(const FingerSpec& spec);
// Throws InvalidArgument on missing or mistyped fields; the result is validated.
FingerSpec finger_spec_from_json(const json& j);

json to_json(const TreeStats& stats);

json to_json(const ComplexityReport& report, const std::string& units);
// Returns the report and writes the declared units into `units`.
ComplexityReport complexity_report_from_json(const json& j, std::string& units);

json to_json(const TrapezoidDesign& design);
json to_json(const LevelCascade& cascade, const std::string& units);

json to_json(const NamedComparison& record, int grid_size);

// Header epsilon,N,dbc,slope_dbc.
std::string dbc_csv(const BoxCountCurve& curve);
// Header phi,H,theta_max,delta,a_cor.
std::string surface_csv(const std::vector<SurfacePoint>& surface);
// Header theta_A,theta_B,closure; one row per grid cell, row-major.
std::string coverage_csv(const CoverageMap& map);
// Header grasp_span,n,coverage.
std::string monotonicity_csv(const std::vector<MonotonicityRow>& rows);

}  // namespace fractalhand::io
