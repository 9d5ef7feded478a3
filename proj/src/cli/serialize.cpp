#include "fractalhand/cli/serialize.hpp"

#include <cstdio>

#include "fractalhand/error.hpp"

namespace fractalhand::io {

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("field '") + key + "' has the wrong type");
  }
}

std::string_view signal_name(ConvergenceSignal s) {
  return s == ConvergenceSignal::direct_ratio ? "direct_ratio" : "local_slope";
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json to_json(const FingerSpec& spec) {
  return json{{"gamma", spec.gamma},         {"n", spec.n},
              {"width_D", spec.width_D},     {"pitch_P", spec.pitch_P},
              {"stiffness_k", spec.stiffness_k}, {"units", spec.units}};
}

FingerSpec finger_spec_from_json(const json& j) {
  FingerSpec spec;
  spec.gamma = field<int>(j, "gamma");
  spec.n = field<int>(j, "n");
  spec.width_D = field<double>(j, "width_D");
  spec.pitch_P = field<double>(j, "pitch_P");
  spec.stiffness_k = field<double>(j, "stiffness_k");
  spec.units = field<std::string>(j, "units");
  validate(spec);
  return spec;
}

json to_json(const TreeStats& stats) {
  return json{{"fingertips", stats.fingertips},
              {"internal_joints", stats.internal_joints},
              {"level_scale_ratio", stats.level_scale_ratio}};
}

json to_json(const ComplexityReport& report, const std::string& units) {
  return json{{"d_max", report.d_max},
              {"d_min", report.d_min},
              {"converged", report.converged},
              {"tolerance", report.tolerance},
              {"signal", signal_name(report.signal)},
              {"units", units}};
}

ComplexityReport complexity_report_from_json(const json& j, std::string& units) {
  ComplexityReport r;
  r.d_max = field<double>(j, "d_max");
  r.d_min = field<double>(j, "d_min");
  r.converged = field<bool>(j, "converged");
  if (j.contains("tolerance")) r.tolerance = field<double>(j, "tolerance");
  if (j.contains("signal")) {
    const auto s = field<std::string>(j, "signal");
    if (s == "direct_ratio") r.signal = ConvergenceSignal::direct_ratio;
    else if (s == "local_slope") r.signal = ConvergenceSignal::local_slope;
    else throw InvalidArgument("unknown convergence signal '" + s + "'");
  }
  units = field<std::string>(j, "units");
  if (!(r.d_max > 0.0) || !(r.d_min > 0.0)) throw InvalidArgument("report scales must be positive");
  return r;
}

json to_json(const TrapezoidDesign& d) {
  auto pt = [](Vec2 p) { return json::array({p.x, p.y}); };
  return json{{"phi", d.phi},
              {"h", d.h},
              {"H", d.H},
              {"depth_offset", d.depth_offset},
              {"leg_length", d.leg_length},
              {"platform_width", d.platform_width},
              {"ground_width", d.ground_width},
              {"ground_left", pt(d.ground_left)},
              {"ground_right", pt(d.ground_right)},
              {"platform_left", pt(d.platform_left)},
              {"platform_right", pt(d.platform_right)},
              {"remote_center", pt(d.remote_center())}};
}

json to_json(const LevelCascade& cascade, const std::string& units) {
  json levels = json::array();
  for (const auto& lvl : cascade.levels) {
    const auto& opt = lvl.optimum;
    levels.push_back(json{{"level", lvl.level},
                          {"rotation_cap", lvl.rotation_cap},
                          {"design", to_json(opt.design)},
                          {"theta_max", opt.evaluation.theta_max},
                          {"delta", opt.evaluation.delta},
                          {"a_cor", opt.evaluation.a_cor},
                          {"best_grid_vertex",
                           {{"phi", opt.best_grid_vertex.phi},
                            {"H", opt.best_grid_vertex.H},
                            {"a_cor", opt.best_grid_vertex.a_cor}}}});
  }
  return json{{"units", units}, {"levels", levels}};
}

json to_json(const NamedComparison& r, int grid_size) {
  return json{{"shape", r.shape},
              {"mu", r.mu},
              {"grid", grid_size},
              {"fh_coverage", r.fractal_coverage},
              {"ap_coverage", r.antipodal_coverage},
              {"improvement", r.improvement}};
}

std::string dbc_csv(const BoxCountCurve& curve) {
  std::string out = "epsilon,N,dbc,slope_dbc\n";
  for (std::size_t i = 0; i < curve.epsilons.size(); ++i) {
    out += format_number(curve.epsilons[i]) + "," + format_number(curve.counts[i]) + "," +
           format_number(curve.dbc[i]) + "," + format_number(curve.slope_dbc[i]) + "\n";
  }
  return out;
}

std::string surface_csv(const std::vector<SurfacePoint>& surface) {
  std::string out = "phi,H,theta_max,delta,a_cor\n";
  for (const auto& p : surface) {
    out += format_number(p.phi) + "," + format_number(p.H) + "," + format_number(p.theta_max) + "," +
           format_number(p.delta) + "," + format_number(p.a_cor) + "\n";
  }
  return out;
}

std::string coverage_csv(const CoverageMap& map) {
  std::string out = "theta_A,theta_B,closure\n";
  out.reserve(out.size() + static_cast<std::size_t>(map.grid_size) * map.grid_size * 24);
  for (int a = 0; a < map.grid_size; ++a) {
    const std::string ta = format_number(map.theta(a)) + ",";
    for (int b = 0; b < map.grid_size; ++b) {
      out += ta;
      out += format_number(map.theta(b));
      out += map.at(a, b) ? ",1\n" : ",0\n";
    }
  }
  return out;
}

std::string monotonicity_csv(const std::vector<MonotonicityRow>& rows) {
  std::string out = "grasp_span,n,coverage\n";
  for (const auto& r : rows) {
    out += format_number(r.grasp_span) + "," + std::to_string(r.depth_n) + "," + format_number(r.coverage) + "\n";
  }
  return out;
}

}  // namespace fractalhand::io
