#include "fractalhand/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "fractalhand/cli/serialize.hpp"
#include "fractalhand/complexity.hpp"
#include "fractalhand/error.hpp"
#include "fractalhand/grasp.hpp"
#include "fractalhand/parallel.hpp"
#include "fractalhand/profile.hpp"
#include "fractalhand/rcm.hpp"
#include "fractalhand/svg.hpp"
#include "fractalhand/synthesis.hpp"

namespace fs = std::filesystem;

namespace fractalhand::cli {

namespace {

using io::json;

constexpr double kDeg = std::numbers::pi / 180.0;

struct Globals {
  std::string units = "mm";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int workers = 0;
  std::string format = "json";
};

// Files are kept in memory until the command finishes so failures leave nothing behind.
struct Result {
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary_json;
  std::string summary_csv;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(IngestErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw IngestError(IngestErrorKind::malformed, path.string() + ": " + e.what());
  }
}

std::string absolute_path(const std::string& p) {
  return p.empty() ? p : fs::absolute(fs::path(p)).lexically_normal().string();
}

// Shape selection shared by dim, cspace and monotonicity.
struct ShapeArgs {
  std::string shape;
  std::string profile;
  std::string profile_format;
  double radius = 1.0;
  double semi_major = 1.5;
  double semi_minor = 1.0;
  double lobe_depth = 0.0;
  CLI::Option* lobe_depth_opt = nullptr;
  int sides = 6;
  int iterations = 4;
  int samples = 720;
};

void add_shape_options(CLI::App* sub, ShapeArgs& s) {
  sub->add_option("--shape", s.shape, "Generated shape: circle, ellipse, pentagon, triangle, dogbone, regular_polygon, koch");
  sub->add_option("--profile", s.profile, "Boundary file (csv, json or svg)");
  sub->add_option("--profile-format", s.profile_format, "Override the format guessed from the extension")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  sub->add_option("--radius", s.radius, "Base radius of circle, polar shapes, polygon and koch");
  sub->add_option("--semi-major", s.semi_major, "Ellipse semi-axis along x");
  sub->add_option("--semi-minor", s.semi_minor, "Ellipse semi-axis along y");
  s.lobe_depth_opt = sub->add_option("--lobe-depth", s.lobe_depth, "Polar modulation depth");
  sub->add_option("--sides", s.sides, "Regular polygon corner count");
  sub->add_option("--iterations", s.iterations, "Koch refinement count");
  sub->add_option("--samples", s.samples, "Vertices for smooth generated shapes");
}

json shape_config(const ShapeArgs& s) {
  json c;
  if (!s.profile.empty()) {
    c["profile"] = absolute_path(s.profile);
    if (!s.profile_format.empty()) c["profile-format"] = s.profile_format;
    return c;
  }
  c["shape"] = s.shape;
  c["radius"] = s.radius;
  c["semi-major"] = s.semi_major;
  c["semi-minor"] = s.semi_minor;
  if (s.lobe_depth_opt->count() > 0) c["lobe-depth"] = s.lobe_depth;
  c["sides"] = s.sides;
  c["iterations"] = s.iterations;
  c["samples"] = s.samples;
  return c;
}

ShapeSpec shape_spec(std::string_view name, const ShapeArgs& s) {
  const auto kind = parse_shape_kind(name);
  if (!kind) throw InvalidArgument("unknown shape '" + std::string(name) + "'");
  ShapeSpec spec;
  spec.kind = *kind;
  spec.radius = s.radius;
  spec.semi_major = s.semi_major;
  spec.semi_minor = s.semi_minor;
  if (s.lobe_depth_opt != nullptr && s.lobe_depth_opt->count() > 0) spec.lobe_depth = s.lobe_depth;
  spec.sides = s.sides;
  spec.iterations = s.iterations;
  spec.sample_count = s.samples;
  return spec;
}

Profile resolve_profile(const ShapeArgs& s, const Globals& g, std::string& label) {
  if (s.shape.empty() == s.profile.empty()) throw InvalidArgument("give exactly one of --shape or --profile");
  if (!s.shape.empty()) {
    label = s.shape;
    return generate(shape_spec(s.shape, s));
  }
  const fs::path path(s.profile);
  std::optional<ProfileFormat> format =
      s.profile_format.empty() ? format_from_extension(path) : parse_profile_format(s.profile_format);
  if (!format) throw InvalidArgument("cannot tell the format of " + path.string() + "; pass --profile-format");
  Profile profile = load_profile(path, *format);
  if (*format == ProfileFormat::json_points) {
    const json j = read_json(path);
    const std::string declared = j.value("units", std::string("unitless"));
    if (declared != "unitless" && declared != g.units) {
      throw InvalidArgument("profile declares units '" + declared + "' but the run uses '" + g.units + "'");
    }
  }
  label = path.stem().string();
  return profile;
}

int workers_of(const Globals& g) { return g.workers > 0 ? g.workers : default_workers(); }

ContactPlacement parse_placement(const std::string& name) {
  return name == "arclength" ? ContactPlacement::arc_length : ContactPlacement::curve_parameter;
}

// ---------------------------------------------------------------- dim

struct DimArgs {
  ShapeArgs shape;
  int scales = 40;
  double eps_min = 1e-3;
  double eps_max = 0.5;
  double tolerance = 0.0;
  CLI::Option* tolerance_opt = nullptr;
  std::string signal = "direct";
  int grid_offsets = 1;
  double fit_min = 0.01;
  double fit_max = 0.1;
};

void add_dim(CLI::App* sub, DimArgs& a) {
  add_shape_options(sub, a.shape);
  sub->add_option("--scales", a.scales, "Number of log-uniform box sizes");
  sub->add_option("--eps-min", a.eps_min, "Smallest normalized box size");
  sub->add_option("--eps-max", a.eps_max, "Largest normalized box size");
  a.tolerance_opt = sub->add_option("--tolerance", a.tolerance, "Convergence band half-width around 1");
  sub->add_option("--signal", a.signal, "Convergence signal")->check(CLI::IsMember({"direct", "slope"}));
  sub->add_option("--grid-offsets", a.grid_offsets, "Random grid offsets averaged per scale");
  sub->add_option("--fit-min", a.fit_min, "Lower box size of the reported slope fit");
  sub->add_option("--fit-max", a.fit_max, "Upper box size of the reported slope fit");
}

double dim_tolerance(const DimArgs& a) {
  if (a.tolerance_opt->count() > 0) return a.tolerance;
  return a.signal == "slope" ? kDefaultSlopeTolerance : kDefaultDirectTolerance;
}

json dim_config(const DimArgs& a) {
  json c = shape_config(a.shape);
  c["scales"] = a.scales;
  c["eps-min"] = a.eps_min;
  c["eps-max"] = a.eps_max;
  c["tolerance"] = dim_tolerance(a);
  c["signal"] = a.signal;
  c["grid-offsets"] = a.grid_offsets;
  c["fit-min"] = a.fit_min;
  c["fit-max"] = a.fit_max;
  return c;
}

Result run_dim(const DimArgs& a, const Globals& g) {
  std::string label;
  const Profile profile = resolve_profile(a.shape, g, label);
  BoxCountOptions opts;
  opts.grid_offsets = a.grid_offsets;
  opts.seed = g.seed;
  opts.workers = workers_of(g);
  const BoxCountCurve curve = dbc_curve(profile, a.scales, {a.eps_min, a.eps_max}, opts);
  const ConvergenceSignal signal = a.signal == "slope" ? ConvergenceSignal::local_slope : ConvergenceSignal::direct_ratio;
  const ComplexityReport report = extract_scales(curve, profile, dim_tolerance(a), signal);

  json j = io::to_json(report, g.units);
  j["shape"] = label;
  j["perimeter"] = profile.perimeter();
  std::size_t first = curve.epsilons.size(), last = 0;
  for (std::size_t i = 0; i < curve.epsilons.size(); ++i) {
    if (curve.epsilons[i] <= a.fit_max && curve.epsilons[i] >= a.fit_min) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  if (first < last) {
    j["fit"] = {{"eps_min", curve.epsilons[last]}, {"eps_max", curve.epsilons[first]}, {"slope", fit_slope(curve, first, last)}};
  } else {
    j["fit"] = nullptr;
  }

  Result r;
  const std::string csv = io::dbc_csv(curve);
  r.files.emplace_back("dbc_curve.csv", csv);
  r.files.emplace_back("dbc_curve.svg", svg::dbc_plot(curve, "Box-counting dimension: " + label));
  r.summary_json = dump(j);
  r.files.emplace_back("complexity.json", r.summary_json);
  r.summary_csv = csv;
  return r;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string report;
  double d_max = 0.0, d_min = 0.0;
  CLI::Option *d_max_opt = nullptr, *d_min_opt = nullptr;
  int gamma = 2;
  int fingers = 2;
  double perimeter = 0.0, pitch = 0.0, min_feature = 0.0;
  CLI::Option *perimeter_opt = nullptr, *pitch_opt = nullptr, *min_feature_opt = nullptr;
  double stiffness = 0.0;
};

void add_synth(CLI::App* sub, SynthArgs& a) {
  sub->add_option("--report", a.report, "complexity.json from dim");
  a.d_max_opt = sub->add_option("--d-max", a.d_max, "Largest feature length");
  a.d_min_opt = sub->add_option("--d-min", a.d_min, "Smallest feature length");
  sub->add_option("--gamma", a.gamma, "Branches per joint node");
  sub->add_option("--fingers", a.fingers, "Number of fingers sharing the perimeter");
  a.perimeter_opt = sub->add_option("--perimeter", a.perimeter, "Object perimeter capping width_D");
  a.pitch_opt = sub->add_option("--pitch", a.pitch, "Axial distance between first and last joint levels");
  sub->add_option("--stiffness", a.stiffness, "Joint stiffness, carried through");
  a.min_feature_opt = sub->add_option("--min-feature", a.min_feature, "Raise d_min to this manufacturable scale");
}

json synth_config(const SynthArgs& a) {
  json c;
  if (!a.report.empty()) c["report"] = absolute_path(a.report);
  if (a.d_max_opt->count() > 0) c["d-max"] = a.d_max;
  if (a.d_min_opt->count() > 0) c["d-min"] = a.d_min;
  c["gamma"] = a.gamma;
  c["fingers"] = a.fingers;
  if (a.perimeter_opt->count() > 0) c["perimeter"] = a.perimeter;
  if (a.pitch_opt->count() > 0) c["pitch"] = a.pitch;
  c["stiffness"] = a.stiffness;
  if (a.min_feature_opt->count() > 0) c["min-feature"] = a.min_feature;
  return c;
}

Result run_synth(const SynthArgs& a, const Globals& g) {
  const bool direct = a.d_max_opt->count() > 0 || a.d_min_opt->count() > 0;
  if (a.report.empty() == !direct) throw InvalidArgument("give either --report or both --d-max and --d-min");
  ComplexityReport report;
  std::optional<double> perimeter;
  if (direct) {
    if (a.d_max_opt->count() == 0 || a.d_min_opt->count() == 0) throw InvalidArgument("--d-max and --d-min go together");
    report.d_max = a.d_max;
    report.d_min = a.d_min;
    report.converged = true;
  } else {
    const json j = read_json(a.report);
    std::string units;
    report = io::complexity_report_from_json(j, units);
    if (units != g.units) throw InvalidArgument("report units '" + units + "' differ from run units '" + g.units + "'");
    if (j.contains("perimeter") && j["perimeter"].is_number()) perimeter = j["perimeter"].get<double>();
  }
  if (a.perimeter_opt->count() > 0) perimeter = a.perimeter;

  bool clamped = false;
  if (a.min_feature_opt->count() > 0) {
    if (!(a.min_feature > 0.0)) throw InvalidArgument("--min-feature must be positive");
    if (report.d_min < a.min_feature) {
      report.d_min = std::min(a.min_feature, report.d_max);
      clamped = true;
    }
  }

  SynthesisInputs in;
  in.gamma = a.gamma;
  in.num_fingers = a.fingers;
  in.perimeter = perimeter;
  if (a.pitch_opt->count() > 0) in.pitch = a.pitch;
  in.stiffness_k = a.stiffness;
  in.units = g.units;
  const SynthesisResult res = synthesize_spec(report, in);

  json detail{{"spec", io::to_json(res.spec)},
              {"tree", io::to_json(tree_stats(res.spec))},
              {"d_max", report.d_max},
              {"d_min", report.d_min},
              {"not_converged_warning", res.not_converged_warning},
              {"width_capped", res.width_capped},
              {"d_min_clamped", clamped}};
  Result r;
  r.summary_json = dump(io::to_json(res.spec));
  r.files.emplace_back("finger_spec.json", r.summary_json);
  r.files.emplace_back("synthesis.json", dump(detail));
  const auto& s = res.spec;
  r.summary_csv = "gamma,n,width_D,pitch_P,stiffness_k,units\n" + std::to_string(s.gamma) + "," + std::to_string(s.n) +
                  "," + io::format_number(s.width_D) + "," + io::format_number(s.pitch_P) + "," +
                  io::format_number(s.stiffness_k) + "," + s.units + "\n";
  return r;
}

// ---------------------------------------------------------------- rcm

struct RcmArgs {
  std::string spec;
  double width = 0.0;
  CLI::Option* width_opt = nullptr;
  int gamma = 2;
  int n = 0;
  CLI::Option* n_opt = nullptr;
  std::vector<double> caps;
  int grid_phi = 24;
  int grid_H = 24;
  double phi_min = 20.0, phi_max = 88.0;
  double h_ratio_min = 1.25, h_ratio_max = 4.0;
  int samples = 64;
  double margin = 5.0;
  std::string drift = "carried_max";
  double tolerance = 1e-4;
};

void add_rcm(CLI::App* sub, RcmArgs& a) {
  sub->add_option("--spec", a.spec, "finger_spec.json from synth");
  a.width_opt = sub->add_option("--width", a.width, "Finger width D");
  sub->add_option("--gamma", a.gamma, "Branches per joint node");
  a.n_opt = sub->add_option("--n", a.n, "Tree depth");
  sub->add_option("--caps", a.caps, "Rotation caps in radians, one for every level or one for each of levels n..2")
      ->delimiter(',');
  sub->add_option("--grid-phi", a.grid_phi, "Grid vertices along phi");
  sub->add_option("--grid-h", a.grid_H, "Grid vertices along H");
  sub->add_option("--phi-min", a.phi_min, "Smallest bar angle, degrees");
  sub->add_option("--phi-max", a.phi_max, "Largest bar angle, degrees");
  sub->add_option("--h-ratio-min", a.h_ratio_min, "Smallest H as a multiple of h");
  sub->add_option("--h-ratio-max", a.h_ratio_max, "Largest H as a multiple of h");
  sub->add_option("--samples", a.samples, "Rotation samples per drift evaluation");
  sub->add_option("--margin", a.margin, "Transmission-angle margin, degrees");
  sub->add_option("--drift", a.drift, "Drift measure")
      ->check(CLI::IsMember({"carried_max", "carried_extreme", "instant_center"}));
  sub->add_option("--tolerance", a.tolerance, "Relative tolerance of the refinement");
}

FingerSpec rcm_spec(const RcmArgs& a, const Globals& g) {
  const bool direct = a.width_opt->count() > 0 || a.n_opt->count() > 0;
  if (a.spec.empty() == !direct) throw InvalidArgument("give either --spec or --width with --n");
  if (!direct) {
    FingerSpec spec = io::finger_spec_from_json(read_json(a.spec));
    if (spec.units != g.units) throw InvalidArgument("spec units '" + spec.units + "' differ from run units '" + g.units + "'");
    return spec;
  }
  if (a.width_opt->count() == 0 || a.n_opt->count() == 0) throw InvalidArgument("--width and --n go together");
  FingerSpec spec;
  spec.gamma = a.gamma;
  spec.n = a.n;
  spec.width_D = a.width;
  spec.units = g.units;
  validate(spec);
  return spec;
}

std::vector<double> resolved_caps(const RcmArgs& a, int n) {
  const std::size_t levels = n >= 2 ? static_cast<std::size_t>(n - 1) : 0;
  if (a.caps.empty()) return std::vector<double>(levels, std::numbers::pi / 4.0);
  if (a.caps.size() == 1) return std::vector<double>(levels, a.caps.front());
  if (a.caps.size() != levels) {
    throw InvalidArgument("--caps needs 1 or " + std::to_string(levels) + " values, got " + std::to_string(a.caps.size()));
  }
  return a.caps;
}

json rcm_config(const RcmArgs& a, const FingerSpec& spec) {
  json c;
  if (!a.spec.empty()) {
    c["spec"] = absolute_path(a.spec);
  } else {
    c["width"] = a.width;
    c["gamma"] = a.gamma;
    c["n"] = a.n;
  }
  c["caps"] = resolved_caps(a, spec.n);
  c["grid-phi"] = a.grid_phi;
  c["grid-h"] = a.grid_H;
  c["phi-min"] = a.phi_min;
  c["phi-max"] = a.phi_max;
  c["h-ratio-min"] = a.h_ratio_min;
  c["h-ratio-max"] = a.h_ratio_max;
  c["samples"] = a.samples;
  c["margin"] = a.margin;
  c["drift"] = a.drift;
  c["tolerance"] = a.tolerance;
  return c;
}

Result run_rcm(const RcmArgs& a, const FingerSpec& spec, const Globals& g) {
  LevelSearch search;
  search.phi_range = {a.phi_min * kDeg, a.phi_max * kDeg};
  search.H_ratio_range = {a.h_ratio_min, a.h_ratio_max};
  search.grid_phi = a.grid_phi;
  search.grid_H = a.grid_H;
  search.relative_tolerance = a.tolerance;
  search.evaluation.n_samples = a.samples;
  search.evaluation.transmission_margin = a.margin * kDeg;
  search.evaluation.drift = a.drift == "carried_extreme"  ? DriftMeasure::carried_center_extreme
                            : a.drift == "instant_center" ? DriftMeasure::instant_center_max
                                                          : DriftMeasure::carried_center_max;
  search.workers = workers_of(g);
  const std::vector<double> caps = resolved_caps(a, spec.n);
  const LevelCascade result = cascade(spec, caps, search);

  Result r;
  r.summary_json = dump(io::to_json(result, spec.units));
  r.files.emplace_back("cascade.json", r.summary_json);
  r.summary_csv = "level,phi,H,h,theta_max,delta,a_cor\n";
  for (const auto& lvl : result.levels) {
    const std::string tag = "level" + std::to_string(lvl.level);
    const auto& opt = lvl.optimum;
    r.files.emplace_back("surface_" + tag + ".csv", io::surface_csv(opt.surface));
    r.files.emplace_back("surface_" + tag + ".svg",
                         svg::surface_heatmap(opt, a.grid_phi, a.grid_H, "A_cor over (phi, H), level " + std::to_string(lvl.level)));
    r.files.emplace_back("linkage_" + tag + ".svg",
                         svg::linkage_drawing(opt.design, opt.evaluation.theta_max, "Trapezoid linkage, level " + std::to_string(lvl.level)));
    r.summary_csv += std::to_string(lvl.level) + "," + io::format_number(opt.design.phi) + "," +
                     io::format_number(opt.design.H) + "," + io::format_number(opt.design.h) + "," +
                     io::format_number(opt.evaluation.theta_max) + "," + io::format_number(opt.evaluation.delta) +
                     "," + io::format_number(opt.evaluation.a_cor) + "\n";
  }
  return r;
}

// ---------------------------------------------------------------- cspace / compare / monotonicity

struct GraspArgs {
  double span = 2.7;
  int depth = 5;
  int grid = 100;
  std::string placement = "parameter";
};

void add_grasp_options(CLI::App* sub, GraspArgs& a) {
  sub->add_option("--span", a.span, "Grasp span in radians of curve parameter");
  sub->add_option("--depth", a.depth, "Fractal hand depth n (2^(n-1) contacts per finger)");
  sub->add_option("--grid", a.grid, "Grid points per hand-center axis");
  sub->add_option("--placement", a.placement, "Contact spacing")->check(CLI::IsMember({"parameter", "arclength"}));
}

void grasp_config(json& c, const GraspArgs& a) {
  c["span"] = a.span;
  c["depth"] = a.depth;
  c["grid"] = a.grid;
  c["placement"] = a.placement;
}

std::pair<ContactModel, ContactModel> models(const GraspArgs& a, double mu) {
  ContactModel fh = ContactModel::fractal_hand(a.depth, a.span, mu);
  ContactModel ap = ContactModel::antipodal(mu);
  fh.placement = ap.placement = parse_placement(a.placement);
  return {fh, ap};
}

std::string mu_tag(double mu) { return "mu" + io::format_number(mu); }

struct CspaceArgs {
  ShapeArgs shape;
  GraspArgs grasp;
  double mu = 0.3;
  std::string model = "both";
};

void add_cspace(CLI::App* sub, CspaceArgs& a) {
  add_shape_options(sub, a.shape);
  add_grasp_options(sub, a.grasp);
  sub->add_option("--mu", a.mu, "Friction coefficient");
  sub->add_option("--model", a.model, "Hand model")->check(CLI::IsMember({"both", "fractal", "antipodal"}));
}

json cspace_config(const CspaceArgs& a) {
  json c = shape_config(a.shape);
  grasp_config(c, a.grasp);
  c["mu"] = a.mu;
  c["model"] = a.model;
  return c;
}

Result run_cspace(const CspaceArgs& a, const Globals& g) {
  std::string label;
  const Profile profile = resolve_profile(a.shape, g, label);
  const auto [fh, ap] = models(a.grasp, a.mu);
  CoverageOptions opts;
  opts.workers = workers_of(g);

  Result r;
  json j{{"shape", label}, {"mu", a.mu}, {"grid", a.grasp.grid}};
  std::string csv;
  auto emit = [&](const ContactModel& m, const std::string& tag, const std::string& key) {
    const CoverageMap map = coverage_map(profile, m, a.grasp.grid, opts);
    csv = io::coverage_csv(map);
    r.files.emplace_back("coverage_" + tag + ".csv", csv);
    r.files.emplace_back("coverage_" + tag + ".svg", svg::coverage_heatmap(map, label + " " + tag));
    j[key] = map.coverage_fraction;
    return map.coverage_fraction;
  };
  if (a.model == "both") {
    const Comparison cmp = compare(profile, fh, ap, a.grasp.grid, opts);
    r.files.emplace_back("coverage_fractal.csv", io::coverage_csv(cmp.fractal));
    r.files.emplace_back("coverage_antipodal.csv", io::coverage_csv(cmp.antipodal));
    r.files.emplace_back("coverage_comparison.svg", svg::comparison_heatmap(cmp, label + ", mu " + io::format_number(a.mu)));
    j["fh_coverage"] = cmp.fractal.coverage_fraction;
    j["ap_coverage"] = cmp.antipodal.coverage_fraction;
    j["improvement"] = cmp.improvement;
    csv = "shape,mu,grid,fh_coverage,ap_coverage,improvement\n" + label + "," + io::format_number(a.mu) + "," +
          std::to_string(a.grasp.grid) + "," + io::format_number(cmp.fractal.coverage_fraction) + "," +
          io::format_number(cmp.antipodal.coverage_fraction) + "," + io::format_number(cmp.improvement) + "\n";
  } else if (a.model == "fractal") {
    emit(fh, "fractal", "fh_coverage");
  } else {
    emit(ap, "antipodal", "ap_coverage");
  }
  r.summary_json = dump(j);
  r.files.emplace_back("cspace.json", r.summary_json);
  r.summary_csv = csv;
  return r;
}

struct CompareArgs {
  std::vector<std::string> shapes;
  std::vector<double> mus{0.1, 0.3, 0.5};
  GraspArgs grasp;
  int samples = 720;
};

void add_compare(CLI::App* sub, CompareArgs& a) {
  sub->add_option("--shapes", a.shapes, "Shapes to compare (default: the four canonical shapes)")->delimiter(',');
  sub->add_option("--mu", a.mus, "Friction coefficients to sweep")->delimiter(',');
  sub->add_option("--samples", a.samples, "Vertices per generated shape");
  add_grasp_options(sub, a.grasp);
}

std::vector<std::string> compare_shapes(const CompareArgs& a) {
  return a.shapes.empty() ? canonical_shape_names() : a.shapes;
}

json compare_config(const CompareArgs& a) {
  json c;
  c["shapes"] = compare_shapes(a);
  c["mu"] = a.mus;
  c["samples"] = a.samples;
  grasp_config(c, a.grasp);
  return c;
}

Result run_compare(const CompareArgs& a, const Globals& g) {
  if (a.mus.empty()) throw InvalidArgument("--mu needs at least one value");
  std::vector<std::pair<std::string, Profile>> profiles;
  for (const auto& name : compare_shapes(a)) {
    ShapeArgs defaults;
    defaults.samples = a.samples;
    const auto names = canonical_shape_names();
    const bool canonical = std::ranges::find(names, name) != names.end();
    profiles.emplace_back(name, generate(canonical ? canonical_shape(name, a.samples) : shape_spec(name, defaults)));
  }
  CoverageOptions opts;
  opts.workers = workers_of(g);

  Result r;
  json records = json::array();
  json means = json::array();
  r.summary_csv = "shape,mu,grid,fh_coverage,ap_coverage,improvement\n";
  for (const double mu : a.mus) {
    const auto [fh, ap] = models(a.grasp, mu);
    double sum = 0.0;
    for (const auto& [name, profile] : profiles) {
      const Comparison cmp = compare(profile, fh, ap, a.grasp.grid, opts);
      NamedComparison rec{name, mu, cmp.fractal.coverage_fraction, cmp.antipodal.coverage_fraction, cmp.improvement};
      records.push_back(io::to_json(rec, a.grasp.grid));
      sum += cmp.improvement;
      const std::string tag = name + "_" + mu_tag(mu);
      r.files.emplace_back("coverage_" + tag + "_fh.csv", io::coverage_csv(cmp.fractal));
      r.files.emplace_back("coverage_" + tag + "_ap.csv", io::coverage_csv(cmp.antipodal));
      r.files.emplace_back("compare_" + tag + ".svg", svg::comparison_heatmap(cmp, name + ", mu " + io::format_number(mu)));
      r.summary_csv += name + "," + io::format_number(mu) + "," + std::to_string(a.grasp.grid) + "," +
                       io::format_number(rec.fractal_coverage) + "," + io::format_number(rec.antipodal_coverage) +
                       "," + io::format_number(rec.improvement) + "\n";
    }
    means.push_back({{"mu", mu}, {"mean_improvement", sum / static_cast<double>(profiles.size())}});
  }
  json j{{"grid", a.grasp.grid},
         {"span", a.grasp.span},
         {"depth", a.grasp.depth},
         {"records", records},
         {"mean_improvement", means}};
  r.summary_json = dump(j);
  r.files.emplace_back("comparison.json", r.summary_json);
  return r;
}

struct MonoArgs {
  ShapeArgs shape;
  std::vector<double> spans{0.675, 1.35, 2.7};
  std::vector<int> depths{1, 2, 3, 5};
  double mu = 0.3;
  int grid = 100;
  std::string placement = "parameter";
};

void add_mono(CLI::App* sub, MonoArgs& a) {
  add_shape_options(sub, a.shape);
  sub->add_option("--spans", a.spans, "Grasp spans, ascending")->delimiter(',');
  sub->add_option("--depths", a.depths, "Hand depths, ascending")->delimiter(',');
  sub->add_option("--mu", a.mu, "Friction coefficient");
  sub->add_option("--grid", a.grid, "Grid points per hand-center axis");
  sub->add_option("--placement", a.placement, "Contact spacing")->check(CLI::IsMember({"parameter", "arclength"}));
}

json mono_config(const MonoArgs& a) {
  json c = shape_config(a.shape);
  c["spans"] = a.spans;
  c["depths"] = a.depths;
  c["mu"] = a.mu;
  c["grid"] = a.grid;
  c["placement"] = a.placement;
  return c;
}

Result run_mono(const MonoArgs& a, const Globals& g) {
  std::string label;
  const Profile profile = resolve_profile(a.shape, g, label);
  if (a.spans.empty() || a.depths.empty()) throw InvalidArgument("--spans and --depths need values");
  ContactModel base = ContactModel::fractal_hand(a.depths.front(), a.spans.front(), a.mu);
  base.placement = parse_placement(a.placement);
  CoverageOptions opts;
  opts.workers = workers_of(g);
  const auto rows = coverage_monotonicity(profile, base, a.spans, a.depths, a.grid, opts);

  const std::size_t nd = a.depths.size();
  auto cov = [&](std::size_t s, std::size_t d) { return rows[s * nd + d].coverage; };
  bool in_span = true, in_depth = true;
  for (std::size_t s = 0; s < a.spans.size(); ++s) {
    for (std::size_t d = 0; d < nd; ++d) {
      if (s > 0 && cov(s, d) < cov(s - 1, d)) in_span = false;
      if (d > 0 && cov(s, d) < cov(s, d - 1)) in_depth = false;
    }
  }
  json jrows = json::array();
  for (const auto& row : rows) jrows.push_back({{"grasp_span", row.grasp_span}, {"n", row.depth_n}, {"coverage", row.coverage}});
  json j{{"shape", label},
         {"mu", a.mu},
         {"grid", a.grid},
         {"rows", jrows},
         {"nondecreasing_in_span", in_span},
         {"nondecreasing_in_depth", in_depth}};
  Result r;
  r.summary_csv = io::monotonicity_csv(rows);
  r.summary_json = dump(j);
  r.files.emplace_back("monotonicity.csv", r.summary_csv);
  r.files.emplace_back("monotonicity.json", r.summary_json);
  return r;
}

// ---------------------------------------------------------------- driver

void write_outputs(const fs::path& dir, const Result& r) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : r.files) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("cannot write " + (dir / name).string());
  }
}

std::string manifest(const std::string& command, const Globals& g, const json& config, const Result& r) {
  json files = json::array();
  for (const auto& f : r.files) files.push_back(f.first);
  files.push_back("manifest.json");
  const json m{{"tool", "fractalhand"},
               {"command", command},
               {"globals", {{"units", g.units}, {"seed", g.seed}, {"format", g.format}}},
               {"config", config},
               {"outputs", files}};
  return dump(m);
}

std::string flag_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string joined;
    for (const auto& e : v) joined += (joined.empty() ? "" : ",") + flag_value(e);
    return joined;
  }
  return v.dump();
}

// Rebuilds the argument list recorded in a manifest.
std::vector<std::string> manifest_args(const json& m) {
  std::vector<std::string> args;
  try {
    for (const auto& [key, value] : m.at("globals").items()) {
      args.push_back("--" + key);
      args.push_back(flag_value(value));
    }
    args.push_back(m.at("command").get<std::string>());
    for (const auto& [key, value] : m.at("config").items()) {
      if (value.is_null()) continue;
      args.push_back("--" + key);
      args.push_back(flag_value(value));
    }
  } catch (const json::exception& e) {
    throw IngestError(IngestErrorKind::malformed, std::string("manifest: ") + e.what());
  }
  return args;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"Fractal hand design pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--units", g.units, "Length unit declared for the run");
  app.add_option("--out-dir", g.out_dir, "Directory receiving all outputs");
  app.add_option("--seed", g.seed, "Seed for grid-offset averaging");
  app.add_option("--workers", g.workers, "Worker threads (0: machine parallelism)");
  app.add_option("--format", g.format, "Summary format on stdout")->check(CLI::IsMember({"json", "csv"}));

  DimArgs dim;
  SynthArgs synth;
  RcmArgs rcm;
  CspaceArgs cspace;
  CompareArgs cmp;
  MonoArgs mono;
  std::string manifest_path;
  add_dim(app.add_subcommand("dim", "Box-counting dimension and scale extraction"), dim);
  add_synth(app.add_subcommand("synth", "Finger tree depth and width from feature scales"), synth);
  add_rcm(app.add_subcommand("rcm", "Remote-center linkage cascade"), rcm);
  add_cspace(app.add_subcommand("cspace", "Closure map over hand-center pairs"), cspace);
  add_compare(app.add_subcommand("compare", "Fractal hand against antipodal grasps"), cmp);
  add_mono(app.add_subcommand("monotonicity", "Coverage against span and depth"), mono);
  app.add_subcommand("rerun", "Repeat a run from its manifest.json")
      ->add_option("manifest", manifest_path, "Path to manifest.json")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIngest;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (g.units.empty()) throw InvalidArgument("--units must not be empty");
    if (command == "rerun") {
      if (depth > 0) throw InvalidArgument("a manifest cannot request another rerun");
      std::vector<std::string> again = manifest_args(read_json(manifest_path));
      again.insert(again.begin(), {"--out-dir", g.out_dir, "--workers", std::to_string(g.workers)});
      return execute(again, out, err, depth + 1);
    }

    Result r;
    json config;
    if (command == "dim") {
      r = run_dim(dim, g);
      config = dim_config(dim);
    } else if (command == "synth") {
      r = run_synth(synth, g);
      config = synth_config(synth);
    } else if (command == "rcm") {
      const FingerSpec spec = rcm_spec(rcm, g);
      r = run_rcm(rcm, spec, g);
      config = rcm_config(rcm, spec);
    } else if (command == "cspace") {
      r = run_cspace(cspace, g);
      config = cspace_config(cspace);
    } else if (command == "compare") {
      r = run_compare(cmp, g);
      config = compare_config(cmp);
    } else {
      r = run_mono(mono, g);
      config = mono_config(mono);
    }
    r.files.emplace_back("manifest.json", manifest(command, g, config, r));
    write_outputs(g.out_dir, r);
    out << (g.format == "csv" ? r.summary_csv : r.summary_json);
    return kExitOk;
  } catch (const IngestError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIngest;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitIngest;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return execute(args, out, err, 0);
}

}  // namespace fractalhand::cli
