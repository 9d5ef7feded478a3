#include "fractalhand/grasp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "fractalhand/error.hpp"
#include "fractalhand/kernels/kernels.hpp"
#include "fractalhand/parallel.hpp"
#include "fractalhand/simplex.hpp"

namespace fractalhand {

std::string_view to_string(HandKind kind) {
  return kind == HandKind::fractal_hand ? "fractal_hand" : "antipodal";
}

ContactModel ContactModel::fractal_hand(int depth_n, double grasp_span, double mu) {
  if (depth_n < 1 || depth_n > 20) throw InvalidArgument("fractal hand depth must lie in [1, 20]");
  ContactModel m;
  m.kind = HandKind::fractal_hand;
  m.contacts_per_finger = 1 << (depth_n - 1);
  m.grasp_span = grasp_span;
  m.mu = mu;
  return m;
}

ContactModel ContactModel::antipodal(double mu) {
  ContactModel m;
  m.kind = HandKind::antipodal;
  m.contacts_per_finger = 1;
  m.mu = mu;
  return m;
}

void validate(const ContactModel& model) {
  if (!(model.mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (model.contacts_per_finger < 1) throw InvalidArgument("contacts_per_finger must be at least 1");
  if (model.kind == HandKind::fractal_hand &&
      !(model.grasp_span > 0.0 && model.grasp_span < std::numbers::pi)) {
    throw InvalidArgument("grasp span must lie in (0, pi)");
  }
  if (model.torque_scale_rho && !(*model.torque_scale_rho > 0.0)) {
    throw InvalidArgument("torque scale rho must be positive");
  }
}

std::vector<Contact> place_contacts(const Profile& profile, const ContactModel& model,
                                    double theta_a, double theta_b) {
  validate(model);
  std::vector<Contact> out;
  const bool spread = model.kind == HandKind::fractal_hand;
  const int m = spread ? model.contacts_per_finger : 1;
  out.reserve(2 * static_cast<std::size_t>(m));
  for (const double center : {theta_a, theta_b}) {
    for (int j = 0; j < m; ++j) {
      const double u = m == 1 ? 0.0 : static_cast<double>(j) / (m - 1) - 0.5;
      if (model.placement == ContactPlacement::curve_parameter) {
        const double theta = center + model.grasp_span * u;
        out.push_back({profile.point_at(theta), profile.inward_normal_at(theta)});
      } else {
        const double s = profile.arclength_at(center) +
                         model.grasp_span / kTwoPi * profile.perimeter() * u;
        out.push_back({profile.point_at_arclength(s), profile.inward_normal_at_arclength(s)});
      }
    }
  }
  return out;
}

WrenchSet wrench_set(std::span<const Contact> contacts, double mu, double rho, Vec2 reference) {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  const double half = std::atan(mu);
  WrenchSet ws;
  for (const Contact& c : contacts) {
    const double len = norm(c.inward_normal);
    if (!(len > 1e-12)) throw GeometryError("contact normal has zero length");
    const Vec2 n = c.inward_normal / len;
    const Vec2 r = c.point - reference;
    for (const double side : {-half, half}) {
      const Vec2 f = rotated(n, side);
      ws.push(f.x, f.y, cross(r, f) / rho);
    }
  }
  return ws;
}

namespace {

// Near-uniform directions on the unit sphere (Fibonacci lattice) for the separating test.
struct DirectionSet {
  std::vector<double> x, y, z;
};

const DirectionSet& prefilter_directions() {
  static const DirectionSet dirs = [] {
    constexpr int kCount = 256;
    DirectionSet d;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kCount; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / kCount;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      d.x.push_back(r * std::cos(golden * i));
      d.y.push_back(r * std::sin(golden * i));
      d.z.push_back(z);
    }
    for (const double s : {1.0, -1.0}) {
      d.x.insert(d.x.end(), {s, 0.0, 0.0});
      d.y.insert(d.y.end(), {0.0, s, 0.0});
      d.z.insert(d.z.end(), {0.0, 0.0, s});
    }
    return d;
  }();
  return dirs;
}

constexpr double kSeparationSlack = 1e-12;
constexpr double kRankTolerance = 1e-9;

}  // namespace

ClosureResult analyze_closure(const WrenchSet& ws, const ClosureOptions& options) {
  ClosureResult out;
  out.margin = -std::numeric_limits<double>::infinity();
  const std::size_t m = ws.size();
  if (m == 0) return out;

  WrenchSet unit;
  unit.fx.reserve(m);
  unit.fy.reserve(m);
  unit.tau.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double len = std::sqrt(ws.fx[i] * ws.fx[i] + ws.fy[i] * ws.fy[i] + ws.tau[i] * ws.tau[i]);
    if (!(len > 0.0)) continue;
    unit.push(ws.fx[i] / len, ws.fy[i] / len, ws.tau[i] / len);
  }
  const std::size_t k = unit.size();
  if (k < 4) {
    // Fewer than four vectors cannot positively span R^3; still report the rank.
    if (k == 0) return out;
  }

  Eigen::Matrix3Xd W(3, static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    W(0, static_cast<Eigen::Index>(i)) = unit.fx[i];
    W(1, static_cast<Eigen::Index>(i)) = unit.fy[i];
    W(2, static_cast<Eigen::Index>(i)) = unit.tau[i];
  }
  const Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(W);
  const auto sv = svd.singularValues();
  out.rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTolerance * sv(0)) ++out.rank;
  }
  if (out.rank < 3 || k < 4) return out;

  if (options.separating_direction_prefilter) {
    const DirectionSet& dirs = prefilter_directions();
    std::vector<double> best(dirs.x.size());
    kernels::max_dot3({dirs.x, dirs.y, dirs.z}, {unit.fx, unit.fy, unit.tau}, best);
    if (*std::min_element(best.begin(), best.end()) < -kSeparationSlack) {
      out.margin = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
  }

  // lambda_i = t + mu_i with mu_i >= 0 and t = t_plus - t_minus free:
  //   t * sum_i w_i + sum_i mu_i w_i = 0,   m t + sum_i mu_i = 1,   maximize t.
  StandardFormLp lp;
  lp.rows = 4;
  lp.cols = k + 2;
  lp.A.assign(lp.rows * lp.cols, 0.0);
  lp.b = {0.0, 0.0, 0.0, 1.0};
  lp.c.assign(lp.cols, 0.0);
  lp.c[0] = 1.0;
  lp.c[1] = -1.0;
  const std::vector<double>* comps[3] = {&unit.fx, &unit.fy, &unit.tau};
  for (std::size_t r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      lp.A[r * lp.cols + 2 + i] = (*comps[r])[i];
      sum += (*comps[r])[i];
    }
    lp.A[r * lp.cols + 0] = sum;
    lp.A[r * lp.cols + 1] = -sum;
  }
  lp.A[3 * lp.cols + 0] = static_cast<double>(k);
  lp.A[3 * lp.cols + 1] = -static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) lp.A[3 * lp.cols + 2 + i] = 1.0;

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) return out;
  out.margin = sol.objective;
  out.closure = out.margin > options.tolerance;
  return out;
}

bool wrench_closure(const WrenchSet& ws, double tolerance) {
  ClosureOptions options;
  options.tolerance = tolerance;
  return analyze_closure(ws, options).closure;
}

CoverageMap coverage_map(const Profile& profile, const ContactModel& model, int grid_size,
                         const CoverageOptions& options) {
  validate(model);
  if (grid_size < 8) throw InvalidArgument("grid_size must be at least 8");
  const double rho = model.torque_scale_rho.value_or(profile.max_centroid_distance());
  const Vec2 reference = profile.centroid();

  CoverageMap map;
  map.grid_size = grid_size;
  const auto g = static_cast<std::size_t>(grid_size);
  map.closure.assign(g * g, 0);

  // Unordered pairs (a <= b), row by row.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(g * (g + 1) / 2);
  for (int a = 0; a < grid_size; ++a) {
    for (int b = a; b < grid_size; ++b) pairs.emplace_back(a, b);
  }
  ClosureOptions closure_options;
  closure_options.tolerance = options.tolerance;
  parallel_for(pairs.size(), options.workers, [&](std::size_t idx) {
    const auto [a, b] = pairs[idx];
    const auto contacts = place_contacts(profile, model, map.theta(a), map.theta(b));
    const WrenchSet ws = wrench_set(contacts, model.mu, rho, reference);
    const std::uint8_t v = analyze_closure(ws, closure_options).closure ? 1 : 0;
    map.closure[static_cast<std::size_t>(a) * g + static_cast<std::size_t>(b)] = v;
    map.closure[static_cast<std::size_t>(b) * g + static_cast<std::size_t>(a)] = v;
  });

  std::size_t count = 0;
  for (const std::uint8_t v : map.closure) count += v;
  map.coverage_fraction = static_cast<double>(count) / static_cast<double>(g * g);
  return map;
}

Comparison compare(const Profile& profile, const ContactModel& fractal, const ContactModel& antipodal,
                   int grid_size, const CoverageOptions& options) {
  if (fractal.mu != antipodal.mu) throw InvalidArgument("models must share mu");
  if (fractal.torque_scale_rho != antipodal.torque_scale_rho) {
    throw InvalidArgument("models must share the torque scale rho");
  }
  Comparison out;
  out.fractal = coverage_map(profile, fractal, grid_size, options);
  out.antipodal = coverage_map(profile, antipodal, grid_size, options);
  out.improvement = out.fractal.coverage_fraction - out.antipodal.coverage_fraction;
  out.wins.resize(out.fractal.closure.size());
  for (std::size_t i = 0; i < out.wins.size(); ++i) {
    out.wins[i] = static_cast<std::int8_t>(static_cast<int>(out.fractal.closure[i]) -
                                           static_cast<int>(out.antipodal.closure[i]));
  }
  return out;
}

BatchComparison compare_batch(const std::vector<std::pair<std::string, Profile>>& shapes,
                              const ContactModel& fractal, const ContactModel& antipodal,
                              int grid_size, const CoverageOptions& options) {
  BatchComparison out;
  double total = 0.0;
  for (const auto& [name, profile] : shapes) {
    const Comparison c = compare(profile, fractal, antipodal, grid_size, options);
    out.records.push_back({name, fractal.mu, c.fractal.coverage_fraction,
                           c.antipodal.coverage_fraction, c.improvement});
    total += c.improvement;
  }
  if (!shapes.empty()) out.mean_improvement = total / static_cast<double>(shapes.size());
  return out;
}

std::vector<MonotonicityRow> coverage_monotonicity(const Profile& profile, const ContactModel& base,
                                                   const std::vector<double>& spans,
                                                   const std::vector<int>& depths, int grid_size,
                                                   const CoverageOptions& options) {
  if (!std::is_sorted(spans.begin(), spans.end()) || !std::is_sorted(depths.begin(), depths.end())) {
    throw InvalidArgument("span and depth sweeps must be ascending");
  }
  std::vector<MonotonicityRow> rows;
  for (const double span : spans) {
    for (const int n : depths) {
      ContactModel model = ContactModel::fractal_hand(n, span, base.mu);
      model.torque_scale_rho = base.torque_scale_rho;
      model.placement = base.placement;
      rows.push_back({span, n, coverage_map(profile, model, grid_size, options).coverage_fraction});
    }
  }
  return rows;
}

}  // namespace fractalhand
