#include "fractalhand/rcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fractalhand/error.hpp"
#include "fractalhand/parallel.hpp"

namespace fractalhand {

double TrapezoidDesign::half_angle() const { return std::numbers::pi / 2.0 - phi; }

TrapezoidDesign build_trapezoid(double phi, double h, double H, std::optional<double> depth_offset) {
  if (!(phi > 0.0) || !(phi < std::numbers::pi / 2.0)) {
    throw InvalidArgument("phi must lie strictly between 0 and pi/2 for the legs to converge");
  }
  if (!(h > 0.0) || !(H > 0.0)) throw InvalidArgument("h and H must be positive");
  const double depth = depth_offset.value_or(h);
  if (!(depth > 0.0)) throw InvalidArgument("depth offset must be positive");

  TrapezoidDesign d;
  d.phi = phi;
  d.h = h;
  d.H = H;
  d.depth_offset = depth;
  const double beta = d.half_angle();
  const double t = std::tan(beta);
  // Points on the rays from O at axial depth z sit at half-width z*tan(beta).
  d.platform_left = {-H * t, 0.0};
  d.platform_right = {H * t, 0.0};
  d.ground_left = {-(H + depth) * t, -depth};
  d.ground_right = {(H + depth) * t, -depth};
  d.leg_length = depth / std::cos(beta);
  d.platform_width = 2.0 * H * t;
  d.ground_width = 2.0 * (H + depth) * t;
  return d;
}

namespace {

std::optional<CouplerPose> try_input(const TrapezoidDesign& d, double input_angle) {
  const Vec2 left = d.ground_left + rotated(d.platform_left - d.ground_left, input_angle);
  const double r0 = d.platform_width;  // coupler, centred on the moved left pivot
  const double r1 = d.leg_length;      // right leg, centred on its ground pivot
  const Vec2 delta = d.ground_right - left;
  const double dist = norm(delta);
  if (!(dist > 0.0) || dist > r0 + r1 || dist < std::abs(r0 - r1)) return std::nullopt;

  const double a = (r0 * r0 - r1 * r1 + dist * dist) / (2.0 * dist);
  const double h2 = r0 * r0 - a * a;
  const double off = std::sqrt(std::max(h2, 0.0));
  const Vec2 e = delta / dist;
  const Vec2 base = left + a * e;
  // Neutral assembly has the right platform pivot to the left of ray (left -> ground_right).
  const Vec2 right = base + off * perp_left(e);

  CouplerPose pose;
  pose.left = left;
  pose.right = right;
  pose.input_angle = input_angle;
  const Vec2 c = right - left;
  pose.rotation = std::atan2(c.y, c.x);
  return pose;
}

bool margin_ok(const TrapezoidDesign& d, const CouplerPose& pose, double margin) {
  if (margin <= 0.0) return true;
  const auto [mu_left, mu_right] = transmission_angles(d, pose);
  const double hi = std::numbers::pi - margin;
  return mu_left >= margin && mu_left <= hi && mu_right >= margin && mu_right <= hi;
}

constexpr double kScanStep = 0.25 * std::numbers::pi / 180.0;

// Signed leg angle at which motion in direction `dir` (+1/-1) stops being admissible.
double scan_input_limit(const TrapezoidDesign& d, double dir, double margin) {
  // Leg rotation drives the platform the opposite way.
  const double sense = -dir;
  double good = 0.0;
  double good_rotation = 0.0;
  auto admissible = [&](double alpha, double floor_rotation, double* rotation) {
    const auto pose = try_input(d, alpha);
    if (!pose || !margin_ok(d, *pose, margin)) return false;
    if (!(pose->rotation * sense > floor_rotation * sense)) return false;
    *rotation = pose->rotation;
    return true;
  };

  double bad = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1;; ++k) {
    const double alpha = dir * k * kScanStep;
    if (std::abs(alpha) >= std::numbers::pi) return dir * std::numbers::pi;
    double rotation;
    if (!admissible(alpha, good_rotation, &rotation)) {
      bad = alpha;
      break;
    }
    good = alpha;
    good_rotation = rotation;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (good + bad);
    if (mid == good || mid == bad) break;
    double rotation;
    if (admissible(mid, good_rotation, &rotation)) {
      good = mid;
      good_rotation = rotation;
    } else {
      bad = mid;
    }
  }
  return good;
}

}  // namespace

CouplerPose solve_input_angle(const TrapezoidDesign& design, double input_angle) {
  auto pose = try_input(design, input_angle);
  if (!pose) {
    const BranchLimits lim = branch_limits(design);
    throw BranchLimitError("loop does not close at leg angle " + std::to_string(input_angle),
                           input_angle < 0.0 ? lim.input_for_positive : lim.input_for_negative);
  }
  return *pose;
}

std::pair<double, double> transmission_angles(const TrapezoidDesign& design,
                                              const CouplerPose& pose) {
  auto angle = [](Vec2 u, Vec2 v) { return std::atan2(std::abs(cross(u, v)), dot(u, v)); };
  const Vec2 coupler = pose.right - pose.left;
  return {angle(design.ground_left - pose.left, coupler),
          angle(-coupler, design.ground_right - pose.right)};
}

BranchLimits branch_limits(const TrapezoidDesign& design, double transmission_margin) {
  BranchLimits lim;
  lim.input_for_positive = scan_input_limit(design, -1.0, transmission_margin);
  lim.input_for_negative = scan_input_limit(design, +1.0, transmission_margin);
  const auto pos = try_input(design, lim.input_for_positive);
  const auto neg = try_input(design, lim.input_for_negative);
  const double up = pos ? pos->rotation : 0.0;
  const double down = neg ? -neg->rotation : 0.0;
  lim.rotation_limit = std::max(0.0, std::min(up, down));
  return lim;
}

CouplerPose solve_pose(const TrapezoidDesign& design, double rotation) {
  return solve_pose(design, rotation, branch_limits(design));
}

CouplerPose solve_pose(const TrapezoidDesign& design, double rotation, const BranchLimits& limits) {
  if (rotation == 0.0) return *try_input(design, 0.0);
  if (std::abs(rotation) > limits.rotation_limit) {
    throw BranchLimitError("platform rotation " + std::to_string(rotation) + " beyond branch limit",
                           std::copysign(limits.rotation_limit, rotation));
  }
  double lo = 0.0;
  double hi = rotation > 0.0 ? limits.input_for_positive : limits.input_for_negative;
  CouplerPose best = *try_input(design, 0.0);
  // rotation(alpha) is monotone on [0, hi]; bisect on the leg angle.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const auto pose = try_input(design, mid);
    if (!pose) {
      hi = mid;
      continue;
    }
    best = *pose;
    if (std::abs(pose->rotation) < std::abs(rotation)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const auto at_hi = try_input(design, hi);
  if (at_hi && std::abs(at_hi->rotation - rotation) < std::abs(best.rotation - rotation)) {
    best = *at_hi;
  }
  return best;
}

double LoopResiduals::max() const { return std::max({left_leg, right_leg, coupler}); }

LoopResiduals loop_residuals(const TrapezoidDesign& design, const CouplerPose& pose) {
  LoopResiduals r;
  r.left_leg = std::abs(distance(design.ground_left, pose.left) - design.leg_length) / design.leg_length;
  r.right_leg =
      std::abs(distance(design.ground_right, pose.right) - design.leg_length) / design.leg_length;
  r.coupler = std::abs(distance(pose.left, pose.right) - design.platform_width) / design.platform_width;
  return r;
}

Vec2 instant_center(const TrapezoidDesign& design, const CouplerPose& pose) {
  const auto ic = line_intersection(design.ground_left, pose.left, design.ground_right, pose.right);
  if (!ic) throw GeometryError("legs are parallel; instant center at infinity");
  return *ic;
}

Vec2 instant_center(const TrapezoidDesign& design, double rotation) {
  return instant_center(design, solve_pose(design, rotation));
}

Vec2 carried_remote_center(const TrapezoidDesign& design, const CouplerPose& pose) {
  return pose.midpoint() + rotated({0.0, design.H}, pose.rotation);
}

RcmEvaluation evaluate(const TrapezoidDesign& design, double rotation_cap,
                       const EvaluationOptions& options) {
  if (!(rotation_cap > 0.0)) throw InvalidArgument("rotation cap must be positive");
  if (options.n_samples < 16) throw InvalidArgument("n_samples must be at least 16");

  const BranchLimits limits = branch_limits(design, options.transmission_margin);
  RcmEvaluation ev;
  ev.theta_max = std::min(rotation_cap, limits.rotation_limit);
  if (!(ev.theta_max > 0.0)) return ev;

  const Vec2 O = design.remote_center();
  auto drift_at = [&](double rotation) {
    const CouplerPose pose = solve_pose(design, rotation, limits);
    if (options.drift == DriftMeasure::instant_center_max) {
      const auto ic = line_intersection(design.ground_left, pose.left, design.ground_right, pose.right);
      return ic ? distance(*ic, O) : std::numeric_limits<double>::infinity();
    }
    return distance(carried_remote_center(design, pose), O);
  };

  if (options.drift == DriftMeasure::carried_center_extreme) {
    ev.delta = std::max(drift_at(ev.theta_max), drift_at(-ev.theta_max));
  } else {
    const int n = options.n_samples;
    for (int k = 0; k < n; ++k) {
      const double rotation =
          std::clamp(-ev.theta_max + 2.0 * ev.theta_max * k / (n - 1), -ev.theta_max, ev.theta_max);
      ev.delta = std::max(ev.delta, drift_at(rotation));
    }
  }
  const double usable = std::max(design.h - ev.delta, 0.0);
  ev.a_cor = ev.theta_max * usable * usable;
  return ev;
}

namespace {

struct Candidate {
  double phi, H;
  RcmEvaluation ev;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.ev.a_cor != b.ev.a_cor) return a.ev.a_cor > b.ev.a_cor;
  if (a.phi != b.phi) return a.phi < b.phi;
  return a.H < b.H;
}

}  // namespace

LevelOptimum optimize_level(double h, const LevelSearch& search) {
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
  if (search.grid_phi < 8 || search.grid_H < 8) throw InvalidArgument("grid must be at least 8x8");
  const auto [phi_lo, phi_hi] = search.phi_range;
  const auto [H_lo, H_hi] = search.H_range.value_or(
      std::make_pair(search.H_ratio_range.first * h, search.H_ratio_range.second * h));
  if (!(phi_lo > 0.0) || !(phi_hi < std::numbers::pi / 2.0) || !(phi_lo < phi_hi)) {
    throw InvalidArgument("phi range must satisfy 0 < lo < hi < pi/2");
  }
  if (!(H_lo > 0.0) || !(H_lo < H_hi)) throw InvalidArgument("H range must satisfy 0 < lo < hi");

  auto score = [&](double phi, double H) {
    return Candidate{phi, H, evaluate(build_trapezoid(phi, h, H), search.rotation_cap, search.evaluation)};
  };

  const int gp = search.grid_phi, gh = search.grid_H;
  LevelOptimum out;
  out.surface.resize(static_cast<std::size_t>(gp) * static_cast<std::size_t>(gh));
  parallel_for(out.surface.size(), search.workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / static_cast<std::size_t>(gh));
    const int j = static_cast<int>(idx % static_cast<std::size_t>(gh));
    const double phi = phi_lo + (phi_hi - phi_lo) * i / (gp - 1);
    const double H = H_lo + (H_hi - H_lo) * j / (gh - 1);
    const Candidate c = score(phi, H);
    out.surface[idx] = {phi, H, c.ev.theta_max, c.ev.delta, c.ev.a_cor};
  });

  Candidate best{0.0, 0.0, {}};
  bool any = false;
  for (const SurfacePoint& p : out.surface) {
    const Candidate c{p.phi, p.H, {p.theta_max, p.delta, p.a_cor}};
    if (!any || better(c, best)) {
      best = c;
      any = true;
    }
  }
  if (!(best.ev.a_cor > 0.0)) {
    throw InfeasibleError("no (phi, H) grid vertex gives a positive A_cor (drift exceeds clearance everywhere)");
  }
  out.best_grid_vertex = {best.phi, best.H, best.ev.theta_max, best.ev.delta, best.ev.a_cor};

  // Golden-section line search on one axis, bracket clipped to the search box.
  constexpr double kInvPhi = 0.6180339887498949;
  auto line_search = [&](bool along_phi, double radius) {
    const double center = along_phi ? best.phi : best.H;
    const double lo_bound = along_phi ? phi_lo : H_lo;
    const double hi_bound = along_phi ? phi_hi : H_hi;
    double a = std::max(lo_bound, center - radius);
    double b = std::min(hi_bound, center + radius);
    auto at = [&](double x) { return along_phi ? score(x, best.H) : score(best.phi, x); };
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    Candidate fc = at(c), fd = at(d);
    auto consider = [&](const Candidate& cand) {
      if (better(cand, best)) best = cand;
    };
    consider(fc);
    consider(fd);
    const double stop = search.relative_tolerance * std::max(std::abs(center), 1e-12);
    while (b - a > stop) {
      if (fc.ev.a_cor >= fd.ev.a_cor) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = at(c);
        consider(fc);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = at(d);
        consider(fd);
      }
    }
  };

  double r_phi = (phi_hi - phi_lo) / (gp - 1);
  double r_H = (H_hi - H_lo) / (gh - 1);
  for (int round = 0; round < 40; ++round) {
    const Candidate before = best;
    line_search(true, r_phi);
    line_search(false, r_H);
    const bool still = std::abs(best.phi - before.phi) <= search.relative_tolerance * before.phi &&
                       std::abs(best.H - before.H) <= search.relative_tolerance * before.H &&
                       best.ev.a_cor - before.ev.a_cor <= search.relative_tolerance * before.ev.a_cor;
    if (still) break;
    r_phi *= 0.5;
    r_H *= 0.5;
  }

  out.design = build_trapezoid(best.phi, h, best.H);
  out.evaluation = best.ev;
  return out;
}

LevelCascade cascade(const FingerSpec& spec, std::span<const double> rotation_caps,
                     const LevelSearch& search) {
  validate(spec);
  if (spec.n < 2) throw InvalidArgument("a cascade needs n >= 2 (at least one trapezoid level)");
  const auto count = static_cast<std::size_t>(spec.n - 1);
  if (!rotation_caps.empty() && rotation_caps.size() != count) {
    throw InvalidArgument("expected " + std::to_string(count) + " rotation caps (levels " +
                          std::to_string(spec.n) + " down to 2)");
  }

  LevelCascade out;
  double h = spec.width_D / (2.0 * std::pow(static_cast<double>(spec.gamma), spec.n - 1));
  for (std::size_t k = 0; k < count; ++k) {
    const int level = spec.n - static_cast<int>(k);
    LevelSearch s = search;
    s.rotation_cap = rotation_caps.empty() ? std::numbers::pi / 4.0 : rotation_caps[k];
    CascadeLevel entry;
    entry.level = level;
    entry.rotation_cap = s.rotation_cap;
    try {
      entry.optimum = optimize_level(h, s);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("level " + std::to_string(level) + ": " + e.what(), level);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("level " + std::to_string(level) + ": " + e.what());
    }
    h = entry.optimum.design.H;
    out.levels.push_back(std::move(entry));
  }
  return out;
}

}  // namespace fractalhand
