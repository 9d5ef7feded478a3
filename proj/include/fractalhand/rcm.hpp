#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fractalhand/geometry.hpp"
#include "fractalhand/synthesis.hpp"

namespace fractalhand {

// Isosceles trapezoidal four-bar. Frame: symmetry axis along +y, moving-platform midpoint
// at the origin at neutral, remote center O = (0, H) on the object side. Both legs lie on
// rays from O at half-angle beta = pi/2 - phi from the axis; platform pivots sit at depth
// H below O, ground pivots at depth H + depth_offset.
struct TrapezoidDesign {
  double phi = 0.0;           // leg-to-platform bar angle at neutral
  double h = 0.0;             // clearance allotted to this level
  double H = 0.0;             // platform midpoint to remote center
  double depth_offset = 0.0;  // platform-to-ground distance along the axis
  Vec2 ground_left, ground_right;
  Vec2 platform_left, platform_right;
  double leg_length = 0.0;
  double platform_width = 0.0;
  double ground_width = 0.0;

  double half_angle() const;
  Vec2 remote_center() const { return {0.0, H}; }
};

// Throws InvalidArgument unless 0 < phi < pi/2, h > 0, H > 0 and depth_offset > 0
// (depth_offset defaults to h).
TrapezoidDesign build_trapezoid(double phi, double h, double H,
                                std::optional<double> depth_offset = std::nullopt);

struct CouplerPose {
  Vec2 left;                 // left platform pivot
  Vec2 right;                // right platform pivot
  double rotation = 0.0;     // platform rotation from neutral, counterclockwise positive
  double input_angle = 0.0;  // left leg rotation about its ground pivot

  Vec2 midpoint() const { return 0.5 * (left + right); }
};

// Crank-driven position solution: rotates the left leg by input_angle, closes the loop by
// circle-circle intersection and keeps the assembly branch of the neutral pose.
// Throws BranchLimitError when the loop cannot close.
CouplerPose solve_input_angle(const TrapezoidDesign& design, double input_angle);

// Transmission angles in [0, pi]: at the left platform pivot (leg vs coupler) and at the
// right platform pivot (coupler vs right leg).
std::pair<double, double> transmission_angles(const TrapezoidDesign& design,
                                              const CouplerPose& pose);

// Largest in-branch platform rotation magnitude. Motion stops where the loop fails to close,
// a transmission angle leaves [margin, pi - margin], or the rotation stops growing
// monotonically with the leg angle. Symmetric by construction of the linkage.
struct BranchLimits {
  double input_for_positive = 0.0;  // leg angle reaching +rotation_limit (negative)
  double input_for_negative = 0.0;  // leg angle reaching -rotation_limit (positive)
  double rotation_limit = 0.0;
};
BranchLimits branch_limits(const TrapezoidDesign& design, double transmission_margin = 0.0);

// Pose with the given platform rotation (the quantity whose sign flips under mirroring).
// Throws BranchLimitError carrying the last reachable rotation when beyond the branch.
CouplerPose solve_pose(const TrapezoidDesign& design, double rotation);
CouplerPose solve_pose(const TrapezoidDesign& design, double rotation, const BranchLimits& limits);

struct LoopResiduals {
  double left_leg = 0.0;  // relative length errors
  double right_leg = 0.0;
  double coupler = 0.0;
  double max() const;
};
LoopResiduals loop_residuals(const TrapezoidDesign& design, const CouplerPose& pose);

// Intersection of the two leg lines. Throws GeometryError when the legs are parallel.
Vec2 instant_center(const TrapezoidDesign& design, const CouplerPose& pose);
Vec2 instant_center(const TrapezoidDesign& design, double rotation);

// The platform-attached point that coincides with O at neutral, carried to `pose`.
Vec2 carried_remote_center(const TrapezoidDesign& design, const CouplerPose& pose);

enum class DriftMeasure {
  carried_center_max,      // max |O'(theta) - O| over the sweep
  carried_center_extreme,  // |O'(+-theta_max) - O| only
  instant_center_max,      // max |IC(theta) - O| over the sweep
};

struct EvaluationOptions {
  int n_samples = 64;
  double transmission_margin = 5.0 * std::numbers::pi / 180.0;
  DriftMeasure drift = DriftMeasure::carried_center_max;
};

struct RcmEvaluation {
  double theta_max = 0.0;  // usable half-range of platform rotation
  double delta = 0.0;      // remote-center drift over [-theta_max, theta_max]
  double a_cor = 0.0;      // theta_max * max(h - delta, 0)^2
};

// Throws InvalidArgument unless rotation_cap > 0 and n_samples >= 16.
RcmEvaluation evaluate(const TrapezoidDesign& design, double rotation_cap,
                       const EvaluationOptions& options = {});

struct SurfacePoint {
  double phi, H, theta_max, delta, a_cor;
};

struct LevelSearch {
  std::pair<double, double> phi_range{20.0 * std::numbers::pi / 180.0,
                                      88.0 * std::numbers::pi / 180.0};
  // Absolute H bounds; when empty, H_ratio_range * h.
  std::optional<std::pair<double, double>> H_range;
  std::pair<double, double> H_ratio_range{1.25, 4.0};
  int grid_phi = 24;
  int grid_H = 24;
  double rotation_cap = std::numbers::pi / 4.0;
  double relative_tolerance = 1e-4;
  EvaluationOptions evaluation;
  int workers = 1;
};

struct LevelOptimum {
  TrapezoidDesign design;
  RcmEvaluation evaluation;
  std::vector<SurfacePoint> surface;  // phi-major, grid_phi * grid_H rows
  SurfacePoint best_grid_vertex{};
};

// Grid search over (phi, H) for the largest a_cor, ties to the smallest (phi, H), then
// alternating golden-section refinement on each axis, accepting only improvements.
// Throws InfeasibleError when every grid vertex scores zero.
LevelOptimum optimize_level(double h, const LevelSearch& search = {});

struct CascadeLevel {
  int level = 0;
  double rotation_cap = 0.0;
  LevelOptimum optimum;
};

// Trapezoid levels ordered deepest first (level n down to level 2); the remaining joint
// level is a plain revolute and has no trapezoid.
struct LevelCascade {
  std::vector<CascadeLevel> levels;
};

// Deepest trapezoid gets h = D / (2 gamma^(n-1)); each shallower level takes the deeper
// level's optimized H as its h. rotation_caps lists caps from level n down to level 2
// (empty: pi/4 each). Throws InvalidArgument for n < 2 and InfeasibleError naming the level.
LevelCascade cascade(const FingerSpec& spec, std::span<const double> rotation_caps,
                     const LevelSearch& search = {});

}  // namespace fractalhand
