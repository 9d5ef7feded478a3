#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fractalhand/profile.hpp"

namespace fractalhand {

enum class HandKind { fractal_hand, antipodal };

std::string_view to_string(HandKind kind);

// Where finger contacts go relative to each hand center.
enum class ContactPlacement {
  curve_parameter,  // spread uniformly in theta
  arc_length,       // spread uniformly in arc length; span measured as span/(2 pi) of perimeter
};

struct ContactModel {
  HandKind kind = HandKind::antipodal;
  int contacts_per_finger = 1;  // 2^(n-1) for a fractal hand of depth n
  double grasp_span = 0.0;      // radians of curve parameter covered per hand center
  double mu = 0.3;              // Coulomb friction coefficient
  std::optional<double> torque_scale_rho;  // defaults to the profile's max centroid distance
  ContactPlacement placement = ContactPlacement::curve_parameter;

  static ContactModel fractal_hand(int depth_n, double grasp_span, double mu);
  static ContactModel antipodal(double mu);
};

// Throws InvalidArgument unless mu > 0, contacts_per_finger >= 1 and, for fractal hands,
// 0 < grasp_span < pi.
void validate(const ContactModel& model);

struct Contact {
  Vec2 point;
  Vec2 inward_normal;
};

// Fractal hand: for each center c in {theta_a, theta_b}, contacts at
// c + span * (j/(m-1) - 1/2), j = 0..m-1 (m = 1 places one contact at c).
// Antipodal: one contact at each of theta_a, theta_b.
std::vector<Contact> place_contacts(const Profile& profile, const ContactModel& model,
                                    double theta_a, double theta_b);

// Planar wrenches (f_x, f_y, tau/rho) stored as structure of arrays.
struct WrenchSet {
  std::vector<double> fx, fy, tau;

  std::size_t size() const { return fx.size(); }
  void push(double x, double y, double t) {
    fx.push_back(x);
    fy.push_back(y);
    tau.push_back(t);
  }
};

// Two friction-cone edge wrenches per contact: the inward normal rotated by -atan(mu) then
// +atan(mu), unit force, torque (p - reference) x f / rho.
// Throws InvalidArgument for mu <= 0 or rho <= 0, GeometryError for a zero normal.
WrenchSet wrench_set(std::span<const Contact> contacts, double mu, double rho, Vec2 reference);

inline constexpr double kClosureTolerance = 1e-6;

struct ClosureOptions {
  double tolerance = kClosureTolerance;
  // Rejects early when a precomputed direction strictly separates every wrench from the
  // origin. Never changes the decision; disable to always obtain the LP margin.
  bool separating_direction_prefilter = true;
};

struct ClosureResult {
  bool closure = false;
  int rank = 0;
  // max t such that a combination with every coefficient >= t and coefficients summing to 1
  // balances to zero (wrenches scaled to unit length); -inf when no affine combination does,
  // NaN when the prefilter decided.
  double margin = 0.0;
};

// Origin strictly inside the convex hull of the wrenches: rank 3 and margin > tolerance.
ClosureResult analyze_closure(const WrenchSet& ws, const ClosureOptions& options = {});
bool wrench_closure(const WrenchSet& ws, double tolerance = kClosureTolerance);

struct CoverageOptions {
  int workers = 1;
  double tolerance = kClosureTolerance;
};

// Closure over (theta_a, theta_b) on theta_i = 2 pi i / (grid_size - 1), i = 0..grid_size-1.
struct CoverageMap {
  int grid_size = 0;
  std::vector<std::uint8_t> closure;  // row-major, index a * grid_size + b
  double coverage_fraction = 0.0;

  bool at(int a, int b) const { return closure[static_cast<std::size_t>(a) * grid_size + b] != 0; }
  double theta(int i) const { return kTwoPi * i / (grid_size - 1); }
};

// Throws InvalidArgument for grid_size < 8. Each unordered pair is evaluated once and
// mirrored, so the map is exactly symmetric.
CoverageMap coverage_map(const Profile& profile, const ContactModel& model, int grid_size,
                         const CoverageOptions& options = {});

struct Comparison {
  CoverageMap fractal;
  CoverageMap antipodal;
  double improvement = 0.0;       // fractal - antipodal coverage fraction
  std::vector<std::int8_t> wins;  // +1 only the fractal hand closes, -1 only antipodal, 0 tie
};

// Throws InvalidArgument when mu or rho differ between the models.
Comparison compare(const Profile& profile, const ContactModel& fractal, const ContactModel& antipodal,
                   int grid_size, const CoverageOptions& options = {});

struct NamedComparison {
  std::string shape;
  double mu = 0.0;
  double fractal_coverage = 0.0;
  double antipodal_coverage = 0.0;
  double improvement = 0.0;
};

struct BatchComparison {
  std::vector<NamedComparison> records;
  double mean_improvement = 0.0;
};

BatchComparison compare_batch(const std::vector<std::pair<std::string, Profile>>& shapes,
                              const ContactModel& fractal, const ContactModel& antipodal,
                              int grid_size, const CoverageOptions& options = {});

struct MonotonicityRow {
  double grasp_span = 0.0;
  int depth_n = 0;
  double coverage = 0.0;
};

// Coverage for every (span, n) pair with the base model's mu, rho and placement.
// Rows are span-major in the given order. Throws InvalidArgument for unsorted inputs.
std::vector<MonotonicityRow> coverage_monotonicity(const Profile& profile, const ContactModel& base,
                                                   const std::vector<double>& spans,
                                                   const std::vector<int>& depths, int grid_size,
                                                   const CoverageOptions& options = {});

}  // namespace fractalhand
