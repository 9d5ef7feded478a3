#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fractalhand/profile.hpp"

namespace fractalhand {

// Profile mapped so its bounding-box min corner is the origin and its diagonal is 1.
struct NormalizedProfile {
  std::vector<Vec2> vertices;  // open closed-loop, as in Profile
  double scale = 1.0;          // physical length per normalized unit (the original diagonal)
};

NormalizedProfile normalize_for_counting(const Profile& profile);

// Number of grid cells of side `epsilon` touched by the closed polyline. Cells are
// half-open [i*eps, (i+1)*eps) x [j*eps, (j+1)*eps) with the grid origin at
// (-offset.x, -offset.y) relative to the normalized min corner; offset components lie in
// [0, epsilon). Every edge is clipped against grid lines, so cells crossed between
// vertices count.
std::int64_t box_count(const NormalizedProfile& profile, double epsilon, Vec2 offset = {});

// Convenience overload: normalizes then counts. Throws InvalidArgument unless 0 < eps < 1.
std::int64_t box_count(const Profile& profile, double epsilon);

struct BoxCountOptions {
  // 1: grid anchored at the min corner. >1: mean count over this many seeded random
  // offsets (the anchored grid is not included).
  int grid_offsets = 1;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct BoxCountCurve {
  std::vector<double> epsilons;   // normalized, descending
  std::vector<double> counts;     // N(eps); integral unless offsets are averaged
  std::vector<double> dbc;        // -log N / log eps
  std::vector<double> slope_dbc;  // least-squares d log N / d log(1/eps), 5-scale window
};

// Samples n_scales log-uniform epsilons from eps_max down to eps_min.
// Throws InvalidArgument unless 0 < eps_min < eps_max < 1 and n_scales >= 4.
BoxCountCurve dbc_curve(const Profile& profile, int n_scales, std::pair<double, double> eps_range,
                        const BoxCountOptions& options = {});

// Least-squares slope of log N against log(1/eps) over curve indices [first, last].
double fit_slope(const BoxCountCurve& curve, std::size_t first, std::size_t last);

// Which curve drives convergence detection.
enum class ConvergenceSignal { direct_ratio, local_slope };

inline constexpr double kDefaultDirectTolerance = 0.3;
inline constexpr double kDefaultSlopeTolerance = 0.1;

struct ComplexityReport {
  double d_max = 0.0;  // physical units
  double d_min = 0.0;  // physical units
  bool converged = false;
  double tolerance = kDefaultDirectTolerance;
  ConvergenceSignal signal = ConvergenceSignal::direct_ratio;
};

// d_max is the largest vertex-to-vertex distance. d_min is the largest sampled epsilon
// (converted to physical length) such that every sampled scale at or below it stays within
// 1 +/- tolerance; when even the smallest scale fails, converged is false and d_min is the
// smallest sampled epsilon.
ComplexityReport extract_scales(const BoxCountCurve& curve, const Profile& profile,
                                double tolerance = kDefaultDirectTolerance,
                                ConvergenceSignal signal = ConvergenceSignal::direct_ratio);

}  // namespace fractalhand
