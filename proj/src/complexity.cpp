#include "fractalhand/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fractalhand/error.hpp"
#include "fractalhand/parallel.hpp"

namespace fractalhand {

NormalizedProfile normalize_for_counting(const Profile& profile) {
  const BoundingBox& box = profile.bounds();
  const double diag = box.diagonal();
  NormalizedProfile out;
  out.scale = diag;
  out.vertices.reserve(profile.size());
  for (const Vec2& v : profile.vertices()) {
    out.vertices.push_back({(v.x - box.min.x) / diag, (v.y - box.min.y) / diag});
  }
  return out;
}

namespace {

std::int64_t cell_key(double x, double y, double inv_eps) {
  const auto ix = static_cast<std::int64_t>(std::floor(x * inv_eps));
  const auto iy = static_cast<std::int64_t>(std::floor(y * inv_eps));
  return (ix << 32) ^ (iy & 0xffffffffLL);
}

// Appends the grid-line crossing parameters of one coordinate of a segment.
void crossings(double a, double b, double eps, std::vector<double>& ts) {
  if (a == b) return;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const auto first = static_cast<std::int64_t>(std::floor(lo / eps)) + 1;
  const auto last = static_cast<std::int64_t>(std::ceil(hi / eps)) - 1;
  for (std::int64_t k = first; k <= last; ++k) {
    const double t = (static_cast<double>(k) * eps - a) / (b - a);
    if (t > 0.0 && t < 1.0) ts.push_back(t);
  }
}

}  // namespace

std::int64_t box_count(const NormalizedProfile& profile, double epsilon, Vec2 offset) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  const double inv = 1.0 / epsilon;
  const auto& vs = profile.vertices;
  const std::size_t n = vs.size();

  std::vector<std::int64_t> cells;
  std::vector<double> ts;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vs[i] + offset;
    const Vec2 b = vs[(i + 1) % n] + offset;
    ts.clear();
    ts.push_back(0.0);
    crossings(a.x, b.x, epsilon, ts);
    crossings(a.y, b.y, epsilon, ts);
    ts.push_back(1.0);
    std::sort(ts.begin(), ts.end());

    cells.push_back(cell_key(a.x, a.y, inv));
    // Between consecutive crossings the segment stays inside one cell; its midpoint names it.
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      if (!(ts[k + 1] > ts[k])) continue;
      const double tm = 0.5 * (ts[k] + ts[k + 1]);
      const Vec2 m = a + tm * (b - a);
      cells.push_back(cell_key(m.x, m.y, inv));
    }
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::int64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

std::int64_t box_count(const Profile& profile, double epsilon) {
  return box_count(normalize_for_counting(profile), epsilon);
}

double fit_slope(const BoxCountCurve& curve, std::size_t first, std::size_t last) {
  const std::size_t m = last - first + 1;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    sx += -std::log(curve.epsilons[i]);
    sy += std::log(curve.counts[i]);
  }
  const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double dx = -std::log(curve.epsilons[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(curve.counts[i]) - my);
  }
  return sxy / sxx;
}

BoxCountCurve dbc_curve(const Profile& profile, int n_scales, std::pair<double, double> eps_range,
                        const BoxCountOptions& options) {
  const auto [eps_min, eps_max] = eps_range;
  if (!(eps_min > 0.0) || !(eps_min < eps_max) || !(eps_max < 1.0)) {
    throw InvalidArgument("epsilon range must satisfy 0 < min < max < 1");
  }
  if (n_scales < 4) throw InvalidArgument("n_scales must be at least 4");
  if (options.grid_offsets < 1) throw InvalidArgument("grid_offsets must be at least 1");

  const NormalizedProfile norm_profile = normalize_for_counting(profile);
  const auto n = static_cast<std::size_t>(n_scales);

  BoxCountCurve curve;
  curve.epsilons.resize(n);
  const double lmax = std::log(eps_max), lmin = std::log(eps_min);
  for (std::size_t i = 0; i < n; ++i) {
    curve.epsilons[i] = std::exp(lmax + (lmin - lmax) * static_cast<double>(i) /
                                            static_cast<double>(n - 1));
  }
  curve.epsilons.front() = eps_max;
  curve.epsilons.back() = eps_min;

  // Offsets are drawn up front, per scale, so results do not depend on scheduling.
  std::vector<std::vector<Vec2>> offsets(n);
  if (options.grid_offsets > 1) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < options.grid_offsets; ++k) {
        const double ox = unit(rng), oy = unit(rng);
        offsets[i].push_back({ox * curve.epsilons[i], oy * curve.epsilons[i]});
      }
    }
  } else {
    for (auto& o : offsets) o.push_back({});
  }

  curve.counts.resize(n);
  parallel_for(n, options.workers, [&](std::size_t i) {
    double total = 0.0;
    for (const Vec2& off : offsets[i]) {
      total += static_cast<double>(box_count(norm_profile, curve.epsilons[i], off));
    }
    curve.counts[i] = total / static_cast<double>(offsets[i].size());
  });

  curve.dbc.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    curve.dbc[i] = -std::log(curve.counts[i]) / std::log(curve.epsilons[i]);
  }

  curve.slope_dbc.resize(n);
  const std::size_t window = std::min<std::size_t>(5, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t half = window / 2;
    std::size_t first = i >= half ? i - half : 0;
    first = std::min(first, n - window);
    curve.slope_dbc[i] = fit_slope(curve, first, first + window - 1);
  }
  return curve;
}

ComplexityReport extract_scales(const BoxCountCurve& curve, const Profile& profile,
                                double tolerance, ConvergenceSignal signal) {
  if (curve.epsilons.empty()) throw InvalidArgument("empty box-count curve");
  const std::vector<double>& values = signal == ConvergenceSignal::direct_ratio ? curve.dbc
                                                                                : curve.slope_dbc;
  const double diag = profile.bounds().diagonal();

  ComplexityReport report;
  report.tolerance = tolerance;
  report.signal = signal;
  report.d_max = profile.max_vertex_distance();

  // Epsilons descend, so walk from the finest scale toward coarser ones.
  std::size_t i = curve.epsilons.size();
  while (i > 0 && std::abs(values[i - 1] - 1.0) <= tolerance) --i;
  if (i == curve.epsilons.size()) {
    report.converged = false;
    report.d_min = curve.epsilons.back() * diag;
  } else {
    report.converged = true;
    report.d_min = curve.epsilons[i] * diag;
  }
  report.d_min = std::min(report.d_min, report.d_max);
  return report;
}

}  // namespace fractalhand
