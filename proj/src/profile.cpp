#include "fractalhand/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fractalhand/error.hpp"
#include "fractalhand/kernels/kernels.hpp"

namespace fractalhand {

namespace {

std::vector<Vec2> drop_duplicates(std::vector<Vec2> pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

std::vector<Vec2> densify(const std::vector<Vec2>& pts, std::size_t min_count) {
  if (pts.size() >= min_count) return pts;
  const std::size_t parts = (min_count + pts.size() - 1) / pts.size();
  std::vector<Vec2> out;
  out.reserve(pts.size() * parts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[(i + 1) % pts.size()];
    for (std::size_t k = 0; k < parts; ++k) {
      out.push_back(a + (static_cast<double>(k) / static_cast<double>(parts)) * (b - a));
    }
  }
  return out;
}

void require_simple(std::span<const Vec2> pts) {
  if (auto hit = find_self_intersection(pts)) {
    throw IngestError(IngestErrorKind::self_intersecting,
                      "edges " + std::to_string(hit->first) + " and " +
                          std::to_string(hit->second) + " intersect");
  }
}

}  // namespace

Profile Profile::from_points(std::vector<Vec2> points) {
  std::vector<Vec2> pts = drop_duplicates(std::move(points));
  if (pts.size() < 3) {
    throw IngestError(IngestErrorKind::degenerate, "fewer than 3 distinct vertices");
  }
  require_simple(pts);
  const double area = signed_area(pts);
  if (area == 0.0) throw IngestError(IngestErrorKind::degenerate, "zero enclosed area");
  if (area < 0.0) std::reverse(pts.begin() + 1, pts.end());
  return Profile(densify(pts, kMinVertices), Parametrization::arc_length);
}

Profile Profile::from_generator_samples(std::vector<Vec2> samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] == samples[(i + 1) % samples.size()]) {
      throw IngestError(IngestErrorKind::degenerate, "coincident consecutive samples");
    }
  }
  if (samples.size() < kMinVertices) {
    throw IngestError(IngestErrorKind::degenerate, "fewer than 8 samples");
  }
  require_simple(samples);
  if (signed_area(samples) <= 0.0) {
    throw IngestError(IngestErrorKind::degenerate, "generator samples are not counterclockwise");
  }
  return Profile(std::move(samples), Parametrization::generator_angle);
}

Profile::Profile(std::vector<Vec2> vertices, Parametrization parametrization)
    : vertices_(std::move(vertices)), parametrization_(parametrization) {
  const std::size_t n = vertices_.size();
  xs_.resize(n);
  ys_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs_[i] = vertices_[i].x;
    ys_[i] = vertices_[i].y;
  }

  cumulative_.resize(n + 1);
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative_[i + 1] = cumulative_[i] + distance(vertices_[i], vertices_[(i + 1) % n]);
  }
  if (!(cumulative_.back() > 0.0)) {
    throw IngestError(IngestErrorKind::degenerate, "zero perimeter");
  }

  knots_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    knots_[i] = parametrization_ == Parametrization::generator_angle
                    ? kTwoPi * static_cast<double>(i) / static_cast<double>(n)
                    : kTwoPi * (cumulative_[i] / cumulative_.back());
  }
  knots_[n] = kTwoPi;

  vertex_tangents_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = vertices_[(i + 1) % n] - vertices_[(i + n - 1) % n];
    const double len = norm(d);
    vertex_tangents_[i] = len > 0.0 ? d / len : Vec2{};
  }

  bounds_ = bounding_box(vertices_);
  area_ = signed_area(vertices_);
  centroid_ = polygon_centroid(vertices_);
}

Profile::Location Profile::locate_theta(double theta) const {
  const double t = wrap_two_pi(theta);
  const std::size_t n = vertices_.size();
  std::size_t edge;
  if (parametrization_ == Parametrization::generator_angle) {
    edge = std::min(static_cast<std::size_t>(t / kTwoPi * static_cast<double>(n)), n - 1);
    // Guard the floor against rounding at knot values.
    while (edge > 0 && knots_[edge] > t) --edge;
    while (edge + 1 < n && knots_[edge + 1] <= t) ++edge;
  } else {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    edge = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots_.begin() - 1, 0));
    edge = std::min(edge, n - 1);
  }
  const double span = knots_[edge + 1] - knots_[edge];
  const double f = span > 0.0 ? (t - knots_[edge]) / span : 0.0;
  return {edge, std::clamp(f, 0.0, 1.0)};
}

Profile::Location Profile::locate_arclength(double s) const {
  const double p = perimeter();
  double w = std::fmod(s, p);
  if (w < 0.0) w += p;
  if (w >= p) w = 0.0;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), w);
  std::size_t edge = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin() - 1, 0));
  edge = std::min(edge, vertices_.size() - 1);
  const double len = cumulative_[edge + 1] - cumulative_[edge];
  return {edge, std::clamp((w - cumulative_[edge]) / len, 0.0, 1.0)};
}

Vec2 Profile::point_on(Location loc) const {
  const std::size_t n = vertices_.size();
  const Vec2 a = vertices_[loc.edge];
  const Vec2 b = vertices_[(loc.edge + 1) % n];
  if (loc.fraction == 0.0) return a;
  return a + loc.fraction * (b - a);
}

Vec2 Profile::normal_on(Location loc) const {
  const std::size_t n = vertices_.size();
  const Vec2 ta = vertex_tangents_[loc.edge];
  const Vec2 tb = vertex_tangents_[(loc.edge + 1) % n];
  const Vec2 t = loc.fraction == 0.0 ? ta : (1.0 - loc.fraction) * ta + loc.fraction * tb;
  const double len = norm(t);
  if (!(len > 1e-12)) {
    throw GeometryError("degenerate tangent on edge " + std::to_string(loc.edge));
  }
  return perp_left(t / len);
}

Vec2 Profile::point_at(double theta) const { return point_on(locate_theta(theta)); }

Vec2 Profile::inward_normal_at(double theta) const { return normal_on(locate_theta(theta)); }

Vec2 Profile::point_at_arclength(double s) const { return point_on(locate_arclength(s)); }

Vec2 Profile::inward_normal_at_arclength(double s) const {
  return normal_on(locate_arclength(s));
}

double Profile::arclength_at(double theta) const {
  const Location loc = locate_theta(theta);
  return cumulative_[loc.edge] +
         loc.fraction * (cumulative_[loc.edge + 1] - cumulative_[loc.edge]);
}

double Profile::theta_at_arclength(double s) const {
  const Location loc = locate_arclength(s);
  return knots_[loc.edge] + loc.fraction * (knots_[loc.edge + 1] - knots_[loc.edge]);
}

double Profile::max_vertex_distance() const {
  return std::sqrt(kernels::max_pairwise_distance_sq(xs_, ys_));
}

double Profile::max_centroid_distance() const {
  return std::sqrt(kernels::max_distance_sq_from(centroid_.x, centroid_.y, xs_, ys_));
}

Profile Profile::transformed(Vec2 offset, double scale) const {
  if (!(scale > 0.0)) throw InvalidArgument("scale must be positive");
  std::vector<Vec2> pts(vertices_.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = (vertices_[i] - offset) * scale;
  return Profile(std::move(pts), parametrization_);
}

}  // namespace fractalhand
