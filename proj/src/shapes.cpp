#include <cmath>
#include <numbers>
#include <string>

#include "fractalhand/error.hpp"
#include "fractalhand/profile.hpp"

namespace fractalhand {

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::ellipse: return "ellipse";
    case ShapeKind::smoothed_pentagon: return "smoothed_pentagon";
    case ShapeKind::rounded_triangle: return "rounded_triangle";
    case ShapeKind::dogbone: return "dogbone";
    case ShapeKind::circle: return "circle";
    case ShapeKind::regular_polygon: return "regular_polygon";
    case ShapeKind::koch: return "koch";
  }
  return "unknown";
}

std::optional<ShapeKind> parse_shape_kind(std::string_view name) {
  if (name == "ellipse") return ShapeKind::ellipse;
  if (name == "smoothed_pentagon" || name == "pentagon") return ShapeKind::smoothed_pentagon;
  if (name == "rounded_triangle" || name == "triangle") return ShapeKind::rounded_triangle;
  if (name == "dogbone") return ShapeKind::dogbone;
  if (name == "circle") return ShapeKind::circle;
  if (name == "regular_polygon" || name == "polygon") return ShapeKind::regular_polygon;
  if (name == "koch" || name == "koch_segment") return ShapeKind::koch;
  return std::nullopt;
}

double default_lobe_depth(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::smoothed_pentagon: return 0.15;
    case ShapeKind::rounded_triangle: return 0.25;
    case ShapeKind::dogbone: return 0.35;
    default: return 0.0;
  }
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

Profile polar_shape(double radius, double depth, int harmonic, double sign, int samples) {
  std::vector<Vec2> pts(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = kTwoPi * i / samples;
    const double r = radius * (1.0 + sign * depth * std::cos(harmonic * t));
    pts[static_cast<std::size_t>(i)] = {r * std::cos(t), r * std::sin(t)};
  }
  return Profile::from_generator_samples(std::move(pts));
}

std::vector<Vec2> koch_snowflake(double circumradius, int iterations) {
  std::vector<Vec2> pts;
  for (int k = 0; k < 3; ++k) {
    const double a = std::numbers::pi / 2.0 + kTwoPi * k / 3.0;
    pts.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
  }
  for (int it = 0; it < iterations; ++it) {
    std::vector<Vec2> next;
    next.reserve(pts.size() * 4);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec2 a = pts[i];
      const Vec2 b = pts[(i + 1) % pts.size()];
      const Vec2 third = (b - a) / 3.0;
      const Vec2 p1 = a + third;
      const Vec2 p3 = a + 2.0 * third;
      // Interior lies to the left of a counterclockwise edge; bumps go right.
      const Vec2 peak = p1 + rotated(third, -std::numbers::pi / 3.0);
      next.insert(next.end(), {a, p1, peak, p3});
    }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace

Profile generate(const ShapeSpec& spec) {
  if (spec.sample_count < static_cast<int>(Profile::kMinVertices)) {
    throw InvalidArgument("sample_count must be at least 8");
  }
  const int n = spec.sample_count;
  const double depth = spec.lobe_depth.value_or(default_lobe_depth(spec.kind));

  switch (spec.kind) {
    case ShapeKind::ellipse: {
      require_positive(spec.semi_major, "semi_major");
      require_positive(spec.semi_minor, "semi_minor");
      std::vector<Vec2> pts(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const double t = kTwoPi * i / n;
        pts[static_cast<std::size_t>(i)] = {spec.semi_major * std::cos(t),
                                            spec.semi_minor * std::sin(t)};
      }
      return Profile::from_generator_samples(std::move(pts));
    }
    case ShapeKind::circle:
      require_positive(spec.radius, "radius");
      return polar_shape(spec.radius, 0.0, 0, 1.0, n);
    case ShapeKind::smoothed_pentagon:
      require_positive(spec.radius, "radius");
      require_positive(depth, "lobe_depth");
      return polar_shape(spec.radius, depth, 5, 1.0, n);
    case ShapeKind::rounded_triangle:
      require_positive(spec.radius, "radius");
      require_positive(depth, "lobe_depth");
      return polar_shape(spec.radius, depth, 3, 1.0, n);
    case ShapeKind::dogbone:
      require_positive(spec.radius, "radius");
      require_positive(depth, "lobe_depth");
      return polar_shape(spec.radius, depth, 2, -1.0, n);
    case ShapeKind::regular_polygon: {
      require_positive(spec.radius, "radius");
      if (spec.sides < 3) throw InvalidArgument("regular_polygon needs at least 3 sides");
      const int per_side = std::max(1, n / spec.sides);
      std::vector<Vec2> pts;
      for (int k = 0; k < spec.sides; ++k) {
        const double a0 = kTwoPi * k / spec.sides;
        const double a1 = kTwoPi * (k + 1) / spec.sides;
        const Vec2 c0{spec.radius * std::cos(a0), spec.radius * std::sin(a0)};
        const Vec2 c1{spec.radius * std::cos(a1), spec.radius * std::sin(a1)};
        for (int j = 0; j < per_side; ++j) {
          pts.push_back(c0 + (static_cast<double>(j) / per_side) * (c1 - c0));
        }
      }
      return Profile::from_points(std::move(pts));
    }
    case ShapeKind::koch:
      require_positive(spec.radius, "radius");
      if (spec.iterations < 0 || spec.iterations > 9) {
        throw InvalidArgument("koch iterations must be in [0, 9]");
      }
      return Profile::from_points(koch_snowflake(spec.radius, spec.iterations));
  }
  throw InvalidArgument("unknown shape kind");
}

ShapeSpec canonical_shape(std::string_view name, int sample_count) {
  ShapeSpec spec;
  spec.sample_count = sample_count;
  if (name == "ellipse") {
    spec.kind = ShapeKind::ellipse;
    spec.semi_major = 1.5;
    spec.semi_minor = 1.0;
  } else if (name == "pentagon" || name == "smoothed_pentagon") {
    spec.kind = ShapeKind::smoothed_pentagon;
  } else if (name == "triangle" || name == "rounded_triangle") {
    spec.kind = ShapeKind::rounded_triangle;
  } else if (name == "dogbone") {
    spec.kind = ShapeKind::dogbone;
  } else {
    throw InvalidArgument("unknown canonical shape '" + std::string(name) + "'");
  }
  return spec;
}

std::vector<std::string> canonical_shape_names() {
  return {"ellipse", "pentagon", "triangle", "dogbone"};
}

}  // namespace fractalhand
