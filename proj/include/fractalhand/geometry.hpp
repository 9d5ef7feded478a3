#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <utility>

namespace fractalhand {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

// Counterclockwise quarter turn.
constexpr Vec2 perp_left(Vec2 a) { return {-a.y, a.x}; }

inline Vec2 rotated(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

// Mirror across the y axis.
constexpr Vec2 mirror_x(Vec2 a) { return {-a.x, a.y}; }

// Wraps an angle into [0, 2pi).
inline double wrap_two_pi(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// Wraps an angle into (-pi, pi].
inline double wrap_pi(double theta) {
  double t = wrap_two_pi(theta);
  if (t > std::numbers::pi) t -= kTwoPi;
  return t;
}

struct BoundingBox {
  Vec2 min;
  Vec2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double diagonal() const { return std::hypot(width(), height()); }
};

BoundingBox bounding_box(std::span<const Vec2> points);

// Shoelace area of the closed polygon through `points`; positive when counterclockwise.
double signed_area(std::span<const Vec2> points);

// Area centroid of a closed simple polygon.
Vec2 polygon_centroid(std::span<const Vec2> points);

// True when closed segments [a0,a1] and [b0,b1] share at least one point.
bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);

// Scans a closed polyline for a pair of non-adjacent edges that touch, or adjacent
// edges that fold back onto each other. Returns the offending edge indices.
std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(
    std::span<const Vec2> closed_polyline);

// Intersection of the infinite lines p0 + s*(p1-p0) and q0 + t*(q1-q0), or nullopt if parallel.
std::optional<Vec2> line_intersection(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1,
                                      double parallel_tolerance = 1e-14);

}  // namespace fractalhand
