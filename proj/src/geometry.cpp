#include "fractalhand/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "fractalhand/error.hpp"

namespace fractalhand {

const char* to_string(IngestErrorKind kind) {
  switch (kind) {
    case IngestErrorKind::io: return "io";
    case IngestErrorKind::malformed: return "malformed";
    case IngestErrorKind::open_curve: return "open-curve";
    case IngestErrorKind::self_intersecting: return "self-intersecting";
    case IngestErrorKind::degenerate: return "degenerate";
  }
  return "unknown";
}

BoundingBox bounding_box(std::span<const Vec2> points) {
  BoundingBox box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
                  {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const Vec2& p : points) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

double signed_area(std::span<const Vec2> points) {
  const std::size_t n = points.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(points[i], points[(i + 1) % n]);
  }
  return 0.5 * twice;
}

Vec2 polygon_centroid(std::span<const Vec2> points) {
  const std::size_t n = points.size();
  // Shift to the first vertex to limit cancellation on offset coordinates.
  const Vec2 origin = points[0];
  double twice_area = 0.0;
  Vec2 acc;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = points[i] - origin;
    const Vec2 b = points[(i + 1) % n] - origin;
    const double c = cross(a, b);
    twice_area += c;
    acc += c * (a + b);
  }
  if (twice_area == 0.0) return origin;
  return origin + acc / (3.0 * twice_area);
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  const int o1 = orientation(a0, a1, b0);
  const int o2 = orientation(a0, a1, b1);
  const int o3 = orientation(b0, b1, a0);
  const int o4 = orientation(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(
    std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return std::nullopt;

  // Adjacent edges only share their common vertex unless the path folds back.
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 prev = pts[(i + n - 1) % n];
    const Vec2 cur = pts[i];
    const Vec2 next = pts[(i + 1) % n];
    if (cross(cur - prev, next - cur) == 0.0 && dot(cur - prev, next - cur) < 0.0) {
      return std::make_pair((i + n - 1) % n, i);
    }
  }

  struct Edge {
    double xmin, xmax;
    std::size_t index;
  };
  std::vector<Edge> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = pts[i], b = pts[(i + 1) % n];
    edges[i] = {std::min(a.x, b.x), std::max(a.x, b.x), i};
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
    return l.xmin < r.xmin || (l.xmin == r.xmin && l.index < r.index);
  });

  for (std::size_t k = 0; k < n; ++k) {
    const Edge& e = edges[k];
    for (std::size_t m = k + 1; m < n && edges[m].xmin <= e.xmax; ++m) {
      const std::size_t i = std::min(e.index, edges[m].index);
      const std::size_t j = std::max(e.index, edges[m].index);
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) {
        return std::make_pair(i, j);
      }
    }
  }
  return std::nullopt;
}

std::optional<Vec2> line_intersection(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1,
                                      double parallel_tolerance) {
  const Vec2 d1 = p1 - p0;
  const Vec2 d2 = q1 - q0;
  const double denom = cross(d1, d2);
  if (std::abs(denom) <= parallel_tolerance * norm(d1) * norm(d2)) return std::nullopt;
  const double s = cross(q0 - p0, d2) / denom;
  return p0 + s * d1;
}

}  // namespace fractalhand
