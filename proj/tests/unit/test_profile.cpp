#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "fractalhand/error.hpp"
#include "fractalhand/profile.hpp"
#include "support/oracles.hpp"

using namespace fractalhand;

namespace {

constexpr double kPi = std::numbers::pi;

IngestErrorKind ingest_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const IngestError& e) {
    return e.kind();
  }
  FAIL("expected an IngestError");
  return IngestErrorKind::io;
}

// Even-odd point-in-polygon.
bool inside(std::span<const Vec2> poly, Vec2 p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

}  // namespace

TEST_CASE("unit ellipse perimeter is 2 pi") {
  ShapeSpec spec;
  spec.kind = ShapeKind::ellipse;
  spec.semi_major = spec.semi_minor = 1.0;
  spec.sample_count = 360;
  const Profile p = generate(spec);
  CHECK(p.perimeter() == doctest::Approx(2 * kPi).epsilon(1e-3));
}

TEST_CASE("ellipse 1.5 x 1 perimeter matches the elliptic-integral value") {
  const Profile p = generate(canonical_shape("ellipse"));
  const double ref = oracle::ellipse_perimeter(1.5, 1.0);
  CHECK(ref == doctest::Approx(7.9327).epsilon(1e-4));
  CHECK(p.perimeter() == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("perimeter equals the sum of edge lengths") {
  const Profile p = generate(canonical_shape("dogbone"));
  const auto v = p.vertices();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += distance(v[i], v[(i + 1) % v.size()]);
  CHECK(p.perimeter() == doctest::Approx(sum).epsilon(1e-13));
  const auto s = p.cumulative_arclength();
  CHECK(s.size() == v.size() + 1);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
}

TEST_CASE("circle point and normal queries") {
  ShapeSpec spec;
  spec.kind = ShapeKind::circle;
  const Profile c = generate(spec);
  const Vec2 p0 = c.point_at(0.0);
  CHECK(p0.x == doctest::Approx(1.0));
  CHECK(p0.y == doctest::Approx(0.0).epsilon(1e-12));
  const Vec2 p1 = c.point_at(kPi / 2);
  CHECK(p1.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p1.y == doctest::Approx(1.0));
  const Vec2 n0 = c.inward_normal_at(0.0);
  CHECK(n0.x == doctest::Approx(-1.0));
  CHECK(n0.y == doctest::Approx(0.0).epsilon(1e-12));
  const Vec2 n1 = c.inward_normal_at(kPi);
  CHECK(n1.x == doctest::Approx(1.0));
  CHECK(n1.y == doctest::Approx(0.0).epsilon(1e-9));
  const Vec2 wrapped = c.point_at(2 * kPi + 0.3);
  CHECK(distance(wrapped, c.point_at(0.3)) < 1e-12);
}

TEST_CASE("ellipse point at pi") {
  const Profile e = generate(canonical_shape("ellipse"));
  const Vec2 p = e.point_at(kPi);
  CHECK(p.x == doctest::Approx(-1.5));
  CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("generated points stay within one vertex spacing of the analytic ellipse") {
  const Profile e = generate(canonical_shape("ellipse"));
  const double spacing = e.perimeter() / static_cast<double>(e.size());
  for (int k = 0; k < 97; ++k) {
    const double t = 2 * kPi * k / 97.0 + 0.01;
    const Vec2 exact{1.5 * std::cos(t), std::sin(t)};
    CHECK(distance(e.point_at(t), exact) < spacing);
  }
}

TEST_CASE("square side 2: right edge midpoint normal points left") {
  const Profile sq = Profile::from_points({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(sq.perimeter() == doctest::Approx(8.0));
  CHECK(sq.size() >= Profile::kMinVertices);
  const Vec2 p = sq.point_at_arclength(3.0);
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
  const Vec2 n = sq.inward_normal_at_arclength(3.0);
  CHECK(n.x == doctest::Approx(-1.0));
  CHECK(n.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sq.theta_at_arclength(3.0) == doctest::Approx(2 * kPi * 3.0 / 8.0));
}

TEST_CASE("generated shapes are counterclockwise and simple") {
  std::vector<ShapeSpec> specs;
  for (const auto& name : canonical_shape_names()) specs.push_back(canonical_shape(name));
  ShapeSpec koch;
  koch.kind = ShapeKind::koch;
  koch.iterations = 3;
  specs.push_back(koch);
  ShapeSpec hex;
  hex.kind = ShapeKind::regular_polygon;
  specs.push_back(hex);
  for (const auto& spec : specs) {
    CAPTURE(to_string(spec.kind));
    const Profile p = generate(spec);
    CHECK(signed_area(p.vertices()) > 0.0);
    CHECK_FALSE(find_self_intersection(p.vertices()).has_value());
  }
}

TEST_CASE("inward normals point into the region") {
  for (const auto& name : {"ellipse", "pentagon", "triangle", "dogbone"}) {
    CAPTURE(name);
    const Profile p = generate(canonical_shape(name));
    const double step = 1e-3 * p.bounds().diagonal();
    for (int k = 0; k < 200; ++k) {
      const double t = 2 * kPi * (k + 0.37) / 200.0;
      const Vec2 n = p.inward_normal_at(t);
      CHECK(norm(n) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(inside(p.vertices(), p.point_at(t) + step * n));
      if (std::string_view(name) == "ellipse") CHECK(dot(n, p.centroid() - p.point_at(t)) > 0.0);
    }
  }
}

TEST_CASE("dogbone waist is concave") {
  const Profile p = generate(canonical_shape("dogbone"));
  const auto v = p.vertices();
  int changes = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[(i + v.size() - 1) % v.size()], b = v[i], c = v[(i + 1) % v.size()];
    const double turn = cross(b - a, c - b);
    if (prev != 0.0 && turn * prev < 0.0) ++changes;
    if (turn != 0.0) prev = turn;
  }
  CHECK(changes >= 2);
}

TEST_CASE("shape parameters are validated") {
  ShapeSpec spec;
  spec.radius = -1.0;
  CHECK_THROWS_AS(generate(spec), InvalidArgument);
  ShapeSpec deep = canonical_shape("dogbone");
  deep.lobe_depth = 1.2;
  CHECK_THROWS(generate(deep));
  CHECK(parse_shape_kind("koch_segment") == ShapeKind::koch);
  CHECK_FALSE(parse_shape_kind("banana").has_value());
}

TEST_CASE("csv square of side 2") {
  const Profile p = parse_csv_points("x,y\n0,0\n2,0\n2,2\n0,2\n");
  CHECK(p.perimeter() == doctest::Approx(8.0));
  CHECK(p.area() == doctest::Approx(4.0));
}

TEST_CASE("clockwise csv input is reoriented") {
  const Profile p = parse_csv_points("0,0\n0,2\n2,2\n2,0\n");
  CHECK(signed_area(p.vertices()) > 0.0);
  CHECK(p.vertices().front() == Vec2{0, 0});
}

TEST_CASE("ingestion error variants") {
  CHECK(ingest_kind([] { parse_csv_points("0,0\n1,1\n1,0\n0,1\n"); }) == IngestErrorKind::self_intersecting);
  CHECK(ingest_kind([] { parse_csv_points("0,0\n1,abc\n1,1\n"); }) == IngestErrorKind::malformed);
  CHECK(ingest_kind([] { parse_json_points(R"({"points": [[0,0],[1,0]],)"); }) == IngestErrorKind::malformed);
  CHECK(ingest_kind([] {
          parse_json_points(R"({"points": [[0,0],[1,0],[1,1],[0,1]], "closed": false})");
        }) == IngestErrorKind::open_curve);
  CHECK(ingest_kind([] { parse_svg_path(R"(<svg><path d="M0 0 L10 0 L10 10"/></svg>)"); }) ==
        IngestErrorKind::open_curve);
  CHECK(ingest_kind([] { load_profile("/nonexistent/profile.csv", ProfileFormat::csv_points); }) ==
        IngestErrorKind::io);
}

TEST_CASE("json points with units") {
  const Profile p = parse_json_points(R"({"points": [[0,0],[3,0],[3,4],[0,4]], "units": "mm"})");
  CHECK(p.perimeter() == doctest::Approx(14.0));
  CHECK_THROWS_AS(parse_json_points(R"({"points": [[0,0],[3,0],[3,4]], "units": "furlong"})"), IngestError);
}

TEST_CASE("svg paths flatten with absolute, relative and arc commands") {
  const Profile sq = parse_svg_path(R"(<svg xmlns="http://www.w3.org/2000/svg"><path d="M0 0 h10 v10 H0 Z"/></svg>)");
  CHECK(sq.perimeter() == doctest::Approx(40.0));
  const Profile circle = parse_svg_path(R"(<svg><path d="M 10 0 A 10 10 0 0 1 -10 0 A 10 10 0 0 1 10 0 Z"/></svg>)");
  CHECK(circle.perimeter() == doctest::Approx(2 * kPi * 10).epsilon(1e-3));
  const Profile blob = parse_svg_path(R"(<svg><path d="M0,0 C5,-5 15,-5 20,0 S25,15 20,20 Q10,30 0,20 T0,0 z"/></svg>)");
  CHECK(signed_area(blob.vertices()) > 0.0);
  CHECK_FALSE(find_self_intersection(blob.vertices()).has_value());
}

TEST_CASE("format guessing") {
  CHECK(format_from_extension("a/b.CSV") == ProfileFormat::csv_points);
  CHECK(format_from_extension("shape.svg") == ProfileFormat::svg_path);
  CHECK_FALSE(format_from_extension("shape.txt").has_value());
}

TEST_CASE("transformed keeps the parametrization and scales lengths") {
  const Profile e = generate(canonical_shape("ellipse"));
  const Profile t = e.transformed({1.0, -2.0}, 4.0);
  CHECK(t.perimeter() == doctest::Approx(4.0 * e.perimeter()));
  CHECK(distance(t.point_at(0.7), (e.point_at(0.7) - Vec2{1.0, -2.0}) * 4.0) < 1e-12);
  CHECK(t.max_vertex_distance() == doctest::Approx(4.0 * e.max_vertex_distance()));
}
