#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fractalhand/geometry.hpp"

namespace fractalhand {

// How the curve parameter theta in [0, 2pi) maps onto the stored vertices.
enum class Parametrization {
  generator_angle,  // vertex i sits at theta = 2*pi*i/n (sampled analytic shapes)
  arc_length,       // theta = 2*pi * (arc length from vertex 0) / perimeter
};

// Closed planar boundary stored as an open, counterclockwise polyline (the closing edge
// from the last vertex back to the first is implied). Immutable after construction.
class Profile {
 public:
  static constexpr std::size_t kMinVertices = 8;

  // Builds from an arbitrary closed point loop: drops a repeated closing vertex and
  // consecutive duplicates, rejects self-intersections, reorients to counterclockwise,
  // densifies to at least kMinVertices and parametrizes by arc length.
  // Throws IngestError.
  static Profile from_points(std::vector<Vec2> points);

  // Builds from counterclockwise samples of an analytic curve taken at uniform generator
  // angle. Throws IngestError when the samples are degenerate, clockwise or self-intersecting.
  static Profile from_generator_samples(std::vector<Vec2> samples);

  std::span<const Vec2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  // n+1 entries: 0 at vertex 0, the perimeter after the implied closing edge.
  std::span<const double> cumulative_arclength() const { return cumulative_; }

  // n+1 entries: theta of each vertex, ending at 2*pi.
  std::span<const double> parameter_knots() const { return knots_; }

  Parametrization parametrization() const { return parametrization_; }
  double perimeter() const { return cumulative_.back(); }
  const BoundingBox& bounds() const { return bounds_; }
  double area() const { return area_; }
  Vec2 centroid() const { return centroid_; }

  // Boundary point at curve parameter theta (wrapped mod 2*pi).
  Vec2 point_at(double theta) const;

  // Unit inward normal at theta. The tangent is the central difference over the
  // neighbours of each bracketing vertex, blended linearly along the edge.
  // Throws GeometryError when the blended tangent vanishes.
  Vec2 inward_normal_at(double theta) const;

  // Same queries addressed by arc length from vertex 0 (wrapped mod perimeter).
  Vec2 point_at_arclength(double s) const;
  Vec2 inward_normal_at_arclength(double s) const;

  double arclength_at(double theta) const;
  double theta_at_arclength(double s) const;

  // Largest vertex-to-vertex distance.
  double max_vertex_distance() const;

  // Largest centroid-to-vertex distance.
  double max_centroid_distance() const;

  // Copy with every coordinate mapped by p -> (p - offset) * scale. Parametrization kept.
  Profile transformed(Vec2 offset, double scale) const;

 private:
  struct Location {
    std::size_t edge;
    double fraction;
  };

  Profile(std::vector<Vec2> vertices, Parametrization parametrization);

  Location locate_theta(double theta) const;
  Location locate_arclength(double s) const;
  Vec2 point_on(Location loc) const;
  Vec2 normal_on(Location loc) const;

  std::vector<Vec2> vertices_;
  std::vector<double> xs_, ys_;
  std::vector<double> cumulative_;
  std::vector<double> knots_;
  std::vector<Vec2> vertex_tangents_;
  Parametrization parametrization_;
  BoundingBox bounds_;
  double area_ = 0.0;
  Vec2 centroid_;
};

enum class ShapeKind {
  ellipse,
  smoothed_pentagon,
  rounded_triangle,
  dogbone,
  circle,
  regular_polygon,
  koch,
};

std::string_view to_string(ShapeKind kind);

// Accepts the enum spellings plus the aliases pentagon, triangle and koch_segment.
std::optional<ShapeKind> parse_shape_kind(std::string_view name);

// Parameters for the canonical shape generators. Fields unused by a kind are ignored.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::circle;
  double radius = 1.0;      // circle radius; base radius R of the polar shapes; circumradius
                            // of regular_polygon and koch
  double semi_major = 1.5;  // ellipse a (along x)
  double semi_minor = 1.0;  // ellipse b (along y)
  std::optional<double> lobe_depth;  // polar modulation depth s; per-kind default when empty
  int sides = 6;                     // regular_polygon
  int iterations = 4;                // koch
  int sample_count = 720;            // vertices for smooth shapes, per-side hint for polygons
};

// Default modulation depth for the polar shapes: 0.15, 0.25, 0.35; 0 for the rest.
double default_lobe_depth(ShapeKind kind);

// Samples the requested shape as a counterclockwise profile.
//   ellipse            (a cos t, b sin t)
//   circle             R (cos t, sin t)
//   smoothed_pentagon  r(t) = R (1 + s cos 5t)
//   rounded_triangle   r(t) = R (1 + s cos 3t)
//   dogbone            r(t) = R (1 - s cos 2t)
//   regular_polygon    `sides` corners on radius R, arc-length parametrized
//   koch               Koch snowflake of `iterations` refinements, arc-length parametrized
// Throws InvalidArgument for non-positive sizes and IngestError for self-intersecting output.
Profile generate(const ShapeSpec& spec);

// The four comparison shapes: "ellipse" (a=1.5, b=1), "pentagon", "triangle", "dogbone" (R=1).
ShapeSpec canonical_shape(std::string_view name, int sample_count = 720);
std::vector<std::string> canonical_shape_names();

enum class ProfileFormat { csv_points, json_points, svg_path };

std::optional<ProfileFormat> parse_profile_format(std::string_view name);

// Guesses the format from the file extension (.csv, .json, .svg).
std::optional<ProfileFormat> format_from_extension(const std::filesystem::path& path);

struct SvgFlattenOptions {
  // Maximum chord deviation when flattening curves, as a fraction of the control-point
  // bounding-box diagonal.
  double relative_chord_tolerance = 1e-3;
};

// Reads a closed boundary. Throws IngestError with kind io, malformed, open_curve or
// self_intersecting.
Profile load_profile(const std::filesystem::path& path, ProfileFormat format,
                     const SvgFlattenOptions& svg = {});

// In-memory variants of load_profile.
Profile parse_csv_points(std::string_view text);
Profile parse_json_points(std::string_view text);
Profile parse_svg_path(std::string_view text, const SvgFlattenOptions& options = {});

// Flattens an SVG path `d` attribute into polylines, one per subpath. `closed` reports
// whether each subpath ended with Z (or returned to its start point).
struct FlattenedSubpath {
  std::vector<Vec2> points;
  bool closed = false;
};
std::vector<FlattenedSubpath> flatten_svg_path_data(std::string_view d,
                                                    const SvgFlattenOptions& options = {});

}  // namespace fractalhand
