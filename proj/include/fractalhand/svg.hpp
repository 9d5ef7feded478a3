#pragma once

#include <string>
#include <vector>

#include "fractalhand/complexity.hpp"
#include "fractalhand/grasp.hpp"
#include "fractalhand/rcm.hpp"

namespace fractalhand::svg {

// Minimal SVG builder; coordinates are in pixels with y pointing down.
class Document {
 public:
  Document(double width, double height);

  void line(double x0, double y0, double x1, double y1, const std::string& stroke, double width = 1.0);
  void polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width = 1.0,
                bool closed = false, const std::string& fill = "none");
  void rect(double x, double y, double w, double h, const std::string& fill);
  void circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke = "none");
  void text(double x, double y, const std::string& content, double size = 12.0,
            const std::string& anchor = "start");

  std::string str() const;

 private:
  double width_, height_;
  std::string body_;
};

// D_BC and local slope against log10(epsilon).
std::string dbc_plot(const BoxCountCurve& curve, const std::string& title);

// Closure grid over (theta_a, theta_b): filled cells close.
std::string coverage_heatmap(const CoverageMap& map, const std::string& title);

// Cells coloured by which hand closes: both, fractal only, antipodal only, neither.
std::string comparison_heatmap(const Comparison& cmp, const std::string& title);

// A_cor over the (phi, H) grid with the refined optimum marked.
std::string surface_heatmap(const LevelOptimum& optimum, int grid_phi, int grid_H,
                            const std::string& title);

// Linkage at neutral and at +-theta_max with O and the carried remote centers marked.
std::string linkage_drawing(const TrapezoidDesign& design, double theta_max, const std::string& title);

}  // namespace fractalhand::svg
