#include "fractalhand/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fractalhand::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Maps data ranges onto a plot rectangle.
struct Frame {
  double left, top, width, height;
  double x0, x1, y0, y1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

void axes(Document& doc, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  doc.line(f.left, f.top + f.height, f.left + f.width, f.top + f.height, "#000");
  doc.line(f.left, f.top, f.left, f.top + f.height, "#000");
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    doc.text(f.px(xv), f.top + f.height + 16, num(xv), 10, "middle");
    doc.text(f.left - 6, f.py(yv) + 4, num(yv), 10, "end");
  }
  doc.text(f.left + f.width / 2, f.top + f.height + 34, xlabel, 12, "middle");
  doc.text(14, f.top + f.height / 2, ylabel, 12, "middle");
}

}  // namespace

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::line(double x0, double y0, double x1, double y1, const std::string& stroke, double width) {
  body_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
           num(y1) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

void Document::polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width,
                        bool closed, const std::string& fill) {
  std::string p;
  for (const Vec2& v : pts) p += num(v.x) + "," + num(v.y) + " ";
  body_ += std::string("<") + (closed ? "polygon" : "polyline") + " points=\"" + p + "\" fill=\"" +
           fill + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

void Document::rect(double x, double y, double w, double h, const std::string& fill) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
           num(h) + "\" fill=\"" + fill + "\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
           fill + "\" stroke=\"" + stroke + "\"/>\n";
}

void Document::text(double x, double y, const std::string& content, double size, const std::string& anchor) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
           num(size) + "\" text-anchor=\"" + anchor + "\">" + escape(content) + "</text>\n";
}

std::string Document::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
         num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n" + body_ + "</svg>\n";
}

std::string dbc_plot(const BoxCountCurve& curve, const std::string& title) {
  Document doc(640, 420);
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymax = 1.0;
  for (std::size_t i = 0; i < curve.epsilons.size(); ++i) {
    const double x = std::log10(curve.epsilons[i]);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymax = std::max({ymax, curve.dbc[i], curve.slope_dbc[i]});
  }
  const Frame f{70, 40, 540, 320, xmin, xmax, 0.0, std::ceil(ymax * 4.0) / 4.0};
  axes(doc, f, "log10(epsilon)", "D_BC");
  doc.text(320, 24, title, 14, "middle");
  doc.line(f.left, f.py(1.0), f.left + f.width, f.py(1.0), "#bbb");

  std::vector<Vec2> direct, slope;
  for (std::size_t i = 0; i < curve.epsilons.size(); ++i) {
    const double x = f.px(std::log10(curve.epsilons[i]));
    direct.push_back({x, f.py(curve.dbc[i])});
    slope.push_back({x, f.py(curve.slope_dbc[i])});
  }
  doc.polyline(direct, "#1f77b4", 2.0);
  doc.polyline(slope, "#ff7f0e", 1.5);
  for (const Vec2& p : direct) doc.circle(p.x, p.y, 2.5, "#1f77b4");
  doc.text(f.left + f.width - 4, f.top + 14, "-log N / log eps", 11, "end");
  doc.text(f.left + f.width - 4, f.top + 30, "local slope (5 scales)", 11, "end");
  return doc.str();
}

std::string coverage_heatmap(const CoverageMap& map, const std::string& title) {
  const double cell = std::max(2.0, 400.0 / map.grid_size);
  const double side = cell * map.grid_size;
  Document doc(side + 90, side + 80);
  doc.text(45 + side / 2, 22, title + " (" + num(100.0 * map.coverage_fraction) + "% closure)", 13, "middle");
  for (int a = 0; a < map.grid_size; ++a) {
    for (int b = 0; b < map.grid_size; ++b) {
      if (map.at(a, b)) doc.rect(60 + b * cell, 35 + (map.grid_size - 1 - a) * cell, cell, cell, "#2a9d8f");
    }
  }
  doc.polyline({{60, 35}, {60 + side, 35}, {60 + side, 35 + side}, {60, 35 + side}}, "#000", 1.0, true);
  doc.text(60 + side / 2, 35 + side + 28, "theta_B (0 .. 2pi)", 12, "middle");
  doc.text(30, 35 + side / 2, "theta_A", 12, "middle");
  return doc.str();
}

std::string comparison_heatmap(const Comparison& cmp, const std::string& title) {
  const int g = cmp.fractal.grid_size;
  const double cell = std::max(2.0, 400.0 / g);
  const double side = cell * g;
  Document doc(side + 90, side + 110);
  doc.text(45 + side / 2, 22, title, 13, "middle");
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b < g; ++b) {
      const bool f = cmp.fractal.at(a, b), p = cmp.antipodal.at(a, b);
      if (!f && !p) continue;
      const char* color = f && p ? "#264653" : f ? "#2a9d8f" : "#e76f51";
      doc.rect(60 + b * cell, 35 + (g - 1 - a) * cell, cell, cell, color);
    }
  }
  doc.polyline({{60, 35}, {60 + side, 35}, {60 + side, 35 + side}, {60, 35 + side}}, "#000", 1.0, true);
  doc.text(60, 35 + side + 24, "fractal " + num(100.0 * cmp.fractal.coverage_fraction) + "%  antipodal " +
                                   num(100.0 * cmp.antipodal.coverage_fraction) + "%",
           12);
  doc.text(60, 35 + side + 44, "dark: both  teal: fractal only  orange: antipodal only", 11);
  return doc.str();
}

std::string surface_heatmap(const LevelOptimum& optimum, int grid_phi, int grid_H, const std::string& title) {
  const double cw = 420.0 / grid_H, ch = 320.0 / grid_phi;
  Document doc(560, 420);
  doc.text(280, 22, title, 13, "middle");
  double amax = 0.0;
  for (const auto& p : optimum.surface) amax = std::max(amax, p.a_cor);
  for (std::size_t idx = 0; idx < optimum.surface.size(); ++idx) {
    const int i = static_cast<int>(idx) / grid_H, j = static_cast<int>(idx) % grid_H;
    const double v = amax > 0.0 ? optimum.surface[idx].a_cor / amax : 0.0;
    const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
    char color[16];
    std::snprintf(color, sizeof color, "#%02x%02xff", shade, shade);
    doc.rect(80 + j * cw, 40 + (grid_phi - 1 - i) * ch, cw, ch, color);
  }
  const auto& s = optimum.surface;
  const double phi0 = s.front().phi, phi1 = s.back().phi, H0 = s.front().H, H1 = s.back().H;
  const Frame f{80 + cw / 2, 40 + ch / 2, 420 - cw, 320 - ch, H0, H1, phi0 * 180.0 / 3.141592653589793,
                phi1 * 180.0 / 3.141592653589793};
  axes(doc, f, "H", "phi (deg)");
  doc.circle(f.px(optimum.design.H), f.py(optimum.design.phi * 180.0 / 3.141592653589793), 6, "none", "#f4a261");
  return doc.str();
}

std::string linkage_drawing(const TrapezoidDesign& design, double theta_max, const std::string& title) {
  std::vector<CouplerPose> poses{solve_pose(design, 0.0)};
  if (theta_max > 0.0) {
    const BranchLimits lim = branch_limits(design);
    const double t = std::min(theta_max, lim.rotation_limit);
    poses.push_back(solve_pose(design, t, lim));
    poses.push_back(solve_pose(design, -t, lim));
  }

  std::vector<Vec2> pts{design.ground_left, design.ground_right, design.remote_center()};
  for (const auto& p : poses) {
    pts.push_back(p.left);
    pts.push_back(p.right);
    pts.push_back(carried_remote_center(design, p));
  }
  const BoundingBox box = bounding_box(pts);
  const double span = std::max(box.width(), box.height());
  const double scale = 360.0 / span;
  Document doc(480, 460);
  doc.text(240, 22, title, 13, "middle");
  auto map = [&](Vec2 p) {
    return Vec2{240 + (p.x - 0.5 * (box.min.x + box.max.x)) * scale,
                250 - (p.y - 0.5 * (box.min.y + box.max.y)) * scale};
  };
  const char* colors[] = {"#000", "#2a9d8f", "#e76f51"};
  for (std::size_t k = 0; k < poses.size(); ++k) {
    const auto& p = poses[k];
    doc.polyline({map(design.ground_left), map(p.left), map(p.right), map(design.ground_right)}, colors[k],
                 k == 0 ? 2.0 : 1.2);
    const Vec2 c = map(carried_remote_center(design, p));
    doc.circle(c.x, c.y, 3, colors[k]);
  }
  const Vec2 g0 = map(design.ground_left), g1 = map(design.ground_right);
  doc.line(g0.x, g0.y, g1.x, g1.y, "#888", 1.0);
  const Vec2 o = map(design.remote_center());
  doc.circle(o.x, o.y, 5, "none", "#d62828");
  doc.text(o.x + 8, o.y - 6, "O", 12);
  doc.text(20, 440, "phi=" + num(design.phi * 180.0 / 3.141592653589793) + " deg  h=" + num(design.h) +
                        "  H=" + num(design.H) + "  theta_max=" + num(theta_max),
           11);
  return doc.str();
}

}  // namespace fractalhand::svg
