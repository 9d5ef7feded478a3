#include <algorithm>
#include <limits>

#include "fractalhand/kernels/kernels.hpp"

namespace fractalhand::kernels::scalar {

double max_pairwise_distance_sq(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = xs[i], yi = ys[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xs[j] - xi;
      const double dy = ys[j] - yi;
      const double d2 = dx * dx + dy * dy;
      best = std::max(best, d2);
    }
  }
  return best;
}

double max_distance_sq_from(double cx, double cy, std::span<const double> xs,
                            std::span<const double> ys) {
  double best = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    best = std::max(best, dx * dx + dy * dy);
  }
  return best;
}

void max_dot3(Soa3View dirs, Soa3View vecs, std::span<double> out) {
  const std::size_t m = vecs.size();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double ux = dirs.x[k], uy = dirs.y[k], uz = dirs.z[k];
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double d = ux * vecs.x[i] + uy * vecs.y[i] + uz * vecs.z[i];
      best = std::max(best, d);
    }
    out[k] = best;
  }
}

}  // namespace fractalhand::kernels::scalar
