#include <algorithm>
#include <limits>

#include "fractalhand/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define FRACTALHAND_HAVE_AVX2_PATH 1
#define FRACTALHAND_AVX2 __attribute__((target("avx2")))
#else
#define FRACTALHAND_HAVE_AVX2_PATH 0
#endif

namespace fractalhand::kernels::avx2 {

#if FRACTALHAND_HAVE_AVX2_PATH

namespace {

// _mm256_max_pd returns the second operand when either is NaN; inputs here are finite.
FRACTALHAND_AVX2 inline double horizontal_max(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

}  // namespace

FRACTALHAND_AVX2 double max_pairwise_distance_sq(std::span<const double> xs,
                                                 std::span<const double> ys) {
  const std::size_t n = xs.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = xs[i], yi = ys[i];
    const __m256d vx = _mm256_set1_pd(xi);
    const __m256d vy = _mm256_set1_pd(yi);
    __m256d vbest = _mm256_setzero_pd();
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + j), vx);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + j), vy);
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      vbest = _mm256_max_pd(vbest, d2);
    }
    best = std::max(best, horizontal_max(vbest));
    for (; j < n; ++j) {
      const double dx = xs[j] - xi;
      const double dy = ys[j] - yi;
      best = std::max(best, dx * dx + dy * dy);
    }
  }
  return best;
}

FRACTALHAND_AVX2 double max_distance_sq_from(double cx, double cy, std::span<const double> xs,
                                             std::span<const double> ys) {
  const std::size_t n = xs.size();
  const __m256d vx = _mm256_set1_pd(cx);
  const __m256d vy = _mm256_set1_pd(cy);
  __m256d vbest = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), vx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), vy);
    vbest = _mm256_max_pd(vbest, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  double best = horizontal_max(vbest);
  for (; i < n; ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    best = std::max(best, dx * dx + dy * dy);
  }
  return best;
}

FRACTALHAND_AVX2 void max_dot3(Soa3View dirs, Soa3View vecs, std::span<double> out) {
  const std::size_t m = vecs.size();
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double ux = dirs.x[k], uy = dirs.y[k], uz = dirs.z[k];
    const __m256d vux = _mm256_set1_pd(ux);
    const __m256d vuy = _mm256_set1_pd(uy);
    const __m256d vuz = _mm256_set1_pd(uz);
    __m256d vbest = _mm256_set1_pd(neg_inf);
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      const __m256d px = _mm256_mul_pd(vux, _mm256_loadu_pd(vecs.x.data() + i));
      const __m256d py = _mm256_mul_pd(vuy, _mm256_loadu_pd(vecs.y.data() + i));
      const __m256d pz = _mm256_mul_pd(vuz, _mm256_loadu_pd(vecs.z.data() + i));
      vbest = _mm256_max_pd(vbest, _mm256_add_pd(_mm256_add_pd(px, py), pz));
    }
    double best = horizontal_max(vbest);
    for (; i < m; ++i) {
      best = std::max(best, ux * vecs.x[i] + uy * vecs.y[i] + uz * vecs.z[i]);
    }
    out[k] = best;
  }
}

#else

double max_pairwise_distance_sq(std::span<const double> xs, std::span<const double> ys) {
  return scalar::max_pairwise_distance_sq(xs, ys);
}
double max_distance_sq_from(double cx, double cy, std::span<const double> xs,
                            std::span<const double> ys) {
  return scalar::max_distance_sq_from(cx, cy, xs, ys);
}
void max_dot3(Soa3View dirs, Soa3View vecs, std::span<double> out) {
  scalar::max_dot3(dirs, vecs, out);
}

#endif

}  // namespace fractalhand::kernels::avx2
