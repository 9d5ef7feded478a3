#include <doctest.h>

#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "fractalhand/complexity.hpp"
#include "fractalhand/kernels/kernels.hpp"
#include "fractalhand/parallel.hpp"
#include "fractalhand/profile.hpp"

using namespace fractalhand;
namespace k = fractalhand::kernels;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels against naive loops") {
  std::mt19937_64 rng(1);
  const auto xs = random_values(rng, 37), ys = random_values(rng, 37);
  double best = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      best = std::max(best, (xs[j] - xs[i]) * (xs[j] - xs[i]) + (ys[j] - ys[i]) * (ys[j] - ys[i]));
    }
  }
  CHECK(k::scalar::max_pairwise_distance_sq(xs, ys) == best);
  CHECK(k::scalar::max_pairwise_distance_sq(std::span<const double>(), std::span<const double>()) == 0.0);
  std::vector<double> out(1);
  const std::vector<double> one{1.0}, zero{0.0};
  k::scalar::max_dot3({one, zero, zero}, {std::span<const double>(), std::span<const double>(), std::span<const double>()}, out);
  CHECK(out[0] == -std::numeric_limits<double>::infinity());
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  if (!k::cpu_supports(k::Isa::avx2)) {
    MESSAGE("CPU lacks AVX2; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(99);
  for (const std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 17u, 63u, 200u, 1001u}) {
    CAPTURE(n);
    const auto xs = random_values(rng, n), ys = random_values(rng, n);
    CHECK(same_bits(k::scalar::max_pairwise_distance_sq(xs, ys), k::avx2::max_pairwise_distance_sq(xs, ys)));
    CHECK(same_bits(k::scalar::max_distance_sq_from(0.3, -1.2, xs, ys), k::avx2::max_distance_sq_from(0.3, -1.2, xs, ys)));

    const std::size_t m = 1 + n % 11;
    const auto dx = random_values(rng, m), dy = random_values(rng, m), dz = random_values(rng, m);
    const auto vz = random_values(rng, n);
    std::vector<double> a(m), b(m);
    k::scalar::max_dot3({dx, dy, dz}, {xs, ys, vz}, a);
    k::avx2::max_dot3({dx, dy, dz}, {xs, ys, vz}, b);
    for (std::size_t i = 0; i < m; ++i) CHECK(same_bits(a[i], b[i]));
  }
}

TEST_CASE("dispatch can be pinned") {
  const k::Isa original = k::active_isa();
  k::force_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  const Profile p = generate(canonical_shape("dogbone"));
  const double s = p.max_vertex_distance();
  if (k::cpu_supports(k::Isa::avx2)) {
    k::force_isa(k::Isa::avx2);
    CHECK(same_bits(p.max_vertex_distance(), s));
  }
  k::force_isa(original);
  CHECK(k::to_string(k::Isa::avx2) == "avx2");
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (const int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw std::runtime_error("boom"); }),
                  std::runtime_error);
  CHECK(default_workers() >= 1);
}

TEST_CASE("box counting is independent of worker count") {
  ShapeSpec s;
  s.kind = ShapeKind::koch;
  const Profile p = generate(s);
  BoxCountOptions a, b;
  a.grid_offsets = b.grid_offsets = 4;
  a.workers = 1;
  b.workers = 5;
  CHECK(dbc_curve(p, 16, {0.005, 0.3}, a).counts == dbc_curve(p, 16, {0.005, 0.3}, b).counts);
}
