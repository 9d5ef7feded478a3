#pragma once

// Data-parallel inner loops used by the geometry and grasp code. Every kernel has a
// scalar reference implementation and an AVX2 variant; the variant is chosen once at
// runtime from CPUID and can be pinned with FRACTALHAND_ISA=scalar|avx2 or force_isa().
//
// The AVX2 paths evaluate the same expression tree as the scalar ones without fused
// multiply-add, so results are bit-identical across variants.

#include <cstddef>
#include <span>
#include <string_view>

namespace fractalhand::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

// True when the running CPU can execute `isa`.
bool cpu_supports(Isa isa);

// Variant currently used by the dispatching entry points.
Isa active_isa();

// Pins the dispatching entry points to `isa`. Throws InvalidArgument when unsupported.
void force_isa(Isa isa);

// Structure-of-arrays view over 3-vectors.
struct Soa3View {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> z;

  std::size_t size() const { return x.size(); }
};

// max over i<j of (x[j]-x[i])^2 + (y[j]-y[i])^2; 0 for fewer than two points.
double max_pairwise_distance_sq(std::span<const double> xs, std::span<const double> ys);

// max over i of (x[i]-cx)^2 + (y[i]-cy)^2; 0 for an empty set.
double max_distance_sq_from(double cx, double cy, std::span<const double> xs,
                            std::span<const double> ys);

// out[k] = max over i of dirs[k] . vecs[i]; -inf when vecs is empty.
void max_dot3(Soa3View dirs, Soa3View vecs, std::span<double> out);

namespace scalar {
double max_pairwise_distance_sq(std::span<const double> xs, std::span<const double> ys);
double max_distance_sq_from(double cx, double cy, std::span<const double> xs,
                            std::span<const double> ys);
void max_dot3(Soa3View dirs, Soa3View vecs, std::span<double> out);
}  // namespace scalar

namespace avx2 {
double max_pairwise_distance_sq(std::span<const double> xs, std::span<const double> ys);
double max_distance_sq_from(double cx, double cy, std::span<const double> xs,
                            std::span<const double> ys);
void max_dot3(Soa3View dirs, Soa3View vecs, std::span<double> out);
}  // namespace avx2

}  // namespace fractalhand::kernels
