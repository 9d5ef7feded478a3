#include <atomic>
#include <cstdlib>
#include <string>

#include "fractalhand/error.hpp"
#include "fractalhand/kernels/kernels.hpp"

namespace fractalhand::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("FRACTALHAND_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && cpu_supports(Isa::avx2)) return Isa::avx2;
  }
  return cpu_supports(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!cpu_supports(isa)) {
    throw InvalidArgument("ISA " + std::string(to_string(isa)) + " not supported by this CPU");
  }
  selected().store(isa, std::memory_order_relaxed);
}

double max_pairwise_distance_sq(std::span<const double> xs, std::span<const double> ys) {
  return active_isa() == Isa::avx2 ? avx2::max_pairwise_distance_sq(xs, ys)
                                   : scalar::max_pairwise_distance_sq(xs, ys);
}

double max_distance_sq_from(double cx, double cy, std::span<const double> xs,
                            std::span<const double> ys) {
  return active_isa() == Isa::avx2 ? avx2::max_distance_sq_from(cx, cy, xs, ys)
                                   : scalar::max_distance_sq_from(cx, cy, xs, ys);
}

void max_dot3(Soa3View dirs, Soa3View vecs, std::span<double> out) {
  if (active_isa() == Isa::avx2) {
    avx2::max_dot3(dirs, vecs, out);
  } else {
    scalar::max_dot3(dirs, vecs, out);
  }
}

}  // namespace fractalhand::kernels
