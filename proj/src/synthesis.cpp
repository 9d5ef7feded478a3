#include "fractalhand/synthesis.hpp"

#include <cmath>
#include <limits>

#include "fractalhand/error.hpp"

namespace fractalhand {

void validate(const FingerSpec& spec) {
  if (spec.gamma < 2) throw InvalidArgument("gamma must be at least 2");
  if (spec.n < 1) throw InvalidArgument("n must be at least 1");
  if (!(spec.width_D > 0.0)) throw InvalidArgument("width_D must be positive");
  if (!(spec.pitch_P >= 0.0)) throw InvalidArgument("pitch_P must be non-negative");
}

int levels_required(double d_max, double d_min, int gamma) {
  if (gamma < 2) throw InvalidArgument("gamma must be at least 2");
  if (!(d_min > 0.0) || !std::isfinite(d_max)) throw InvalidArgument("d_min must be positive");
  if (!(d_max >= d_min)) throw InvalidArgument("d_max must be at least d_min");

  const double exponent = std::log(d_max / d_min) / std::log(static_cast<double>(gamma));
  const double nearest = std::round(exponent);
  const double x = std::abs(exponent - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest
                                                                                  : exponent;
  const double n = std::ceil(x + 1.0);
  if (n > static_cast<double>(std::numeric_limits<int>::max())) {
    throw InvalidArgument("level count overflows");
  }
  return static_cast<int>(n);
}

double width_upper_bound(double perimeter, int num_fingers) {
  if (!(perimeter > 0.0)) throw InvalidArgument("perimeter must be positive");
  if (num_fingers < 2) throw InvalidArgument("num_fingers must be at least 2");
  return perimeter / num_fingers;
}

TreeStats tree_stats(const FingerSpec& spec) {
  validate(spec);
  TreeStats stats;
  std::int64_t tips = 1;
  std::int64_t joints = 0;
  for (int level = 1; level < spec.n; ++level) {
    joints += tips;
    if (tips > std::numeric_limits<std::int64_t>::max() / spec.gamma) {
      throw InvalidArgument("tree too large to count");
    }
    tips *= spec.gamma;
  }
  stats.fingertips = tips;
  stats.internal_joints = joints;
  stats.level_scale_ratio = std::pow(static_cast<double>(spec.gamma), spec.n);
  return stats;
}

SynthesisResult synthesize_spec(const ComplexityReport& report, const SynthesisInputs& inputs) {
  if (!(report.d_min > 0.0) || !(report.d_max >= report.d_min)) {
    throw InvalidArgument("report must satisfy 0 < d_min <= d_max");
  }
  SynthesisResult result;
  FingerSpec& spec = result.spec;
  spec.gamma = inputs.gamma;
  spec.n = levels_required(report.d_max, report.d_min, inputs.gamma);
  spec.width_D = report.d_max;
  if (inputs.perimeter) {
    const double cap = width_upper_bound(*inputs.perimeter, inputs.num_fingers);
    if (spec.width_D > cap) {
      spec.width_D = cap;
      result.width_capped = true;
    }
  }
  spec.pitch_P = inputs.pitch.value_or(0.0);
  spec.stiffness_k = inputs.stiffness_k;
  spec.units = inputs.units;
  validate(spec);
  result.not_converged_warning = !report.converged;
  return result;
}

}  // namespace fractalhand
