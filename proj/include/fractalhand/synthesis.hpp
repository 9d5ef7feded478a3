#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fractalhand/complexity.hpp"

namespace fractalhand {

// Uniform Fractal Finger design parameters. Lengths are in the run's declared units.
struct FingerSpec {
  int gamma = 2;             // branches per joint node
  int n = 1;                 // tree depth
  double width_D = 0.0;      // span of the outermost joints
  double pitch_P = 0.0;      // axial distance between first and n-th joint levels
  double stiffness_k = 0.0;  // joint stiffness, carried through unchanged
  std::string units = "mm";
};

// Throws InvalidArgument unless gamma >= 2, n >= 1, width_D > 0 and pitch_P >= 0.
void validate(const FingerSpec& spec);

struct TreeStats {
  std::int64_t fingertips = 0;       // gamma^(n-1)
  std::int64_t internal_joints = 0;  // (gamma^(n-1) - 1) / (gamma - 1): branching joints on levels 1..n-1
  double level_scale_ratio = 0.0;    // gamma^n
};

// ceil(log(d_max/d_min)/log(gamma) + 1). Ratios within 1e-9 (relative) of an exact power
// of gamma resolve to that power, so d_max/d_min = 256, gamma = 2 gives 9.
// Throws InvalidArgument unless d_max >= d_min > 0 and gamma >= 2.
int levels_required(double d_max, double d_min, int gamma);

// perimeter / num_fingers. Throws InvalidArgument unless perimeter > 0 and num_fingers >= 2.
double width_upper_bound(double perimeter, int num_fingers);

TreeStats tree_stats(const FingerSpec& spec);

struct SynthesisResult {
  FingerSpec spec;
  bool not_converged_warning = false;  // the report's d_min is only the smallest sampled scale
  bool width_capped = false;           // width_D was lowered to the perimeter bound
};

struct SynthesisInputs {
  int gamma = 2;
  int num_fingers = 2;
  std::optional<double> perimeter;  // caps width_D at perimeter / num_fingers when present
  std::optional<double> pitch;      // defaults to 0 (remote centers on the front face)
  double stiffness_k = 0.0;
  std::string units = "mm";
};

SynthesisResult synthesize_spec(const ComplexityReport& report, const SynthesisInputs& inputs);

}  // namespace fractalhand
