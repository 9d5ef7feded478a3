#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fractalhand/error.hpp"
#include "fractalhand/rcm.hpp"
#include "support/oracles.hpp"

using namespace fractalhand;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

TrapezoidDesign random_design(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 5.0 + 15.0 * u(rng);
  return build_trapezoid((25.0 + 60.0 * u(rng)) * kDeg, h, h * (1.25 + 2.75 * u(rng)));
}

}  // namespace

TEST_CASE("ray construction places both leg lines through the remote center") {
  const TrapezoidDesign d = build_trapezoid(kPi / 3, 12.5, 20.0);
  const auto o = line_intersection(d.ground_left, d.platform_left, d.ground_right, d.platform_right);
  REQUIRE(o.has_value());
  CHECK(distance(*o, d.remote_center()) <= 1e-9 * d.H);
  CHECK(d.platform_width == doctest::Approx(2 * 20.0 * std::tan(kPi / 2 - kPi / 3)).epsilon(1e-14));
  CHECK(d.leg_length == doctest::Approx(distance(d.ground_left, d.platform_left)).epsilon(1e-14));
  CHECK(d.half_angle() == doctest::Approx(kPi / 6));

  const TrapezoidDesign e = build_trapezoid(80 * kDeg, 12.5, 40.0);
  CHECK(e.ground_width > e.platform_width);
  CHECK(e.platform_width > 0.0);
}

TEST_CASE("construction rejects non-convergent legs") {
  CHECK_THROWS_AS(build_trapezoid(kPi / 2, 10, 20), InvalidArgument);
  CHECK_THROWS_AS(build_trapezoid(0.0, 10, 20), InvalidArgument);
  CHECK_THROWS_AS(build_trapezoid(1.0, -1, 20), InvalidArgument);
  CHECK_THROWS_AS(build_trapezoid(1.0, 10, 0), InvalidArgument);
}

TEST_CASE("neutral pose and instant center") {
  const TrapezoidDesign d = build_trapezoid(1.1, 12.5, 18.0);
  const CouplerPose p = solve_pose(d, 0.0);
  CHECK(distance(p.left, d.platform_left) < 1e-12);
  CHECK(distance(p.right, d.platform_right) < 1e-12);
  CHECK(distance(instant_center(d, 0.0), d.remote_center()) < 1e-9 * d.H);
  const auto [tl, tr] = transmission_angles(d, p);
  CHECK(tl == doctest::Approx(tr).epsilon(1e-12));
}

TEST_CASE("loop closure residuals on random designs and poses") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const TrapezoidDesign d = random_design(rng);
    const BranchLimits lim = branch_limits(d);
    REQUIRE(lim.rotation_limit > 0.0);
    for (int i = 0; i < 100; ++i) {
      const CouplerPose p = solve_pose(d, 0.999 * lim.rotation_limit * u(rng), lim);
      CHECK(loop_residuals(d, p).max() < 1e-9);
    }
  }
}

TEST_CASE("poses and instant centers mirror across the axis") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const TrapezoidDesign d = random_design(rng);
    const BranchLimits lim = branch_limits(d);
    for (int i = 0; i < 20; ++i) {
      const double psi = 0.95 * lim.rotation_limit * u(rng);
      const CouplerPose a = solve_pose(d, psi, lim), b = solve_pose(d, -psi, lim);
      CHECK(distance(b.left, mirror_x(a.right)) < 1e-9 * d.H);
      CHECK(distance(b.right, mirror_x(a.left)) < 1e-9 * d.H);
      CHECK(b.rotation == doctest::Approx(-a.rotation).epsilon(1e-12));
      CHECK(distance(instant_center(d, b), mirror_x(instant_center(d, a))) < 1e-9 * d.H);
      const double da = distance(carried_remote_center(d, a), d.remote_center());
      const double db = distance(carried_remote_center(d, b), d.remote_center());
      CHECK(std::abs(da - db) < 1e-9 * d.H);
    }
  }
}

TEST_CASE("remote center drift is second order at neutral") {
  const TrapezoidDesign d = build_trapezoid(1.1, 12.5, 15.625);
  std::vector<double> drift;
  for (double psi = 1e-2; psi > 1e-4; psi /= 2) {
    drift.push_back(distance(carried_remote_center(d, solve_pose(d, psi)), d.remote_center()) / d.H);
  }
  for (std::size_t i = 0; i + 1 < drift.size(); ++i) {
    CHECK(oracle::observed_order(drift[i], drift[i + 1]) >= 1.9);
  }
  // Drift per unit rotation vanishes as the rotation shrinks.
  CHECK(drift.back() / 1e-4 < drift.front() / 1e-2);
}

TEST_CASE("leg-line intersection moves at first order") {
  const TrapezoidDesign d = build_trapezoid(1.1, 12.5, 15.625);
  const double e1 = distance(instant_center(d, 2e-3), d.remote_center());
  const double e2 = distance(instant_center(d, 1e-3), d.remote_center());
  CHECK(oracle::observed_order(e1, e2) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("poses beyond the branch report the last reachable rotation") {
  const TrapezoidDesign d = build_trapezoid(1.1, 12.5, 15.625);
  const BranchLimits lim = branch_limits(d);
  try {
    solve_pose(d, lim.rotation_limit * 1.5, lim);
    FAIL("expected BranchLimitError");
  } catch (const BranchLimitError& e) {
    CHECK(e.last_reachable() == doctest::Approx(lim.rotation_limit));
  }
  const BranchLimits safe = branch_limits(d, 5 * kDeg);
  CHECK(safe.rotation_limit < lim.rotation_limit);
  const auto [tl, tr] = transmission_angles(d, solve_pose(d, safe.rotation_limit, safe));
  CHECK(std::min({tl, tr, kPi - tl, kPi - tr}) >= 5 * kDeg - 1e-6);
}

TEST_CASE("evaluation respects the cap and the A_cor identity") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const TrapezoidDesign d = random_design(rng);
    for (const double cap : {0.1, kPi / 4, 1.5}) {
      const RcmEvaluation ev = evaluate(d, cap);
      CHECK(ev.theta_max <= cap);
      CHECK(ev.theta_max > 0.0);
      CHECK(ev.delta > 0.0);
      CHECK(ev.a_cor == doctest::Approx(ev.theta_max * std::pow(std::max(d.h - ev.delta, 0.0), 2)));
      CHECK(ev.a_cor >= 0.0);
    }
  }
  const TrapezoidDesign d = build_trapezoid(1.1, 12.5, 20.0);
  EvaluationOptions fine;
  fine.n_samples = 128;
  const double coarse = evaluate(d, kPi / 4).delta, refined = evaluate(d, kPi / 4, fine).delta;
  CHECK(std::abs(coarse - refined) < 0.01 * refined);
  CHECK_THROWS_AS(evaluate(d, 0.0), InvalidArgument);
  EvaluationOptions few;
  few.n_samples = 8;
  CHECK_THROWS_AS(evaluate(d, 0.5, few), InvalidArgument);
}

TEST_CASE("drift measures") {
  const TrapezoidDesign d = build_trapezoid(1.1, 12.5, 20.0);
  EvaluationOptions ext, ic;
  ext.drift = DriftMeasure::carried_center_extreme;
  ic.drift = DriftMeasure::instant_center_max;
  const RcmEvaluation base = evaluate(d, 0.4);
  CHECK(evaluate(d, 0.4, ext).delta <= base.delta + 1e-12);
  CHECK(evaluate(d, 0.4, ic).delta > base.delta);
}

TEST_CASE("level optimum dominates the grid and exists for the prototype level") {
  const LevelOptimum opt = optimize_level(12.5);
  REQUIRE(opt.surface.size() == 24 * 24);
  for (const auto& p : opt.surface) CHECK(opt.evaluation.a_cor >= p.a_cor);
  CHECK(opt.evaluation.delta < 12.5);
  CHECK(opt.evaluation.a_cor > 0.0);
  CHECK(opt.design.H > opt.design.h);

  LevelSearch fine;
  fine.grid_phi = fine.grid_H = 48;
  const LevelOptimum opt2 = optimize_level(12.5, fine);
  CHECK(opt2.evaluation.a_cor == doctest::Approx(opt.evaluation.a_cor).epsilon(0.01));
  CHECK(opt2.design.phi == doctest::Approx(opt.design.phi).epsilon(0.01));
  CHECK(opt2.design.H == doctest::Approx(opt.design.H).epsilon(0.01));
}

TEST_CASE("grid search is deterministic across worker counts") {
  LevelSearch s;
  s.grid_phi = s.grid_H = 10;
  s.workers = 1;
  const LevelOptimum a = optimize_level(10.0, s);
  s.workers = 3;
  const LevelOptimum b = optimize_level(10.0, s);
  CHECK(a.design.phi == b.design.phi);
  CHECK(a.design.H == b.design.H);
  CHECK(a.evaluation.a_cor == b.evaluation.a_cor);
  for (std::size_t i = 0; i < a.surface.size(); ++i) CHECK(a.surface[i].a_cor == b.surface[i].a_cor);
}

TEST_CASE("cascade sizing") {
  FingerSpec spec;
  spec.width_D = 100.0;
  spec.gamma = 2;
  spec.n = 3;
  const LevelCascade c = cascade(spec, {});
  REQUIRE(c.levels.size() == 2);
  CHECK(c.levels[0].level == 3);
  CHECK(c.levels[0].optimum.design.h == 12.5);
  CHECK(c.levels[1].level == 2);
  CHECK(c.levels[1].optimum.design.h == c.levels[0].optimum.design.H);
  CHECK(c.levels[1].optimum.design.h > c.levels[0].optimum.design.h);
  for (const auto& l : c.levels) CHECK(l.rotation_cap == doctest::Approx(kPi / 4));

  spec.n = 2;
  const LevelCascade two = cascade(spec, {});
  REQUIRE(two.levels.size() == 1);
  CHECK(two.levels[0].optimum.design.h == 25.0);

  spec.n = 1;
  CHECK_THROWS_AS(cascade(spec, {}), InvalidArgument);
  spec.n = 3;
  const std::vector<double> wrong{0.5};
  CHECK_THROWS_AS(cascade(spec, wrong), InvalidArgument);
}

TEST_CASE("infeasible level is named") {
  FingerSpec spec;
  spec.width_D = 100.0;
  spec.n = 3;
  LevelSearch s;
  s.grid_phi = s.grid_H = 8;
  s.evaluation.drift = DriftMeasure::instant_center_max;
  const std::vector<double> caps{1.5, 1.5};
  try {
    cascade(spec, caps, s);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.level() == 3);
    CHECK(std::string(e.what()).find("level 3") != std::string::npos);
  }
}
