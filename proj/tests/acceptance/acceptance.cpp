// Acceptance run: one PASS/FAIL line per criterion, followed by indented detail lines.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractalhand/cli/commands.hpp"
#include "fractalhand/complexity.hpp"
#include "fractalhand/grasp.hpp"
#include "fractalhand/rcm.hpp"
#include "fractalhand/synthesis.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace fractalhand;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "ok    " : "FAILED ") + what);
  }
  void note(const std::string& what) { details.push_back("note   " + what); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path g_root;

// Runs the CLI in-process; returns the exit code.
int cli(std::vector<std::string> args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::fprintf(stderr, "cli exit %d: %s", code, e.str().c_str());
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

// CLI runs performed while checking criteria 1-7; criterion 8 replays them from their manifests.
std::vector<fs::path> g_runs;

fs::path run_dir(const std::string& name) {
  const fs::path d = g_root / name;
  g_runs.push_back(d);
  return d;
}

Profile circle() {
  ShapeSpec s;
  s.kind = ShapeKind::circle;
  return generate(s);
}

Criterion level_count() {
  Criterion c;
  const double d_max = 300.0;
  const int n = 9;
  const double inverted = d_max / std::pow(2.0, n - 1);
  c.check(std::abs(inverted - 1.17) < 0.005, "d_min from inverting n = 9 at d_max = 300 mm: " + fmt("%.6f", inverted) + " mm, i.e. 1.17 mm at two decimals");
  c.check(levels_required(d_max, inverted, 2) == 9, "levels_required(300 mm, " + fmt("%.6f", inverted) + " mm, 2) = 9");
  c.check(levels_required(d_max, 2.0 * inverted * (1 - 1e-6), 2) == 9, "n stays 9 up to d_min = 2.34375 mm");
  c.note("literal levels_required(300 mm, 1.17 mm, 2) = " + std::to_string(levels_required(d_max, 1.17, 2)) +
         " (1.17 < 300/256, so the ceiling steps to 10)");
  std::string out;
  const fs::path dir = run_dir("synth");
  c.check(cli({"--out-dir", dir.string(), "synth", "--d-max", "300", "--d-min", fmt("%.17g", inverted)}, &out) == 0 &&
              json::parse(out)["n"] == 9,
          "synth command writes n = 9");
  return c;
}

Criterion cascade_sizing() {
  Criterion c;
  FingerSpec spec;
  spec.width_D = 100.0;
  spec.gamma = 2;
  spec.n = 3;
  const LevelCascade lc = cascade(spec, {});
  c.check(lc.levels.front().level == 3 && lc.levels.front().optimum.design.h == 12.5, "library: level-3 h = 12.5 mm");
  const fs::path dir = run_dir("rcm");
  std::string out;
  const bool ran = cli({"--out-dir", dir.string(), "rcm", "--width", "100", "--gamma", "2", "--n", "3"}, &out) == 0;
  c.check(ran && json::parse(out)["levels"][0]["design"]["h"].get<double>() == 12.5, "rcm command: level-3 h = 12.5 mm in cascade.json");
  if (ran) c.note("level-2 h = " + fmt("%.6g", json::parse(out)["levels"][1]["design"]["h"].get<double>()) + " mm (level-3 H)");
  return c;
}

Criterion box_counting() {
  Criterion c;
  const BoxCountCurve cc = dbc_curve(circle(), 40, {1e-3, 0.5});
  const std::size_t n = cc.epsilons.size();
  double lo = 10, hi = -10;
  for (std::size_t i = n - 5; i < n; ++i) {
    lo = std::min(lo, cc.slope_dbc[i]);
    hi = std::max(hi, cc.slope_dbc[i]);
  }
  c.check(lo >= 0.95 && hi <= 1.05, "circle local slope over the five finest scales in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "]");

  const fs::path dir = run_dir("dim_koch");
  std::string out;
  if (cli({"--out-dir", dir.string(), "dim", "--shape", "koch", "--iterations", "4", "--scales", "60"}, &out) == 0) {
    const json r = json::parse(out);
    const double slope = r["fit"]["slope"];
    c.check(slope >= 1.18 && slope <= 1.34,
            "koch (4 iterations) slope fitted over eps in [" + fmt("%.4g", r["fit"]["eps_min"]) + ", " +
                fmt("%.4g", r["fit"]["eps_max"]) + "]: " + fmt("%.4f", slope) + " (log4/log3 = 1.2619)");
  } else {
    c.check(false, "dim koch command");
  }
  const fs::path cdir = run_dir("dim_circle");
  c.check(cli({"--out-dir", cdir.string(), "dim", "--shape", "circle"}, &out) == 0 && json::parse(out)["converged"] == true,
          "dim circle reports converged = true");

  ShapeSpec koch;
  koch.kind = ShapeKind::koch;
  const std::vector<std::pair<std::string, Profile>> shapes{
      {"circle", circle()}, {"dogbone", generate(canonical_shape("dogbone"))}, {"koch", generate(koch)}};
  int agree = 0, total = 0;
  for (const auto& [name, p] : shapes) {
    const NormalizedProfile np = normalize_for_counting(p);
    for (const double eps : {0.1, 0.031, 0.01}) {
      ++total;
      const auto got = box_count(np, eps), want = oracle::box_count(np.vertices, eps);
      if (got == want) ++agree;
      else c.note(name + " eps " + fmt("%g", eps) + ": " + std::to_string(got) + " vs oracle " + std::to_string(want));
    }
  }
  c.check(agree == total, "box_count equals the exhaustive rasterization oracle on " + std::to_string(agree) + "/" + std::to_string(total) + " shape-scale pairs");
  return c;
}

Criterion four_bar() {
  Criterion c;
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_residual = 0.0, worst_mirror = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double h = 5.0 + 15.0 * u(rng);
    const TrapezoidDesign d = build_trapezoid((25.0 + 60.0 * u(rng)) * kPi / 180.0, h, h * (1.25 + 2.75 * u(rng)));
    const BranchLimits lim = branch_limits(d);
    for (int i = 0; i < 100; ++i) {
      const double psi = 0.999 * lim.rotation_limit * (2.0 * u(rng) - 1.0);
      const CouplerPose a = solve_pose(d, psi, lim), b = solve_pose(d, -psi, lim);
      worst_residual = std::max({worst_residual, loop_residuals(d, a).max(), loop_residuals(d, b).max()});
      worst_mirror = std::max({worst_mirror, distance(b.left, mirror_x(a.right)) / d.H,
                               distance(b.right, mirror_x(a.left)) / d.H,
                               distance(instant_center(d, b), mirror_x(instant_center(d, a))) / d.H});
    }
  }
  c.check(worst_residual < 1e-9, "max relative loop-closure residual over 10 designs x 100 poses: " + fmt("%.3g", worst_residual));
  c.check(worst_mirror < 1e-9, "max mirror mismatch of poses and instant centers (relative to H): " + fmt("%.3g", worst_mirror));

  const TrapezoidDesign d = build_trapezoid(1.1, 12.5, 15.625);
  auto worst_order = [&](auto&& drift) {
    double worst = 1e9;
    for (double psi = 1e-2; psi > 2e-4; psi /= 2) worst = std::min(worst, oracle::observed_order(drift(psi), drift(psi / 2)));
    return worst;
  };
  const double carried = worst_order([&](double psi) {
    return distance(carried_remote_center(d, solve_pose(d, psi)), d.remote_center());
  });
  c.check(carried >= 1.9, "carried remote-center drift: smallest observed order over halvings from 1e-2 rad: " + fmt("%.4f", carried));
  const double e1 = distance(instant_center(d, 2e-3), d.remote_center());
  const double e2 = distance(instant_center(d, 1e-3), d.remote_center());
  c.note("leg-line intersection drift order: " + fmt("%.4f", oracle::observed_order(e1, e2)) +
         " (first order; the default drift measure uses the carried center)");
  return c;
}

Criterion level_optimizer() {
  Criterion c;
  const LevelOptimum opt = optimize_level(12.5);
  bool dominates = true;
  for (const auto& p : opt.surface) dominates = dominates && opt.evaluation.a_cor >= p.a_cor;
  c.check(dominates && opt.surface.size() == 24 * 24, "optimum A_cor " + fmt("%.6g", opt.evaluation.a_cor) + " dominates all 576 grid vertices");
  LevelSearch fine;
  fine.grid_phi = fine.grid_H = 48;
  const LevelOptimum opt2 = optimize_level(12.5, fine);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  const double worst = std::max({rel(opt2.evaluation.a_cor, opt.evaluation.a_cor), rel(opt2.design.phi, opt.design.phi),
                                 rel(opt2.design.H, opt.design.H)});
  c.check(worst <= 0.01, "doubling the grid to 48 x 48 moves A_cor, phi and H by at most " + fmt("%.3g", 100 * worst) + "%");
  c.check(opt.evaluation.delta < 12.5, "drift at the optimum " + fmt("%.4g", opt.evaluation.delta) + " mm < h = 12.5 mm");
  c.note("optimum phi = " + fmt("%.2f", opt.design.phi * 180 / kPi) + " deg, H = " + fmt("%.4g", opt.design.H) +
         " mm, theta_max = " + fmt("%.4f", opt.evaluation.theta_max) + " rad");
  return c;
}

std::vector<std::array<double, 3>> random_wrenches(std::mt19937_64& rng, int count, double bias) {
  std::normal_distribution<double> g(0.0, 1.0);
  const std::array<double, 3> shift{bias * g(rng), bias * g(rng), bias * g(rng)};
  std::vector<std::array<double, 3>> ws;
  for (int i = 0; i < count; ++i) ws.push_back({g(rng) + shift[0], g(rng) + shift[1], g(rng) + shift[2]});
  return ws;
}

Criterion wrench_closure_lp() {
  Criterion c;
  std::mt19937_64 rng(31337);
  ClosureOptions exact;
  exact.separating_direction_prefilter = false;
  int compared = 0, agree = 0, closed = 0, prefilter_agree = 0, plain_disagree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto ws = random_wrenches(rng, 8, trial % 2 == 0 ? 0.0 : 0.6);
    WrenchSet set;
    for (const auto& w : ws) set.push(w[0], w[1], w[2]);
    const ClosureResult r = analyze_closure(set, exact);
    if (analyze_closure(set).closure == r.closure) ++prefilter_agree;
    if (std::abs(r.margin) <= 10 * kClosureTolerance) continue;
    ++compared;
    closed += r.closure ? 1 : 0;
    if (r.closure == oracle::positive_span(ws)) ++agree;
    if (r.closure != oracle::positive_span(ws, 4096, false)) ++plain_disagree;
  }
  c.check(compared >= 900 && agree == compared,
          "LP closure matches the support-direction oracle on " + std::to_string(agree) + "/" + std::to_string(compared) +
              " random 8-wrench sets (" + std::to_string(closed) + " closed)");
  c.check(prefilter_agree == 1000, "separating-direction prefilter never changes the decision (" + std::to_string(prefilter_agree) + "/1000)");
  c.note("sphere sampling alone (4096 directions, no facet normals) disagrees on " + std::to_string(plain_disagree) +
         " sets; adding facet normals to the oracle removes every disagreement");

  const double mu = 0.3;
  const CoverageMap map = coverage_map(circle(), ContactModel::antipodal(mu), 100);
  const double half_band = 2.0 * std::atan(mu);
  int mismatches = 0;
  for (int a = 0; a < 100; ++a) {
    for (int b = 0; b < 100; ++b) {
      const bool expect = std::abs(wrap_pi(map.theta(b) - map.theta(a) - kPi)) <= half_band;
      if (map.at(a, b) != expect) ++mismatches;
    }
  }
  c.check(mismatches == 0, "circle antipodal map follows |theta_B - theta_A - pi| <= 2 atan(mu) on every cell (" +
                               std::to_string(mismatches) + " mismatches, coverage " + fmt("%.4f", map.coverage_fraction) + ")");
  return c;
}

Criterion coverage_claims() {
  Criterion c;
  const fs::path dir = run_dir("compare");
  std::string out;
  if (cli({"--out-dir", dir.string(), "compare", "--grid", "100", "--span", "2.7", "--depth", "5"}, &out) != 0) {
    c.check(false, "compare command");
    return c;
  }
  const json r = json::parse(out);
  int wins = 0, total = 0;
  for (const auto& rec : r["records"]) {
    ++total;
    const double fh = rec["fh_coverage"], ap = rec["ap_coverage"];
    if (fh > ap) ++wins;
    c.note(rec["shape"].get<std::string>() + " mu " + fmt("%g", rec["mu"]) + ": fractal " + fmt("%.4f", fh) + ", antipodal " + fmt("%.4f", ap));
  }
  c.check(total == 12 && wins == total, "fractal hand covers more than antipodal in " + std::to_string(wins) + "/" + std::to_string(total) + " shape-friction cases");
  double mean03 = -1;
  for (const auto& m : r["mean_improvement"]) {
    if (std::abs(m["mu"].get<double>() - 0.3) < 1e-12) mean03 = m["mean_improvement"];
  }
  c.check(mean03 >= 0.15, "mean improvement over the four shapes at mu 0.3: " + fmt("%.4f", mean03) + " >= 0.15");

  // One-at-a-time sweeps around span 2.7, depth 5.
  const std::vector<double> spans{0.675, 1.35, 2.025, 2.7};
  const std::vector<int> depths{1, 2, 3, 4, 5};
  int monotone = 0, sweeps = 0;
  std::vector<std::string> factorial_drops;
  for (const auto& name : canonical_shape_names()) {
    const Profile p = generate(canonical_shape(name));
    for (const double mu : {0.1, 0.3, 0.5}) {
      const ContactModel base = ContactModel::fractal_hand(5, 2.7, mu);
      for (const bool over_span : {true, false}) {
        const auto rows = over_span ? coverage_monotonicity(p, base, spans, {5}, 100)
                                    : coverage_monotonicity(p, base, {2.7}, depths, 100);
        bool ok = true;
        for (std::size_t i = 1; i < rows.size(); ++i) ok = ok && rows[i].coverage >= rows[i - 1].coverage;
        ++sweeps;
        monotone += ok ? 1 : 0;
        if (!ok) c.note(name + " mu " + fmt("%g", mu) + (over_span ? ": coverage drops along span" : ": coverage drops along depth"));
      }
      const auto grid = coverage_monotonicity(p, base, spans, depths, 100);
      for (std::size_t s = 0; s < spans.size(); ++s) {
        for (std::size_t d = 0; d < depths.size(); ++d) {
          const double v = grid[s * depths.size() + d].coverage;
          if (s > 0 && v < grid[(s - 1) * depths.size() + d].coverage)
            factorial_drops.push_back(name + " mu " + fmt("%g", mu) + " n " + std::to_string(depths[d]) + " span " + fmt("%g", spans[s - 1]) + "->" + fmt("%g", spans[s]));
          if (d > 0 && v < grid[s * depths.size() + d - 1].coverage)
            factorial_drops.push_back(name + " mu " + fmt("%g", mu) + " span " + fmt("%g", spans[s]) + " n " + std::to_string(depths[d - 1]) + "->" + std::to_string(depths[d]));
        }
      }
    }
  }
  c.check(monotone == sweeps, "coverage is nondecreasing in span (depth 5) and in depth (span 2.7) on " + std::to_string(monotone) + "/" + std::to_string(sweeps) + " sweeps");
  c.note("full span x depth grid: " + std::to_string(factorial_drops.size()) + " decreasing steps away from the design point");
  for (const auto& s : factorial_drops) c.note("  " + s);

  const fs::path mdir = run_dir("monotonicity");
  c.check(cli({"--out-dir", mdir.string(), "monotonicity", "--shape", "dogbone", "--spans", "0.675,1.35,2.025,2.7", "--depths", "5"}) == 0,
          "monotonicity command runs");
  const fs::path sdir = run_dir("cspace");
  c.check(cli({"--out-dir", sdir.string(), "cspace", "--shape", "circle"}) == 0, "cspace command runs");
  return c;
}

Criterion determinism() {
  Criterion c;
  int identical = 0;
  for (const auto& dir : g_runs) {
    if (!fs::exists(dir / "manifest.json")) {
      c.check(false, dir.filename().string() + ": no manifest");
      continue;
    }
    bool same = true;
    for (const int workers : {1, 4}) {
      const fs::path again = g_root / (dir.filename().string() + "_rerun" + std::to_string(workers));
      const bool ran = cli({"--out-dir", again.string(), "--workers", std::to_string(workers), "rerun", (dir / "manifest.json").string()}) == 0;
      same = same && ran && snapshot(dir) == snapshot(again);
    }
    if (same) ++identical;
    else c.note(dir.filename().string() + " differs on rerun");
  }
  c.check(identical == static_cast<int>(g_runs.size()) && !g_runs.empty(),
          "manifest reruns with 1 and 4 workers are byte-identical for " + std::to_string(identical) + "/" + std::to_string(g_runs.size()) + " runs");
  return c;
}

}  // namespace

int main() {
  g_root = fs::temp_directory_path() / ("fractalhand_acceptance_" + std::to_string(std::random_device{}()));
  fs::remove_all(g_root);
  fs::create_directories(g_root);

  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria{
      {"level count from the scale ratio", level_count},
      {"cascade sizing of the deepest level", cascade_sizing},
      {"box counting", box_counting},
      {"four-bar position analysis", four_bar},
      {"level optimizer", level_optimizer},
      {"wrench closure", wrench_closure_lp},
      {"grasp coverage", coverage_claims},
      {"deterministic reruns", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.check(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu: %s (%.2f s)\n", c.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs);
    for (const auto& d : c.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    failures += c.pass ? 0 : 1;
  }
  fs::remove_all(g_root);
  return failures == 0 ? 0 : 1;
}
