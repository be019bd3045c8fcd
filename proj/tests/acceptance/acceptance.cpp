#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rislink/harness/experiments.hpp"
#include "rislink/harness/output.hpp"
#include "rislink/validation.hpp"

using namespace rislink;
using namespace rislink::harness;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double relative_gap(double achieved, double oracle) { return std::abs(achieved / oracle - 1.0); }

Outcome closed_form_optimality() {
  const auto start = std::chrono::steady_clock::now();
  OracleConfig oc;
  oc.phase_levels = 256;

  const Scene scene = toy_scene(false);
  const FarFieldChannel ff = farfield_channel(scene, FarFieldMode::Strict);
  const Solution s = closed_form_solution(scene, 1.0);
  const double gap = relative_gap(received_power(ff.channels, s.theta, s.v, 1.0),
                                  exhaustive_phase_search(ff.channels, 1.0, oc).best_power);

  const Scene direct = toy_scene(true);
  FarFieldChannel ff2 = farfield_channel(direct, FarFieldMode::Strict);
  set_direct_amplitude(ff2.channels, 0.5 * direct.ris.size() * ff2.factors.a_tir);
  const TwoPathPhases phases = closed_form_phases_two_path(ff2.angles, direct.ris, direct.tx, direct.wavelength);
  const Solution s2 = mrt_solution(ff2.channels, phases.theta, 1.0);
  const double gap2 = relative_gap(received_power(ff2.channels, s2.theta, s2.v, 1.0),
                                   exhaustive_phase_search(ff2.channels, 1.0, oc).best_power);
  const double elapsed = seconds_since(start);
  return {gap <= 5e-3 && gap2 <= 5e-3 && elapsed < 30.0,
          fmt("gap %.3g (RIS only), %.3g (two-path, O = %.3f), %.1f s", gap, gap2, phases.terms.o, elapsed)};
}

Outcome upper_bound_attainment() {
  const auto start = std::chrono::steady_clock::now();
  SceneConfig cfg;
  cfg.distance.points = 181;
  const Table t = run_sweep_distance(cfg);
  double worst = 0.0;
  int checked = 0;
  for (const auto& row : t.rows) {
    if (row[t.column("far_field_ok")] != 1.0) continue;
    ++checked;
    const double bound = row[t.column("upper_bound_dbm")];
    worst = std::max({worst, bound - row[t.column("closed_form_dbm")], bound - row[t.column("svd_dbm")]});
  }
  const double elapsed = seconds_since(start);
  return {checked > 0 && worst <= 0.1 && elapsed < 60.0,
          fmt("%d far-field distances in [20, 200] m, worst gap %.4f dB, %.1f s", checked, worst, elapsed)};
}

Outcome scaling_laws() {
  const double a = 3.711787807471559e-08;
  const double analytic_n = closed_form_power(a, 32, 400, 1e-3) / closed_form_power(a, 16, 400, 1e-3);
  const double analytic_l = closed_form_power(a, 16, 800, 1e-3) / closed_form_power(a, 16, 400, 1e-3);

  SceneConfig cfg;
  const auto numeric = [&](int antennas, int rows, int cols) {
    SceneConfig c = cfg;
    c.antennas = antennas;
    c.ris_rows = rows;
    c.ris_cols = cols;
    const Scene s = distance_scene(c, 200.0);
    const FarFieldChannel ff = farfield_channel(s);
    const Solution sol = closed_form_solution(s, c.transmit_power);
    return std::pair{received_power(ff.channels, sol.theta, sol.v, c.transmit_power), ff.factors.a_tir};
  };
  const auto [p_base, a_base] = numeric(16, 20, 20);
  const auto [p_n, a_n] = numeric(32, 20, 20);
  const auto [p_l, a_l] = numeric(16, 20, 40);
  const double numeric_n = p_n / p_base;
  const double numeric_l = p_l / p_base;
  const bool fixed_a = a_n == a_base && a_l == a_base;
  const double worst = std::max({std::abs(analytic_n / 2 - 1), std::abs(analytic_l / 4 - 1),
                                 std::abs(numeric_n / 2 - 1), std::abs(numeric_l / 4 - 1)});
  return {fixed_a && worst <= 1e-9,
          fmt("2N: %.12f / %.12f, 2L: %.12f / %.12f (analytic / numeric), worst rel %.2g", analytic_n, numeric_n,
              analytic_l, numeric_l, worst)};
}

Outcome orientation_optimum() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  double worst_excess = -1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = 1.0 + 499.0 * unit(rng);
    const double b = 1.0 + 499.0 * unit(rng);
    const double c = std::abs(a - b) + (a + b - std::abs(a - b)) * (0.001 + 0.998 * unit(rng));
    const double theta_0 = triangle_angle(a, b, c);
    for (double k : {0.0, 1.0, 2.0, 3.0}) {
      const double best = optimal_orientation(a, b, c, k).pattern_factor;
      for (int i = 0; i <= 10000; ++i) {
        const double t = theta_0 * i / 10000;
        const double f = radiation_pattern(t, k) * radiation_pattern(std::max(0.0, theta_0 - t), k);
        worst_excess = std::max(worst_excess, f - best);
        if (f > best + 1e-12) ++violations;
      }
    }
  }
  return {violations == 0, fmt("400 triangle/k pairs x 10001 splits, max F - F* = %.3g", worst_excess)};
}

Outcome boundary_reduction() {
  int failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const PlaneScene scene = random_plane_scene(100000 + trial);
    const double k = trial % 4;
    const GridArgmax g = dense_position_grid(scene, f_object_objective(scene.tx, scene.rx, k), 300);
    const double ratio = distance_to_search_set(scene, g.position, k) / g.cell.norm();
    worst = std::max(worst, ratio);
    if (ratio > 1.0) ++failures;
  }

  SceneConfig cfg;
  const Scene base = plane_scene_base(cfg);
  PlaneScene plane = make_plane_scene(cfg.h1, cfg.h2, base.rx.position.x(),
                                      {rectangle(cfg.plane.x_min, cfg.plane.y_min, cfg.plane.x_max, cfg.plane.y_max)});
  const PositionObjective objective = power_objective(base, cfg.transmit_power);
  const GridArgmax g = dense_position_grid(plane, objective, 201);
  const PlaneSearchResult search = position_search_plane(plane, objective);
  const double tr = plane.tr_projection();
  const double near_end = std::min(g.position.norm(), (g.position - Point2(tr, 0)).norm());
  const bool on_line = std::abs(g.position.y()) <= g.cell.y();
  const bool near = near_end <= 0.2 * tr;
  const bool agrees = (search.position - g.position).norm() <= g.cell.norm() && search.value >= g.value;
  return {failures == 0 && on_line && near && agrees,
          fmt("500 scenes, worst %.3g cells; scaled scene argmax (%.1f, %.1f), %.1f m from T' or R', search "
              "(%.2f, %.2f)",
              worst, g.position.x(), g.position.y(), near_end, search.position.x(), search.position.y())};
}

Outcome quasiconvexity() {
  const double d_tr = 200.0;
  bool ok = true;
  int maxima = 0;
  int minima = 0;
  for (FixedSide side : {FixedSide::Transmit, FixedSide::Receive}) {
    ok = ok && quasiconvexity_report(d_tr, 0.0, 2.0 * d_tr, side).strictly_decreasing;
    for (double k : {0.5, 1.0, 2.0, 3.0, 5.0}) {
      for (double ratio : {1.5, 2.0, 3.0, 5.0, 10.0}) {
        minima += quasiconvexity_report(d_tr, k, ratio * d_tr, side).interior_minima;
      }
      for (int i = 1; i <= 100; ++i) {
        maxima += quasiconvexity_report(d_tr, k, (1.0 + 0.09 * i) * d_tr, side).interior_maxima;
      }
    }
  }
  ok = ok && minima == 0 && maxima == 0;
  return {ok, fmt("k = 0 strictly decreasing; interior minima %d at d_fixed / d_TR in {1.5..10}; interior maxima %d "
                  "over d_fixed / d_TR in (1, 10]",
                  minima, maxima)};
}

Outcome ripples() {
  SceneConfig cfg;
  cfg.direct_link = true;
  const Table t = run_line_profile(cfg);
  std::vector<double> cross;
  std::vector<double> power;
  for (const auto& row : t.rows) {
    cross.push_back(row[t.column("cross_term_w")]);
    power.push_back(row[t.column("power_dbm")]);
  }
  const int ridges = count_local_maxima(cross);
  return {ridges == cfg.antennas / 2,
          fmt("%d cross-term ridges along line l for N = %d (%d in total power)", ridges, cfg.antennas,
              count_local_maxima(power))};
}

Outcome anti_decay() {
  SceneConfig cfg;
  const Table t = run_sweep_wavelength(cfg);
  double lo = 1e300;
  double hi = 0.0;
  for (const auto& row : t.rows) {
    const double w = dbm_to_watts(row[t.column("ris_dbm")]);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  const double spread = hi / lo - 1.0;
  const double drop = t.rows.back()[t.column("direct_dbm")] - t.rows.front()[t.column("direct_dbm")];
  const double octave = t.rows.back()[t.column("wavelength")] / t.rows.front()[t.column("wavelength")];
  return {std::abs(octave - 2.0) < 1e-12 && spread <= 0.02 && std::abs(drop - 6.02) <= 0.1,
          fmt("RIS power spread %.2f%%, direct power %.3f dB lower at the short end", 100 * spread, drop)};
}

Outcome robustness() {
  SceneConfig cfg;
  const Table t = run_robustness(cfg);
  const RobustnessRegion r = analyze_robustness(t, cfg.robustness);
  return {r.contains_square,
          fmt("region below %.2g: %d nodes, %.0f m^2, %g m square at (%.1f, %.1f)", cfg.robustness.threshold, r.cells,
              r.area, cfg.robustness.square_side, r.square_x, r.square_y)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "rislink_acceptance_determinism";
  fs::remove_all(root);
  struct Run {
    std::string command;
    std::vector<std::string> csv;
  };
  const std::vector<Run> runs = {
      {"solve", {"solve.csv"}},
      {"sweep-distance", {"sweep-distance.csv"}},
      {"--direct-link sweep-plane", {"sweep-plane.csv", "line-profile.csv"}},
      {"sweep-wavelength", {"sweep-wavelength.csv"}},
      {"robustness", {"robustness.csv"}},
  };
  int compared = 0;
  std::string mismatch;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& run : runs) {
      const fs::path out = root / std::to_string(pass);
      const std::string cmd = std::string("\"") + RISLINK_CLI_PATH + "\" --config \"" RISLINK_SOURCE_DIR
                              "/config/default.yaml\" --out \"" + out.string() + "\" " + run.command + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI failed: " + run.command};
    }
  }
  for (const auto& run : runs) {
    for (const auto& csv : run.csv) {
      const std::string a = slurp(root / "0" / csv);
      const std::string b = slurp(root / "1" / csv);
      if (a.empty() || a != b) mismatch += " " + csv;
      ++compared;
    }
  }
  fs::remove_all(root);
  return {mismatch.empty(), mismatch.empty() ? fmt("%d CSV files byte-identical across two runs", compared)
                                             : "differs:" + mismatch};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"closed-form optimality vs exhaustive search", closed_form_optimality},
      {"upper-bound attainment over distance", upper_bound_attainment},
      {"scaling laws in N and L", scaling_laws},
      {"orientation optimum", orientation_optimum},
      {"boundary reduction of the position search", boundary_reduction},
      {"quasi-convexity of the placement objective", quasiconvexity},
      {"two-path ripples along line l", ripples},
      {"anti-decay over one octave", anti_decay},
      {"robustness region", robustness},
      {"determinism of CLI output", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
