#include "rislink/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace rislink {

namespace {

constexpr double kMaxCombinations = 1e9;
constexpr int kMaxElements = 6;

Vec3 spherical(double r, double theta_deg, double phi_deg) {
  const double t = theta_deg * kPi<double> / 180.0;
  const double p = phi_deg * kPi<double> / 180.0;
  return r * Vec3(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t));
}

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

}  // namespace

void OracleConfig::validate() const {
  if (phase_levels < 2) throw Error(ErrorKind::InvalidArgument, "phase_levels must be >= 2");
  if (grid_points_1d < 2) throw Error(ErrorKind::InvalidArgument, "grid_points_1d must be >= 2");
}

PhaseSearchResult exhaustive_phase_search(const ChannelSet& channels, double transmit_power,
                                          const OracleConfig& cfg) {
  cfg.validate();
  channels.validate();
  const ComplexMatrix c = channels.cascade();
  const int l = static_cast<int>(c.rows());
  const Eigen::Index n = c.cols();
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "need at least one element");
  const double combinations = std::pow(static_cast<double>(cfg.phase_levels), l - 1);
  if (l > kMaxElements || combinations > kMaxCombinations) {
    throw Error(ErrorKind::TooLarge, "phase grid has " + format("%.3g", combinations) + " combinations");
  }
  const int levels = cfg.phase_levels;
  std::vector<Complex> w(levels);
  for (int m = 0; m < levels; ++m) w[m] = phasor(2.0 * kPi<double> * m / levels);

  std::vector<ComplexVector> partial(l, ComplexVector::Zero(n));
  if (channels.tr) partial[0] = *channels.tr;
  std::vector<int> digits(l, 0);
  for (int d = 0; d + 1 < l; ++d) partial[d + 1] = partial[d] + w[0] * c.row(d).transpose();
  const ComplexVector last = c.row(l - 1).transpose();

  PhaseSearchResult best;
  best.best_power = -1.0;
  std::uint64_t count = 0;
  while (true) {
    const ComplexVector& a = partial[l - 1];
    const Complex z = a.dot(last);  // a^H last
    // Re(theta z) is largest for the level nearest to -arg(z).
    int m = static_cast<int>(std::lround(-std::arg(z) * levels / (2.0 * kPi<double>)));
    m = ((m % levels) + levels) % levels;
    digits[l - 1] = m;
    const double power = (a + w[m] * last).squaredNorm() * transmit_power;
    ++count;
    if (power > best.best_power) {
      best.best_power = power;
      best.best_theta.resize(l);
      for (int q = 0; q < l; ++q) best.best_theta(q) = w[digits[q]];
    }
    int d = l - 2;
    while (d >= 0 && ++digits[d] == levels) digits[d--] = 0;
    if (d < 0) break;
    for (int e = d; e + 1 < l; ++e) partial[e + 1] = partial[e] + w[digits[e]] * c.row(e).transpose();
  }
  best.combinations = count;
  return best;
}

GridArgmax dense_position_grid(const PlaneScene& scene, const PositionObjective& objective, int resolution) {
  scene.validate();
  if (resolution < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 2");
  if (scene.feasible.empty()) throw Error(ErrorKind::EmptyFeasible, "no feasible polygons");
  Point2 lo = Point2::Constant(std::numeric_limits<double>::infinity());
  Point2 hi = -lo;
  for (const auto& poly : scene.feasible) {
    for (const auto& v : poly) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }
  GridArgmax g;
  g.cell = (hi - lo) / (resolution - 1);
  g.runner_up = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const Point2 p(lo.x() + g.cell.x() * i, lo.y() + g.cell.y() * j);
      if (!scene.feasible_at(p)) continue;
      const double v = objective.evaluate(scene.to_world(p));
      ++g.evaluated;
      if (!found || v > g.value) {
        if (found) g.runner_up = g.value;
        g.value = v;
        g.position = p;
        found = true;
      } else if (v > g.runner_up) {
        g.runner_up = v;
      }
    }
  }
  if (!found) throw Error(ErrorKind::EmptyFeasible, "no feasible grid node");
  g.world = scene.to_world(g.position);
  return g;
}

double distance_to_search_set(const PlaneScene& scene, const Point2& p, double k) {
  const auto segment_distance = [](const Point2& q, const Point2& a, const Point2& b) {
    const Point2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((q - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (q - (a + t * ab)).norm();
  };
  double best = k == 0.0 ? segment_distance(p, Point2::Zero(), Point2(scene.tr_projection(), 0.0))
                         : std::abs(p.y());
  for (const auto& poly : scene.feasible) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
    }
  }
  return best;
}

PlaneScene random_plane_scene(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
  while (true) {
    const double h1 = uniform(10.0, 100.0);
    const double h2 = uniform(10.0, 100.0);
    const double tr = uniform(50.0, 300.0);
    PlaneScene scene = make_plane_scene(h1, h2, tr);
    const Point2 center(uniform(-200.0, tr + 200.0), uniform(-150.0, 150.0));
    const double ra = uniform(10.0, 80.0);
    const double rb = uniform(10.0, 80.0);
    const double rot = uniform(0.0, 2.0 * kPi<double>);
    const int vertices = 3 + static_cast<int>(unit(rng) * 8.0);
    std::vector<double> angles(vertices);
    for (auto& a : angles) a = uniform(0.0, 2.0 * kPi<double>);
    std::sort(angles.begin(), angles.end());
    Polygon poly;
    for (double a : angles) {
      const Point2 e(ra * std::cos(a), rb * std::sin(a));
      poly.push_back(center + Point2(std::cos(rot) * e.x() - std::sin(rot) * e.y(),
                                     std::sin(rot) * e.x() + std::cos(rot) * e.y()));
    }
    scene.feasible = {poly};

    // Reject against region D enlarged by 5% so grid nodes cannot slip inside it.
    const double reach = 1.05 * scene.d_tr();
    Point2 lo = poly.front();
    Point2 hi = poly.front();
    for (const auto& v : poly) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    bool touches = false;
    constexpr int kProbe = 80;
    for (int i = 0; i <= kProbe && !touches; ++i) {
      for (int j = 0; j <= kProbe && !touches; ++j) {
        const Point2 p = lo + (hi - lo).cwiseProduct(Point2(i, j) / kProbe);
        if (!scene.feasible_at(p)) continue;
        const Vec3 w = scene.to_world(p);
        touches = (w - scene.tx).norm() <= reach && (w - scene.rx).norm() <= reach;
      }
    }
    if (!touches) return scene;
  }
}

VolumeArgmax dense_volume_grid(const Vec3& box_min, const Vec3& box_max,
                               const std::function<bool(const Vec3&)>& inside,
                               const PositionObjective& objective, int resolution) {
  if (resolution < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 2");
  VolumeArgmax g;
  g.cell = (box_max - box_min) / (resolution - 1);
  g.runner_up = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      for (int m = 0; m < resolution; ++m) {
        const Vec3 p = box_min + g.cell.cwiseProduct(Vec3(i, j, m));
        if (!inside(p)) continue;
        const double v = objective.evaluate(p);
        if (!found || v > g.value) {
          if (found) g.runner_up = g.value;
          g.value = v;
          g.position = p;
          found = true;
        } else if (v > g.runner_up) {
          g.runner_up = v;
        }
      }
    }
  }
  if (!found) throw Error(ErrorKind::EmptyFeasible, "no grid node inside the volume");
  return g;
}

std::vector<FeasiblePair> random_feasible_solutions(int elements, int antennas, double transmit_power,
                                                    int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "count must be >= 1");
  if (elements < 1 || antennas < 1) throw Error(ErrorKind::InvalidArgument, "dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi<double>);
  std::normal_distribution<double> normal;
  std::vector<FeasiblePair> out(count);
  for (auto& pair : out) {
    pair.theta.resize(elements);
    for (int q = 0; q < elements; ++q) pair.theta(q) = phasor(phase(rng));
    pair.v.resize(antennas);
    for (int p = 0; p < antennas; ++p) pair.v(p) = Complex(normal(rng), normal(rng));
    pair.v *= std::sqrt(transmit_power) / pair.v.norm();
  }
  return out;
}

Scene toy_scene(bool direct_link) {
  constexpr double kWavelength = 0.0286;
  Scene s;
  s.wavelength = kWavelength;
  s.tx = make_ula(spherical(20.0, 35.0, 200.0), 2, kWavelength / 2.0, Vec3(1.0, 2.0, 0.5).normalized());
  s.ris.rows = s.ris.cols = 2;
  s.ris.element_dx = s.ris.element_dy = 0.01;
  s.ris.pattern_exponent = 3.0;
  s.ris.element_gain = db_to_linear(9.03);
  s.rx.position = spherical(30.0, 50.0, 20.0);
  s.direct_link = direct_link;
  return s;
}

void set_direct_amplitude(ChannelSet& channels, double amplitude) {
  if (!channels.tr) throw Error(ErrorKind::InvalidArgument, "channel set has no direct link");
  for (auto& h : *channels.tr) h = amplitude * h / std::abs(h);
}

std::vector<OracleCheck> run_oracle_suite(const OracleConfig& cfg) {
  cfg.validate();
  std::vector<OracleCheck> checks;
  constexpr double kPt = 1.0;

  {
    const Scene scene = toy_scene(false);
    const FarFieldChannel ff = farfield_channel(scene);
    const Solution s = closed_form_solution(scene, kPt);
    const double achieved = received_power(ff.channels, s.theta, s.v, kPt);
    const double oracle = exhaustive_phase_search(ff.channels, kPt, cfg).best_power;
    const double gap = std::abs(achieved / oracle - 1.0);
    checks.push_back({"closed_form_vs_exhaustive", gap <= 5e-3, format("relative gap %.3g", gap)});
  }
  {
    const Scene scene = toy_scene(true);
    FarFieldChannel ff = farfield_channel(scene);
    const double a_tr = 0.5 * scene.ris.size() * ff.factors.a_tir;
    set_direct_amplitude(ff.channels, a_tr);
    const TwoPathPhases phases = closed_form_phases_two_path(ff.angles, scene.ris, scene.tx, scene.wavelength);
    const Solution s = mrt_solution(ff.channels, phases.theta, kPt);
    const double achieved = received_power(ff.channels, s.theta, s.v, kPt);
    const double oracle = exhaustive_phase_search(ff.channels, kPt, cfg).best_power;
    const double gap = std::abs(achieved / oracle - 1.0);
    checks.push_back({"two_path_vs_exhaustive", gap <= 5e-3,
                      format("relative gap %.3g, O = %.3g", gap, phases.terms.o)});
  }
  {
    const Scene scene = toy_scene(false);
    const FarFieldChannel ff = farfield_channel(scene);
    const Solution s = closed_form_solution(scene, kPt);
    const double reference = received_power(ff.channels, s.theta, s.v);
    int violations = 0;
    for (const auto& pair : random_feasible_solutions(scene.ris.size(), scene.tx.size(), kPt, 1000, cfg.seed)) {
      if (received_power(ff.channels, pair.theta, pair.v) > reference * (1.0 + 1e-9)) ++violations;
    }
    checks.push_back({"random_dominance", violations == 0, format("%.0f of 1000 samples beat closed form", violations)});
  }
  {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;
    ChannelSet ch;
    ch.wavelength = 0.0286;
    ch.ti.resize(6, 3);
    ch.ir.resize(6);
    for (Eigen::Index i = 0; i < ch.ti.size(); ++i) ch.ti(i) = Complex(normal(rng), normal(rng));
    for (Eigen::Index i = 0; i < ch.ir.size(); ++i) ch.ir(i) = Complex(normal(rng), normal(rng));
    const double bound = power_upper_bound(ch, kPt);
    const Solution s = svd_solution(ch, kPt);
    bool ok = received_power(ch, s.theta, s.v, kPt) <= bound * (1.0 + 1e-9);
    for (const auto& pair : random_feasible_solutions(6, 3, kPt, 200, cfg.seed + 1)) {
      ok = ok && received_power(ch, pair.theta, pair.v) <= bound * (1.0 + 1e-9);
    }
    checks.push_back({"upper_bound_dominance", ok, format("bound %.6g W", bound)});
  }
  {
    Scene scene = toy_scene(false);
    scene.tx.center *= 5.0;
    scene.rx.position *= 5.0;
    const FarFieldChannel ff = farfield_channel(scene, FarFieldMode::Strict, 1e3);
    const ComplexMatrix exact = exact_channel(scene).cascade();
    const ComplexMatrix approx = ff.channels.cascade();
    double amp = 0.0;
    double phase = 0.0;
    for (Eigen::Index i = 0; i < exact.size(); ++i) {
      amp = std::max(amp, std::abs(std::abs(exact(i)) / std::abs(approx(i)) - 1.0));
      phase = std::max(phase, std::abs(std::arg(exact(i) / approx(i))));
    }
    checks.push_back({"exact_vs_farfield", amp <= 1e-3 && phase <= 0.05,
                      format("amplitude %.3g, phase %.3g rad", amp, phase)});
  }
  {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const double a = 1.0 + 99.0 * unit(rng);
      const double b = 1.0 + 99.0 * unit(rng);
      const double c = std::abs(a - b) + (a + b - std::abs(a - b)) * unit(rng);
      const double theta_0 = triangle_angle(a, b, c);
      for (double k : {0.0, 1.0, 2.0, 3.0}) {
        const double best = optimal_orientation(a, b, c, k).pattern_factor;
        for (int i = 0; i <= cfg.grid_points_1d; ++i) {
          const double t = theta_0 * i / cfg.grid_points_1d;
          if (radiation_pattern(t, k) * radiation_pattern(std::max(0.0, theta_0 - t), k) > best + 1e-12) ++violations;
        }
      }
    }
    checks.push_back({"orientation_optimum", violations == 0, format("%.0f grid splits beat F*", violations)});
  }
  {
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const PlaneScene scene = random_plane_scene(cfg.seed * 1000 + trial);
      const double k = trial % 4;
      const GridArgmax g = dense_position_grid(scene, f_object_objective(scene.tx, scene.rx, k), cfg.grid_points_1d);
      const double ratio = distance_to_search_set(scene, g.position, k) / g.cell.norm();
      worst = std::max(worst, ratio);
      if (ratio > 1.0) ++failures;
    }
    checks.push_back({"boundary_reduction", failures == 0, format("worst distance %.3g cells", worst)});
  }
  {
    bool ok = quasiconvexity_report(200.0, 0.0, 400.0, FixedSide::Transmit).strictly_decreasing;
    for (double k : {0.5, 1.0, 2.0, 3.0, 5.0}) {
      const auto r = quasiconvexity_report(200.0, k, 400.0, FixedSide::Transmit);
      ok = ok && r.interior_maxima == 0 && r.interior_minima == 0;
    }
    checks.push_back({"quasiconvexity_scan", ok, "d_fixed = 2 d_TR"});
  }
  return checks;
}

}  // namespace rislink
