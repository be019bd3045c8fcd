#include "rislink/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace rislink::harness {

namespace {

constexpr int kPaperScaleSide = 100;

double linspace(double start, double stop, int points, int i) {
  return points == 1 ? start : start + (stop - start) * i / (points - 1);
}

void reject_paper_scale(const SceneConfig& cfg, const char* experiment) {
  if (cfg.paper_scale) {
    throw Error(ErrorKind::ConfigError, std::string(experiment) +
                                            " assembles channels numerically; --paper-scale applies to "
                                            "sweep-plane and sweep-wavelength only");
  }
}

RisPanel ris_template(const SceneConfig& cfg) {
  RisPanel ris;
  ris.rows = cfg.paper_scale ? kPaperScaleSide : cfg.ris_rows;
  ris.cols = cfg.paper_scale ? kPaperScaleSide : cfg.ris_cols;
  ris.element_dx = cfg.element_dx;
  ris.element_dy = cfg.element_dy;
  ris.reflection_coeff = cfg.reflection;
  ris.pattern_exponent = cfg.pattern_exponent;
  ris.element_gain = cfg.ris_gain;
  return ris;
}

double tr_projection(const SceneConfig& cfg) {
  return std::sqrt(std::max(0.0, cfg.d_tr * cfg.d_tr - (cfg.h1 - cfg.h2) * (cfg.h1 - cfg.h2)));
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorKind::InvalidArgument, "no column " + name);
  return static_cast<std::size_t>(it - header.begin()) - (labels.empty() ? 0 : 1);
}

Scene plane_scene_base(const SceneConfig& cfg) {
  Scene s;
  s.wavelength = cfg.wavelength;
  s.tx = make_ula(Vec3(0.0, 0.0, cfg.h1), cfg.antennas, cfg.spacing_wavelengths * cfg.wavelength,
                  Vec3::UnitZ(), cfg.tx_gain);
  s.rx.position = Vec3(tr_projection(cfg), 0.0, cfg.h2);
  s.rx.gain = cfg.rx_gain;
  s.ris = ris_template(cfg);
  s.direct_link = cfg.direct_link;
  return s;
}

Scene distance_scene(const SceneConfig& cfg, double d) {
  const double e = cfg.distance.elevation_deg * kPi<double> / 180.0;
  Scene s;
  s.wavelength = cfg.wavelength;
  s.tx = make_ula(d * Vec3(-std::sin(e), 0.0, std::cos(e)), cfg.antennas,
                  cfg.spacing_wavelengths * cfg.wavelength, Vec3::UnitX(), db_to_linear(cfg.distance.tx_gain_db));
  s.rx.position = d * Vec3(std::sin(e), 0.0, std::cos(e));
  s.rx.gain = db_to_linear(cfg.distance.rx_gain_db);
  s.ris = ris_template(cfg);
  s.direct_link = cfg.direct_link;
  return s;
}

Table run_solve(const SceneConfig& cfg) {
  reject_paper_scale(cfg, "solve");
  Table t;
  t.experiment = "solve";
  t.header = {"method", "predicted_dbm", "exact_dbm", "farfield_dbm"};
  const Scene scene = place_ris(plane_scene_base(cfg), Vec3(cfg.ris_x, cfg.ris_y, 0.0));
  const double pt = cfg.transmit_power;
  const FarFieldChannel ff = farfield_channel(scene, cfg.far_field);
  if (!ff.check.ok) t.warnings.push_back("scene violates the far-field conditions");
  const ChannelSet exact = exact_channel(scene);

  const Solution cf = closed_form_solution(scene, pt);
  t.labels.push_back(to_string(cf.method));
  t.rows.push_back({watts_to_dbm(cf.predicted_power), watts_to_dbm(received_power(exact, cf.theta, cf.v, pt)),
                    watts_to_dbm(received_power(ff.channels, cf.theta, cf.v, pt))});

  const Solution svd = svd_solution(exact, pt);
  t.labels.push_back(to_string(svd.method));
  t.rows.push_back({watts_to_dbm(svd.predicted_power), watts_to_dbm(received_power(exact, svd.theta, svd.v, pt)),
                    watts_to_dbm(received_power(ff.channels, svd.theta, svd.v, pt))});

  t.labels.push_back("upper_bound");
  t.rows.push_back({watts_to_dbm(power_upper_bound(exact, pt)), watts_to_dbm(power_upper_bound(exact, pt)),
                    watts_to_dbm(power_upper_bound(ff.channels, pt))});
  return t;
}

Table run_sweep_distance(const SceneConfig& cfg) {
  reject_paper_scale(cfg, "sweep-distance");
  Table t;
  t.experiment = "sweep-distance";
  t.header = {"d", "closed_form_dbm", "svd_dbm", "upper_bound_dbm", "predicted_dbm", "far_field_ok"};
  const double pt = cfg.transmit_power;
  int violations = 0;
  for (int i = 0; i < cfg.distance.points; ++i) {
    const double d = linspace(cfg.distance.start, cfg.distance.stop, cfg.distance.points, i);
    const Scene scene = distance_scene(cfg, d);
    const FarFieldReport check = far_field_check(scene.tx, scene.ris, scene.rx.position);
    if (!check.ok) {
      ++violations;
      if (cfg.far_field == FarFieldMode::Strict) continue;
    }
    const ChannelSet exact = exact_channel(scene);
    const Solution cf = closed_form_solution(scene, pt);
    const Solution svd = svd_solution(exact, pt);
    t.rows.push_back({d, watts_to_dbm(received_power(exact, cf.theta, cf.v, pt)),
                      watts_to_dbm(received_power(exact, svd.theta, svd.v, pt)),
                      watts_to_dbm(power_upper_bound(exact, pt)), watts_to_dbm(cf.predicted_power),
                      check.ok ? 1.0 : 0.0});
  }
  if (violations) {
    t.warnings.push_back(std::to_string(violations) + " distance(s) violate the far-field conditions" +
                         (cfg.far_field == FarFieldMode::Strict ? " and were skipped" : ""));
  }
  return t;
}

Table run_sweep_plane(const SceneConfig& cfg) {
  Table t;
  t.experiment = "sweep-plane";
  t.header = {"x", "y", "power_dbm"};
  const Scene base = plane_scene_base(cfg);
  const double pt = cfg.transmit_power;
  const int n = cfg.plane.points;
  int violations = 0;
  t.rows.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double x = linspace(cfg.plane.x_min, cfg.plane.x_max, n, i);
    for (int j = 0; j < n; ++j) {
      const double y = linspace(cfg.plane.y_min, cfg.plane.y_max, n, j);
      const Vec3 center(x, y, 0.0);
      const Scene placed = place_ris(base, center);
      if (!far_field_check(placed.tx, placed.ris, placed.rx.position).ok) {
        ++violations;
        if (cfg.far_field == FarFieldMode::Strict) continue;
      }
      t.rows.push_back({x, y, watts_to_dbm(optimal_power_at(base, center, pt))});
    }
  }
  if (violations) {
    t.warnings.push_back(std::to_string(violations) + " grid point(s) violate the far-field conditions" +
                         (cfg.far_field == FarFieldMode::Strict ? " and were skipped" : ""));
  }
  return t;
}

Table run_line_profile(const SceneConfig& cfg) {
  Table t;
  t.experiment = "line-profile";
  t.header = {"x", "power_dbm", "cross_term_w"};
  const Scene base = plane_scene_base(cfg);
  const double pt = cfg.transmit_power;
  const int n = cfg.plane.line_points;
  for (int i = 0; i < n; ++i) {
    const double x = linspace(cfg.plane.line_min, cfg.plane.line_max, n, i);
    const Scene s = place_ris(base, Vec3(x, 0.0, 0.0));
    const LinkAngles ang = link_angles(s.tx, s.ris, s.rx.position);
    const double a_tir = amplitude_gain_tir(ang, s).a_tir;
    double cross = 0.0;
    if (s.direct_link) {
      const double a_tr = direct_amplitude(s.tx.element_gain, s.rx.gain, s.wavelength, ang.d_tr);
      const double o = two_path_terms(ang, s.tx, s.wavelength).o;
      cross = 2.0 * s.tx.size() * s.ris.size() * a_tir * a_tr * std::abs(o) * pt;
    }
    t.rows.push_back({x, watts_to_dbm(optimal_power_at(base, s.ris.center, pt)), cross});
  }
  return t;
}

Table run_sweep_wavelength(const SceneConfig& cfg) {
  Table t;
  t.experiment = "sweep-wavelength";
  t.header = {"wavelength", "rows", "area", "ris_dbm", "direct_dbm", "combined_dbm"};
  const WavelengthSweep& w = cfg.wavelength_sweep;
  const double pt = cfg.transmit_power;
  for (int i = 0; i < w.points; ++i) {
    const double lambda = linspace(w.start, w.stop, w.points, i);
    const RisGridDesign design = anti_decay_design(lambda, w.mode, w.ratio, w.reference);
    if (design.rows < 1) throw Error(ErrorKind::ConfigError, "anti-decay design yields an empty panel");
    SceneConfig point = cfg;
    point.wavelength = lambda;
    point.paper_scale = false;
    point.ris_rows = design.rows;
    point.ris_cols = design.cols;
    point.element_dx = design.element_dx;
    point.element_dy = design.element_dy;
    Scene base = plane_scene_base(point);
    const Vec3 at_r(base.rx.position.x(), base.rx.position.y(), 0.0);
    base.direct_link = false;
    const double ris_only = optimal_power_at(base, at_r, pt);
    base.direct_link = true;
    const double combined = optimal_power_at(base, at_r, pt);
    const double a_tr = direct_amplitude(base.tx.element_gain, base.rx.gain, lambda, cfg.d_tr);
    const double direct = base.tx.size() * a_tr * a_tr * pt;
    t.rows.push_back({lambda, static_cast<double>(design.rows), design.achieved_area, watts_to_dbm(ris_only),
                      watts_to_dbm(direct), watts_to_dbm(combined)});
  }
  return t;
}

Table run_robustness(const SceneConfig& cfg) {
  reject_paper_scale(cfg, "robustness");
  Table t;
  t.experiment = "robustness";
  t.header = {"x", "y", "estimated_dbm", "optimal_dbm", "deviation"};
  const Scene base = plane_scene_base(cfg);
  const double pt = cfg.transmit_power;
  const Vec3 assumed(cfg.ris_x, cfg.ris_y, 0.0);
  const Solution estimate = closed_form_solution(place_ris(base, assumed), pt);
  const RobustnessSweep& r = cfg.robustness;
  t.rows.reserve(static_cast<std::size_t>(r.points) * r.points);
  for (int i = 0; i < r.points; ++i) {
    const double x = assumed.x() + linspace(-r.half_width, r.half_width, r.points, i);
    for (int j = 0; j < r.points; ++j) {
      const double y = assumed.y() + linspace(-r.half_width, r.half_width, r.points, j);
      const Scene placed = place_ris(base, Vec3(x, y, 0.0));
      const ChannelSet exact = exact_channel(placed);
      const Solution optimal = closed_form_solution(placed, pt);
      const double p_est = received_power(exact, estimate.theta, estimate.v, pt);
      const double p_opt = received_power(exact, optimal.theta, optimal.v, pt);
      t.rows.push_back({x, y, watts_to_dbm(p_est), watts_to_dbm(p_opt),
                        std::abs(p_est - p_opt) / std::max(p_est, p_opt)});
    }
  }
  return t;
}

int count_local_maxima(const std::vector<double>& values) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) ++count;
  }
  return count;
}

RobustnessRegion analyze_robustness(const Table& table, const RobustnessSweep& sweep) {
  const int n = sweep.points;
  if (table.rows.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorKind::DimensionMismatch, "robustness table is not a full grid");
  }
  const std::size_t dev = table.column("deviation");
  const std::size_t xc = table.column("x");
  const std::size_t yc = table.column("y");
  const double step = 2.0 * sweep.half_width / (n - 1);
  const auto at = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };

  std::vector<char> in(static_cast<std::size_t>(n) * n, 0);
  const int mid = n / 2;
  RobustnessRegion region;
  if (table.rows[at(mid, mid)][dev] < sweep.threshold) {
    std::queue<std::pair<int, int>> frontier;
    frontier.push({mid, mid});
    in[at(mid, mid)] = 1;
    while (!frontier.empty()) {
      const auto [i, j] = frontier.front();
      frontier.pop();
      ++region.cells;
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int a = i + di[k];
        const int b = j + dj[k];
        if (a < 0 || b < 0 || a >= n || b >= n || in[at(a, b)]) continue;
        if (table.rows[at(a, b)][dev] < sweep.threshold) {
          in[at(a, b)] = 1;
          frontier.push({a, b});
        }
      }
    }
  }
  region.area = region.cells * step * step;

  // Square of side s covers ceil(s / step) + 1 nodes per axis.
  const int span = static_cast<int>(std::ceil(sweep.square_side / step - 1e-9)) + 1;
  std::vector<int> prefix(static_cast<std::size_t>(n + 1) * (n + 1), 0);
  const auto pre = [n](int i, int j) { return static_cast<std::size_t>(i) * (n + 1) + j; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      prefix[pre(i + 1, j + 1)] = in[at(i, j)] + prefix[pre(i, j + 1)] + prefix[pre(i + 1, j)] - prefix[pre(i, j)];
    }
  }
  for (int i = 0; i + span <= n && !region.contains_square; ++i) {
    for (int j = 0; j + span <= n; ++j) {
      const int sum = prefix[pre(i + span, j + span)] - prefix[pre(i, j + span)] - prefix[pre(i + span, j)] +
                      prefix[pre(i, j)];
      if (sum == span * span) {
        region.contains_square = true;
        region.square_x = table.rows[at(i, j)][xc];
        region.square_y = table.rows[at(i, j)][yc];
        break;
      }
    }
  }
  return region;
}

}  // namespace rislink::harness
