#include "rislink/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rislink {

namespace {

constexpr double kTriangleTol = 1e-9;
constexpr double kGolden = 0.6180339887498949;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Curve {
  std::function<Point2(double)> at;  // t in [0, 1]
  int samples = 0;
};

struct Candidate {
  Point2 p = Point2::Zero();
  double value = kNegInf;
  int curve = -1;  // -1 for grid points
  double t = 0.0;
};

bool better(double value, const Point2& p, double best_value, const Point2& best) {
  if (value != best_value) return value > best_value;
  if (p.x() != best.x()) return p.x() < best.x();
  return p.y() < best.y();
}

double segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

bool inside_polygon(const Polygon& poly, const Point2& p, double tol) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if (segment_distance(p, a, b) <= tol) return true;
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

struct Box2 {
  Point2 lo;
  Point2 hi;
};

Box2 bounding_box(const std::vector<Polygon>& polys) {
  Box2 box{Point2::Constant(std::numeric_limits<double>::infinity()),
           Point2::Constant(-std::numeric_limits<double>::infinity())};
  for (const auto& poly : polys) {
    for (const auto& v : poly) {
      box.lo = box.lo.cwiseMin(v);
      box.hi = box.hi.cwiseMax(v);
    }
  }
  return box;
}

// Liang-Barsky clip of point + t dir, t in [t0, t1], against the box.
std::optional<std::pair<double, double>> clip_line(const PlaneLine& line, double t0, double t1,
                                                   const Box2& box) {
  for (int axis = 0; axis < 2; ++axis) {
    const double p = line.point(axis);
    const double d = line.direction(axis);
    if (std::abs(d) < 1e-15) {
      if (p < box.lo(axis) || p > box.hi(axis)) return std::nullopt;
      continue;
    }
    double a = (box.lo(axis) - p) / d;
    double b = (box.hi(axis) - p) / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (t0 > t1) return std::nullopt;
  return std::make_pair(t0, t1);
}

Vec3 any_perpendicular(const Vec3& n) {
  const Vec3 trial = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (trial - trial.dot(n) * n).normalized();
}

}  // namespace

OrientationOptimum optimal_orientation(double d_ti, double d_ir, double d_tr, double k) {
  if (!(d_ti > 0.0) || !(d_ir > 0.0) || !(d_tr >= 0.0)) {
    throw Error(ErrorKind::DegenerateTriangle, "distances must be positive");
  }
  if (!(k >= 0.0)) throw Error(ErrorKind::InvalidArgument, "pattern exponent must be >= 0");
  const double longest = std::max({d_ti, d_ir, d_tr});
  const double sum = d_ti + d_ir + d_tr;
  if (2.0 * longest > sum * (1.0 + kTriangleTol)) {
    throw Error(ErrorKind::DegenerateTriangle, "distances violate the triangle inequality");
  }
  OrientationOptimum o;
  const double theta_0 = triangle_angle(d_ti, d_ir, d_tr);
  o.theta_t = o.theta_r = theta_0 / 2.0;
  o.pattern_factor = specular_pattern_factor(d_ti, d_ir, d_tr, k);
  return o;
}

bool in_region(RegionKind kind, const Vec3& tx, const Vec3& rx, const Vec3& point) {
  const double d_tr = (rx - tx).norm();
  const bool near_t = (point - tx).norm() <= d_tr;
  if (kind == RegionKind::D1) return near_t;
  return near_t && (point - rx).norm() <= d_tr;
}

bool PlaneScene::feasible_at(const Point2& p) const {
  const double tol = 1e-9 * std::max(1.0, p.norm());
  return std::any_of(feasible.begin(), feasible.end(),
                     [&](const Polygon& poly) { return inside_polygon(poly, p, tol); });
}

void PlaneScene::validate() const {
  if (!origin.allFinite() || !tx.allFinite() || !rx.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "plane scene has non-finite points");
  }
  if (std::abs(axis_u.norm() - 1.0) > 1e-12 || std::abs(axis_v.norm() - 1.0) > 1e-12 ||
      std::abs(axis_u.dot(axis_v)) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "plane axes must be orthonormal");
  }
  for (const auto& poly : feasible) {
    if (poly.size() < 3) throw Error(ErrorKind::InvalidArgument, "polygon needs at least 3 vertices");
  }
}

PlaneScene make_plane_scene(double h1, double h2, double tr_projection, std::vector<Polygon> feasible) {
  if (!(h1 >= 0.0) || !(h2 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "heights must be >= 0");
  if (!(tr_projection >= 0.0)) throw Error(ErrorKind::InvalidArgument, "T'R' distance must be >= 0");
  PlaneScene s;
  s.tx = Vec3(0.0, 0.0, h1);
  s.rx = Vec3(tr_projection, 0.0, h2);
  s.feasible = std::move(feasible);
  return s;
}

PlaneScene make_slice(const Vec3& tx, const Vec3& rx, const Vec3& point, const Vec3& normal,
                      const std::vector<std::vector<Vec3>>& world_polygons) {
  if (!(normal.norm() > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero plane normal");
  const Vec3 n = normal.normalized();
  const Vec3 t_proj = tx - (tx - point).dot(n) * n;
  const Vec3 r_proj = rx - (rx - point).dot(n) * n;
  PlaneScene s;
  s.origin = t_proj;
  const Vec3 along = r_proj - t_proj;
  s.axis_u = along.norm() > 1e-12 ? along.normalized() : any_perpendicular(n);
  s.axis_v = n.cross(s.axis_u).normalized();
  s.tx = tx;
  s.rx = rx;
  for (const auto& wp : world_polygons) {
    Polygon poly;
    poly.reserve(wp.size());
    for (const auto& v : wp) poly.push_back(s.to_plane(v));
    s.feasible.push_back(std::move(poly));
  }
  return s;
}

Polygon rectangle(double x_min, double y_min, double x_max, double y_max) {
  return {{x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}};
}

PositionObjective f_object_objective(const Vec3& tx, const Vec3& rx, double k) {
  PositionObjective obj;
  const PlacementObjective f{(rx - tx).norm(), k, 1.0};
  obj.evaluate = [tx, rx, f](const Vec3& p) { return f((p - tx).norm(), (p - rx).norm()); };
  obj.pattern_exponent = k;
  obj.region = RegionKind::D;
  return obj;
}

Scene place_ris(const Scene& base, const Vec3& center) {
  Scene s = base;
  s.ris.center = center;
  s.ris.frame = specular_frame(base.tx.center, center, base.rx.position);
  return s;
}

double optimal_power_at(const Scene& base, const Vec3& center, double transmit_power) {
  const Scene s = place_ris(base, center);
  const LinkAngles ang = link_angles(s.tx, s.ris, s.rx.position);
  const double a_tir = amplitude_gain_tir(ang, s).a_tir;
  const int n = s.tx.size();
  const int l = s.ris.size();
  if (!s.direct_link) return closed_form_power(a_tir, n, l, transmit_power);
  const double a_tr = direct_amplitude(s.tx.element_gain, s.rx.gain, s.wavelength, ang.d_tr);
  const TwoPathTerms terms = two_path_terms(ang, s.tx, s.wavelength);
  return two_path_power_closed_form(a_tir, a_tr, terms.o, n, l, transmit_power);
}

PositionObjective power_objective(const Scene& base, double transmit_power) {
  PositionObjective obj;
  obj.evaluate = [base, transmit_power](const Vec3& p) { return optimal_power_at(base, p, transmit_power); };
  obj.pattern_exponent = base.ris.pattern_exponent;
  obj.region = base.direct_link ? RegionKind::D1 : RegionKind::D;
  return obj;
}

PlaneSearchResult position_search_plane(const PlaneScene& scene, const PositionObjective& objective,
                                        const SearchOptions& options) {
  scene.validate();
  if (scene.feasible.empty()) throw Error(ErrorKind::EmptyFeasible, "no feasible polygons");
  if (options.line_points < 2 || options.boundary_points < 3 || options.region_grid < 2) {
    throw Error(ErrorKind::InvalidArgument, "search discretization too coarse");
  }
  const double k = objective.pattern_exponent;
  const bool region_applies = k > 0.0;
  const Box2 box = bounding_box(scene.feasible);

  const auto inside_region = [&](const Point2& p) {
    return in_region(objective.region, scene.tx, scene.rx, scene.to_world(p));
  };
  // Strictly inside keeps the boundary of an excluded region admissible.
  const auto strictly_inside_region = [&](const Point2& p) {
    const Vec3 w = scene.to_world(p);
    const double d_tr = scene.d_tr() * (1.0 - 1e-12);
    const bool near_t = (w - scene.tx).norm() < d_tr;
    if (objective.region == RegionKind::D1) return near_t;
    return near_t && (w - scene.rx).norm() < d_tr;
  };
  const auto admissible = [&](const Point2& p) {
    if (!scene.feasible_at(p)) return false;
    return !(region_applies && options.exclude_region && strictly_inside_region(p));
  };
  const auto value_at = [&](const Point2& p) {
    return admissible(p) ? objective.evaluate(scene.to_world(p)) : kNegInf;
  };

  std::vector<Curve> curves;
  std::vector<std::string> parts;

  const auto add_line = [&](const PlaneLine& line, double t0, double t1, int samples) {
    const auto range = clip_line(line, t0, t1, box);
    if (!range) return false;
    const auto [a, b] = *range;
    curves.push_back({[line, a = a, b = b](double t) { return Point2(line.point + (a + t * (b - a)) * line.direction); },
                      a == b ? 1 : samples});
    return true;
  };

  const double tr = scene.tr_projection();
  const PlaneLine line_l{Point2::Zero(), Point2::UnitX()};
  if (tr <= 1e-12) {
    curves.push_back({[](double) { return Point2(Point2::Zero()); }, 1});
    parts.push_back("point T'");
  } else if (k == 0.0) {
    if (add_line(line_l, 0.0, tr, options.line_points)) parts.push_back("segment T'R'");
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    if (add_line(line_l, -inf, inf, options.line_points)) parts.push_back("line l");
  }

  for (const auto& poly : scene.feasible) {
    double perimeter = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) perimeter += (poly[(i + 1) % poly.size()] - poly[i]).norm();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2 a = poly[i];
      const Point2 b = poly[(i + 1) % poly.size()];
      const double share = perimeter > 0.0 ? (b - a).norm() / perimeter : 1.0 / poly.size();
      const int samples = std::max(2, static_cast<int>(std::ceil(share * options.boundary_points)) + 1);
      curves.push_back({[a, b](double t) { return Point2(a + t * (b - a)); }, samples});
    }
  }
  parts.push_back("boundary of " + std::to_string(scene.feasible.size()) + " polygon(s)");

  for (const auto& extra : options.extra_lines) {
    const double inf = std::numeric_limits<double>::infinity();
    if (add_line(extra, -inf, inf, options.line_points)) parts.push_back("extra line");
  }

  std::vector<Candidate> grid;
  PlaneSearchResult result;
  if (region_applies) {
    const double d_tr = scene.d_tr();
    if (options.exclude_region) {
      // The excluded region's boundary arcs become part of the feasible boundary.
      const std::vector<std::pair<Vec3, bool>> spheres{{scene.tx, true},
                                                       {scene.rx, objective.region == RegionKind::D}};
      for (const auto& [center, used] : spheres) {
        if (!used) continue;
        const double h = std::abs((center - scene.origin).dot(scene.normal()));
        if (h > d_tr) continue;
        const Point2 c = scene.to_plane(center);
        const double radius = std::sqrt(d_tr * d_tr - h * h);
        curves.push_back({[c, radius](double t) {
                            const double a = 2.0 * kPi<double> * t;
                            return Point2(c + radius * Point2(std::cos(a), std::sin(a)));
                          },
                          options.boundary_points});
      }
      parts.push_back("region boundary");
    } else {
      const int g = options.region_grid;
      for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
          const Point2 p(box.lo.x() + (box.hi.x() - box.lo.x()) * i / (g - 1),
                         box.lo.y() + (box.hi.y() - box.lo.y()) * j / (g - 1));
          if (scene.feasible_at(p) && inside_region(p)) grid.push_back({p, kNegInf, -1, 0.0});
        }
      }
      if (!grid.empty()) {
        result.region_fallback = true;
        parts.push_back("region grid");
      }
    }
  }

  Candidate best;
  bool found = false;
  const auto consider = [&](Candidate c) {
    if (c.value == kNegInf) return;
    if (!found || better(c.value, c.p, best.value, best.p)) {
      best = c;
      found = true;
    }
  };
  int count = 0;
  for (int ci = 0; ci < static_cast<int>(curves.size()); ++ci) {
    const Curve& curve = curves[ci];
    for (int s = 0; s < curve.samples; ++s) {
      const double t = curve.samples == 1 ? 0.0 : static_cast<double>(s) / (curve.samples - 1);
      const Point2 p = curve.at(t);
      ++count;
      consider({p, value_at(p), ci, t});
    }
  }
  for (auto& c : grid) {
    ++count;
    c.value = objective.evaluate(scene.to_world(c.p));
    consider(c);
  }
  if (!found) throw Error(ErrorKind::EmptyFeasible, "no admissible candidate in the search set");

  if (best.curve >= 0 && curves[best.curve].samples > 1) {
    const Curve& curve = curves[best.curve];
    const double step = 1.0 / (curve.samples - 1);
    double lo = std::max(0.0, best.t - step);
    double hi = std::min(1.0, best.t + step);
    const double meters_per_t = (curve.at(hi) - curve.at(lo)).norm() / (hi - lo);
    const auto g = [&](double t) { return value_at(curve.at(t)); };
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = g(x1);
    double f2 = g(x2);
    while ((hi - lo) * meters_per_t > options.golden_tolerance && hi - lo > 1e-15) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kGolden * (hi - lo);
        f2 = g(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kGolden * (hi - lo);
        f1 = g(x1);
      }
    }
    const double t = 0.5 * (lo + hi);
    const Point2 p = curve.at(t);
    const double v = g(t);
    if (v > best.value) best = {p, v, best.curve, t};
  }

  result.position = best.p;
  result.world = scene.to_world(best.p);
  result.value = best.value;
  result.in_region = region_applies && inside_region(best.p);
  result.candidates = count;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) result.search_set += " + ";
    result.search_set += parts[i];
  }
  return result;
}

PlaneSearchResult position_search_3d(const std::vector<PlaneScene>& slices,
                                     const PositionObjective& objective, const SearchOptions& options) {
  std::optional<PlaneSearchResult> best;
  for (const auto& slice : slices) {
    if (slice.feasible.empty()) continue;
    PlaneSearchResult r;
    try {
      r = position_search_plane(slice, objective, options);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::EmptyFeasible) continue;
      throw;
    }
    if (!best || r.value > best->value) best = r;
  }
  if (!best) throw Error(ErrorKind::EmptyFeasible, "every slice is empty");
  return *best;
}

std::vector<PlaneScene> slice_box(const Vec3& tx, const Vec3& rx, const Vec3& box_min,
                                  const Vec3& box_max, int axis, int count) {
  if (axis < 0 || axis > 2) throw Error(ErrorKind::InvalidArgument, "slice axis must be 0, 1 or 2");
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "need at least one slice");
  if ((box_max - box_min).minCoeff() < 0.0) throw Error(ErrorKind::InvalidArgument, "box corners out of order");
  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  std::vector<PlaneScene> slices;
  slices.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double c = count == 1 ? 0.5 * (box_min(axis) + box_max(axis))
                                : box_min(axis) + (box_max(axis) - box_min(axis)) * i / (count - 1);
    std::vector<Vec3> corners(4, Vec3::Zero());
    const double u[4] = {box_min(a1), box_max(a1), box_max(a1), box_min(a1)};
    const double v[4] = {box_min(a2), box_min(a2), box_max(a2), box_max(a2)};
    for (int j = 0; j < 4; ++j) {
      corners[j](axis) = c;
      corners[j](a1) = u[j];
      corners[j](a2) = v[j];
    }
    Vec3 point = Vec3::Zero();
    point(axis) = c;
    slices.push_back(make_slice(tx, rx, point, Vec3::Unit(axis), {corners}));
  }
  return slices;
}

std::vector<PlaneScene> slice_ball(const Vec3& tx, const Vec3& rx, const Vec3& center, double radius,
                                   int axis, int count, int sides) {
  if (axis < 0 || axis > 2) throw Error(ErrorKind::InvalidArgument, "slice axis must be 0, 1 or 2");
  if (count < 1 || sides < 3) throw Error(ErrorKind::InvalidArgument, "need slices and >= 3 sides");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be > 0");
  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  std::vector<PlaneScene> slices;
  slices.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double offset = -radius + 2.0 * radius * (i + 0.5) / count;
    const double r = std::sqrt(radius * radius - offset * offset);
    std::vector<Vec3> ring;
    ring.reserve(sides);
    for (int j = 0; j < sides; ++j) {
      const double a = 2.0 * kPi<double> * j / sides;
      Vec3 p = center;
      p(axis) += offset;
      p(a1) += r * std::cos(a);
      p(a2) += r * std::sin(a);
      ring.push_back(p);
    }
    Vec3 point = center;
    point(axis) += offset;
    slices.push_back(make_slice(tx, rx, point, Vec3::Unit(axis), {ring}));
  }
  return slices;
}

TwoPathAdjustment two_path_region_adjustment(const PlaneScene& scene, const Vec3& array_axis) {
  TwoPathAdjustment adj;
  const Vec3 m = array_axis.cross(scene.rx - scene.tx);
  if (m.norm() < 1e-12 * std::max(1.0, scene.d_tr())) return adj;
  const Vec3 mn = m.normalized();
  const double alpha = mn.dot(scene.axis_u);
  const double beta = mn.dot(scene.axis_v);
  const double norm2 = alpha * alpha + beta * beta;
  if (norm2 < 1e-24) return adj;
  const double c = mn.dot(scene.tx - scene.origin);
  PlaneLine line;
  line.point = c * Point2(alpha, beta) / norm2;
  line.direction = Point2(-beta, alpha).normalized();
  adj.extra_line = line;
  return adj;
}

QuasiconvexityReport quasiconvexity_report(double d_tr, double k, double d_fixed, FixedSide which,
                                           int points) {
  if (!(d_tr > 0.0) || !(d_fixed > 0.0)) throw Error(ErrorKind::InvalidArgument, "distances must be > 0");
  if (!(k >= 0.0)) throw Error(ErrorKind::InvalidArgument, "pattern exponent must be >= 0");
  if (points < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 scan points");
  QuasiconvexityReport r;
  r.points = points;
  r.x_min = std::max(std::abs(d_fixed - d_tr), 1e-9 * d_tr);
  r.x_max = d_fixed + d_tr;
  const double log_lo = std::log(r.x_min);
  const double log_hi = std::log(r.x_max);
  std::vector<double> f(points);
  for (int i = 0; i < points; ++i) {
    const double x = std::exp(log_lo + (log_hi - log_lo) * i / (points - 1));
    f[i] = which == FixedSide::Transmit ? f_object(d_fixed, x, d_tr, k) : f_object(x, d_fixed, d_tr, k);
  }
  r.strictly_decreasing = true;
  int previous = 0;
  for (int i = 1; i < points; ++i) {
    const double diff = f[i] - f[i - 1];
    if (!(diff < 0.0)) r.strictly_decreasing = false;
    const int sign = (diff > 0.0) - (diff < 0.0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) {
      ++r.sign_changes;
      if (previous > 0) ++r.interior_maxima;
      else ++r.interior_minima;
    }
    previous = sign;
  }
  return r;
}

}  // namespace rislink
