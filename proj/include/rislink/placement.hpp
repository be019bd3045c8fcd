#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rislink/solvers.hpp"

namespace rislink {

using Point2 = Eigen::Vector2d;
using Polygon = std::vector<Point2>;

/// Specular-reflection pattern factor ((d_TI^2 + d_IR^2 - d_TR^2) / (4 d_TI d_IR) + 1/2)^k.
/// The base is clamped to [0, 1] before exponentiation.
template <typename Scalar>
Scalar specular_pattern_factor(Scalar d_ti, Scalar d_ir, Scalar d_tr, Scalar k) {
  using std::pow;
  if (!(d_ti > Scalar(0)) || !(d_ir > Scalar(0))) {
    throw Error(ErrorKind::DomainError, "distances must be > 0");
  }
  if (k == Scalar(0)) return Scalar(1);
  Scalar base = (d_ti * d_ti + d_ir * d_ir - d_tr * d_tr) / (Scalar(4) * d_ti * d_ir) + Scalar(0.5);
  if (base < Scalar(0)) base = Scalar(0);
  if (base > Scalar(1)) base = Scalar(1);
  return pow(base, k);
}

/// Position-only factor of the received power under specular orientation:
/// pattern factor * d_TI^-2 * d_IR^-2.
template <typename Scalar>
Scalar f_object(Scalar d_ti, Scalar d_ir, Scalar d_tr, Scalar k) {
  return specular_pattern_factor(d_ti, d_ir, d_tr, k) / (d_ti * d_ti * d_ir * d_ir);
}

struct OrientationOptimum {
  double theta_t = 0.0;
  double theta_r = 0.0;
  double pattern_factor = 1.0;  // F* = cos^k(theta_t) cos^k(theta_r)
};

/// theta_t = theta_r = theta_0 / 2. Throws DegenerateTriangle when the three
/// distances violate the triangle inequality by more than 1e-9 relative.
OrientationOptimum optimal_orientation(double d_ti, double d_ir, double d_tr, double k);

/// Received power up to the constant N L^2 delta^2 / F*: constant_factor * f_object.
struct PlacementObjective {
  double d_tr = 0.0;
  double k = 0.0;
  double constant_factor = 1.0;

  double operator()(double d_ti, double d_ir) const {
    return constant_factor * f_object(d_ti, d_ir, d_tr, k);
  }
};

/// D = {d_TI <= d_TR} and {d_IR <= d_TR}; D1 = {d_TI <= d_TR} with a direct link.
enum class RegionKind { D, D1 };

bool in_region(RegionKind kind, const Vec3& tx, const Vec3& rx, const Vec3& point);

/// Plane S with T' (projection of T) at the origin and axis_u toward R'.
/// Plane coordinates (x, y) map to origin + x axis_u + y axis_v.
struct PlaneScene {
  Vec3 origin = Vec3::Zero();
  Vec3 axis_u = Vec3::UnitX();
  Vec3 axis_v = Vec3::UnitY();
  Vec3 tx = Vec3::UnitZ();
  Vec3 rx = Vec3::UnitZ();
  std::vector<Polygon> feasible;  // union of simple polygons in plane coordinates

  Vec3 normal() const { return axis_u.cross(axis_v); }
  Vec3 to_world(const Point2& p) const { return origin + p.x() * axis_u + p.y() * axis_v; }
  Point2 to_plane(const Vec3& p) const { return {(p - origin).dot(axis_u), (p - origin).dot(axis_v)}; }
  double h1() const { return std::abs((tx - origin).dot(normal())); }
  double h2() const { return std::abs((rx - origin).dot(normal())); }
  double d_tr() const { return (rx - tx).norm(); }
  /// Distance T'R' along axis_u.
  double tr_projection() const { return to_plane(rx).x(); }
  bool feasible_at(const Point2& p) const;
  void validate() const;
};

/// Canonical plane: T = (0, 0, h1), R = (tr_projection, 0, h2) above the x-y plane.
PlaneScene make_plane_scene(double h1, double h2, double tr_projection, std::vector<Polygon> feasible = {});

/// Plane through `point` with `normal`, T' at the origin and axis_u toward R'.
/// Polygons are given in world coordinates and are projected onto the plane.
PlaneScene make_slice(const Vec3& tx, const Vec3& rx, const Vec3& point, const Vec3& normal,
                      const std::vector<std::vector<Vec3>>& world_polygons);

Polygon rectangle(double x_min, double y_min, double x_max, double y_max);

struct PositionObjective {
  std::function<double(const Vec3&)> evaluate;
  double pattern_exponent = 0.0;
  RegionKind region = RegionKind::D;
};

/// f_object at world points for fixed T and R.
PositionObjective f_object_objective(const Vec3& tx, const Vec3& rx, double k);

/// RIS placed at `center` with specular orientation; everything else from `base`.
Scene place_ris(const Scene& base, const Vec3& center);

/// Closed-form optimal power (watts) with the RIS at `center` under specular
/// orientation, evaluated analytically (two-path form when base.direct_link).
double optimal_power_at(const Scene& base, const Vec3& center, double transmit_power);

/// optimal_power_at as a position objective; region D1 with a direct link.
PositionObjective power_objective(const Scene& base, double transmit_power);

/// Line point + t * direction in plane coordinates.
struct PlaneLine {
  Point2 point = Point2::Zero();
  Point2 direction = Point2::UnitX();
};

struct SearchOptions {
  int line_points = 2000;
  int boundary_points = 2000;  // per polygon
  double golden_tolerance = 1e-6;
  int region_grid = 200;  // per side, fallback grid inside region D
  bool exclude_region = false;
  std::vector<PlaneLine> extra_lines;
};

struct PlaneSearchResult {
  Point2 position = Point2::Zero();
  Vec3 world = Vec3::Zero();
  double value = 0.0;
  bool region_fallback = false;  // feasible set meets region D, grid used inside it
  bool in_region = false;        // optimum lies inside region D
  int candidates = 0;
  std::string search_set;
};

/// Candidate set: feasible part of line l (segment T'R' when k = 0), polygon
/// boundaries and extra lines, then golden-section refinement around the best
/// sample. With k > 0 and a feasible set meeting region D, a dense grid over the
/// intersection is added (or the region is cut out when exclude_region is set).
PlaneSearchResult position_search_plane(const PlaneScene& scene, const PositionObjective& objective,
                                        const SearchOptions& options = {});

/// Best of per-slice plane searches. Ties keep the earliest slice.
PlaneSearchResult position_search_3d(const std::vector<PlaneScene>& slices,
                                     const PositionObjective& objective,
                                     const SearchOptions& options = {});

/// Slices of an axis-aligned box perpendicular to coordinate `axis`.
std::vector<PlaneScene> slice_box(const Vec3& tx, const Vec3& rx, const Vec3& box_min,
                                  const Vec3& box_max, int axis, int count = 101);

/// Slices of a ball perpendicular to coordinate `axis`; cross sections are
/// regular polygons with `sides` vertices.
std::vector<PlaneScene> slice_ball(const Vec3& tx, const Vec3& rx, const Vec3& center, double radius,
                                   int axis, int count = 101, int sides = 720);

/// Extra search line for the direct-link case: trace on plane S of the plane
/// spanned by the ULA axis and T->R. Empty when the planes are parallel.
struct TwoPathAdjustment {
  RegionKind region = RegionKind::D1;
  std::optional<PlaneLine> extra_line;
};

TwoPathAdjustment two_path_region_adjustment(const PlaneScene& scene, const Vec3& array_axis);

enum class FixedSide { Transmit, Receive };

struct QuasiconvexityReport {
  double x_min = 0.0;
  double x_max = 0.0;
  int points = 0;
  int sign_changes = 0;
  int interior_maxima = 0;
  int interior_minima = 0;
  bool strictly_decreasing = false;
};

/// Scans f_object along the free distance with the other held at d_fixed over a
/// log grid on the feasible triangle range [|d_fixed - d_TR|, d_fixed + d_TR].
QuasiconvexityReport quasiconvexity_report(double d_tr, double k, double d_fixed, FixedSide which,
                                           int points = 10000);

}  // namespace rislink
