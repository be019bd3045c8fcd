#include "rislink/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rislink {

namespace {

constexpr double kFrameTol = 1e-12;

bool finite(const Vec3& v) { return v.allFinite(); }

bool unit(const Vec3& v) { return std::abs(v.norm() - 1.0) <= kFrameTol; }

double angle_between(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate near 0 and pi.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Vec3 any_perpendicular(const Vec3& n) {
  const Vec3 trial = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (trial - trial.dot(n) * n).normalized();
}

double wrap_two_pi(double phi) {
  double wrapped = std::fmod(phi, 2.0 * kPi<double>);
  if (wrapped < 0.0) wrapped += 2.0 * kPi<double>;
  if (wrapped >= 2.0 * kPi<double>) wrapped = 0.0;
  return wrapped;
}

}  // namespace

int TransmitterArray::size() const {
  return std::visit(
      [](const auto& l) -> int {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UlaLayout>) {
          return l.count;
        } else {
          return l.rows * l.cols;
        }
      },
      layout);
}

Vec3 TransmitterArray::primary_axis() const {
  if (const auto* ula = std::get_if<UlaLayout>(&layout)) return ula->axis;
  return std::get<UpaLayout>(layout).axis_x;
}

double TransmitterArray::aperture_scale() const {
  if (const auto* ula = std::get_if<UlaLayout>(&layout)) return ula->count * ula->spacing;
  const auto& upa = std::get<UpaLayout>(layout);
  return upa.rows * upa.cols * std::hypot(upa.spacing_x, upa.spacing_y);
}

void TransmitterArray::validate() const {
  if (!finite(center)) throw Error(ErrorKind::InvalidArgument, "array center is not finite");
  if (!(element_gain > 0.0)) throw Error(ErrorKind::InvalidArgument, "array gain must be > 0");
  if (const auto* ula = std::get_if<UlaLayout>(&layout)) {
    if (ula->count < 1) throw Error(ErrorKind::InvalidArgument, "ULA needs at least one antenna");
    if (!(ula->spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "ULA spacing must be > 0");
    if (!unit(ula->axis)) throw Error(ErrorKind::InvalidArgument, "ULA axis must be unit-norm");
    return;
  }
  const auto& upa = std::get<UpaLayout>(layout);
  if (upa.rows < 1 || upa.cols < 1) throw Error(ErrorKind::InvalidArgument, "UPA needs rows, cols >= 1");
  if (!(upa.spacing_x > 0.0) || !(upa.spacing_y > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "UPA spacings must be > 0");
  }
  if (!unit(upa.axis_x) || !unit(upa.axis_y)) {
    throw Error(ErrorKind::InvalidArgument, "UPA axes must be unit-norm");
  }
  if (std::abs(upa.axis_x.dot(upa.axis_y)) > kFrameTol) {
    throw Error(ErrorKind::InvalidArgument, "UPA axes must be orthogonal");
  }
}

TransmitterArray make_ula(const Vec3& center, int count, double spacing, const Vec3& axis,
                          double element_gain) {
  TransmitterArray tx{center, UlaLayout{count, spacing, axis}, element_gain};
  tx.validate();
  return tx;
}

TransmitterArray make_upa(const Vec3& center, int rows, int cols, double spacing_x,
                          double spacing_y, const Vec3& axis_x, const Vec3& axis_y,
                          double element_gain) {
  TransmitterArray tx{center, UpaLayout{rows, cols, spacing_x, spacing_y, axis_x, axis_y},
                      element_gain};
  tx.validate();
  return tx;
}

PanelFrame frame_from_normal(const Vec3& normal, const Vec3& x_hint) {
  if (!(normal.norm() > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero panel normal");
  PanelFrame f;
  f.normal = normal.normalized();
  Vec3 x = x_hint - x_hint.dot(f.normal) * f.normal;
  f.x_axis = x.norm() > 1e-12 ? x.normalized() : any_perpendicular(f.normal);
  f.y_axis = f.normal.cross(f.x_axis).normalized();
  return f;
}

PanelFrame specular_frame(const Vec3& transmitter, const Vec3& ris_center, const Vec3& receiver) {
  const Vec3 to_t = transmitter - ris_center;
  const Vec3 to_r = receiver - ris_center;
  if (to_t.norm() == 0.0 || to_r.norm() == 0.0) {
    throw Error(ErrorKind::DegenerateGeometry, "RIS coincides with an endpoint");
  }
  const Vec3 u_t = to_t.normalized();
  const Vec3 u_r = to_r.normalized();
  Vec3 bisector = u_t + u_r;
  if (bisector.norm() < 1e-12) {
    throw Error(ErrorKind::DegenerateGeometry, "T and R on opposite sides of the RIS (angle TIR = pi)");
  }
  bisector.normalize();
  return frame_from_normal(bisector, u_r);
}

void RisPanel::validate() const {
  if (!finite(center)) throw Error(ErrorKind::InvalidArgument, "panel center is not finite");
  if (rows < 1 || cols < 1) throw Error(ErrorKind::InvalidArgument, "panel needs rows, cols >= 1");
  if (!(element_dx > 0.0) || !(element_dy > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "element size must be > 0");
  }
  const auto& f = frame;
  if (!unit(f.normal) || !unit(f.x_axis) || !unit(f.y_axis) ||
      std::abs(f.normal.dot(f.x_axis)) > kFrameTol || std::abs(f.normal.dot(f.y_axis)) > kFrameTol ||
      std::abs(f.x_axis.dot(f.y_axis)) > kFrameTol) {
    throw Error(ErrorKind::InvalidArgument, "panel frame is not orthonormal");
  }
  if (!(reflection_coeff >= 0.0 && reflection_coeff <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "reflection coefficient must lie in [0, 1]");
  }
  if (!(pattern_exponent >= 0.0)) throw Error(ErrorKind::InvalidArgument, "pattern exponent must be >= 0");
  if (!(element_gain > 0.0)) throw Error(ErrorKind::InvalidArgument, "RIS gain must be > 0");
}

GridIndex element_index(const RisPanel& ris, int q) {
  return GridIndex{q % ris.cols + 1, q / ris.cols + 1};
}

Eigen::Vector2d element_offset(const RisPanel& ris, int q) {
  const GridIndex g = element_index(ris, q);
  return {(g.m - (ris.cols + 1) / 2.0) * ris.element_dx, (g.n - (ris.rows + 1) / 2.0) * ris.element_dy};
}

std::vector<Vec3> antenna_offsets(const TransmitterArray& tx) {
  std::vector<Vec3> offsets;
  offsets.reserve(tx.size());
  if (const auto* ula = std::get_if<UlaLayout>(&tx.layout)) {
    for (int p = 1; p <= ula->count; ++p) {
      offsets.push_back(((ula->count + 1) / 2.0 - p) * ula->spacing * ula->axis);
    }
    return offsets;
  }
  const auto& upa = std::get<UpaLayout>(tx.layout);
  for (int n = 1; n <= upa.rows; ++n) {
    for (int m = 1; m <= upa.cols; ++m) {
      offsets.push_back((m - (upa.cols + 1) / 2.0) * upa.spacing_x * upa.axis_x +
                        (n - (upa.rows + 1) / 2.0) * upa.spacing_y * upa.axis_y);
    }
  }
  return offsets;
}

std::vector<Vec3> antenna_positions(const TransmitterArray& tx) {
  auto positions = antenna_offsets(tx);
  for (auto& p : positions) p += tx.center;
  return positions;
}

std::vector<Vec3> element_positions(const RisPanel& ris) {
  std::vector<Vec3> positions;
  positions.reserve(ris.size());
  for (int q = 0; q < ris.size(); ++q) {
    const Eigen::Vector2d o = element_offset(ris, q);
    positions.push_back(ris.center + o.x() * ris.frame.x_axis + o.y() * ris.frame.y_axis);
  }
  return positions;
}

Eigen::VectorXd array_path_offsets(const TransmitterArray& tx, const Vec3& direction) {
  const auto offsets = antenna_offsets(tx);
  Eigen::VectorXd out(static_cast<Eigen::Index>(offsets.size()));
  for (std::size_t p = 0; p < offsets.size(); ++p) out(p) = -offsets[p].dot(direction);
  return out;
}

double triangle_angle(double adjacent_a, double adjacent_b, double opposite) {
  const double c = (adjacent_a * adjacent_a + adjacent_b * adjacent_b - opposite * opposite) /
                   (2.0 * adjacent_a * adjacent_b);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

LinkAngles link_angles(const TransmitterArray& tx, const RisPanel& ris, const Vec3& rx_position) {
  const Vec3& r_t = tx.center;
  const Vec3& r_i = ris.center;
  const Vec3& r_r = rx_position;
  LinkAngles a;
  a.d_ti = (r_i - r_t).norm();
  a.d_ir = (r_r - r_i).norm();
  a.d_tr = (r_r - r_t).norm();
  if (a.d_ti == 0.0 || a.d_ir == 0.0 || a.d_tr == 0.0) {
    throw Error(ErrorKind::DegenerateGeometry, "two of T, I, R coincide");
  }
  const auto& f = ris.frame;
  const Vec3 to_t = (r_t - r_i) / a.d_ti;
  const Vec3 to_r = (r_r - r_i) / a.d_ir;

  const auto elevation_azimuth = [&f](const Vec3& u, double& theta, double& phi) {
    theta = angle_between(f.normal, u);
    const double ux = u.dot(f.x_axis);
    const double uy = u.dot(f.y_axis);
    phi = (ux == 0.0 && uy == 0.0) ? 0.0 : wrap_two_pi(std::atan2(uy, ux));
  };
  elevation_azimuth(to_t, a.theta_t, a.phi_t);
  elevation_azimuth(to_r, a.theta_r, a.phi_r);

  const Vec3 axis = tx.primary_axis();
  a.mu_ti = angle_between(axis, r_t - r_i);
  a.mu_tr = angle_between(axis, r_t - r_r);
  a.theta_0 = triangle_angle(a.d_ti, a.d_ir, a.d_tr);
  a.dir_ti = -to_t;
  a.dir_tr = (r_r - r_t) / a.d_tr;
  return a;
}

FarFieldReport far_field_check(const TransmitterArray& tx, const RisPanel& ris,
                               const Vec3& rx_position, double margin) {
  if (!(margin >= 1.0)) throw Error(ErrorKind::InvalidArgument, "far-field margin must be >= 1");
  const double d_ti = (ris.center - tx.center).norm();
  const double d_ir = (rx_position - ris.center).norm();
  const double ris_scale = ris.size() * ris.element_diagonal();
  FarFieldReport r;
  r.ratios = {d_ti / tx.aperture_scale(), d_ti / ris_scale, d_ir / ris_scale};
  r.ok = std::all_of(r.ratios.begin(), r.ratios.end(), [margin](double x) { return x >= margin; });
  return r;
}

}  // namespace rislink
