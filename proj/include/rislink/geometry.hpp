#pragma once

#include <array>
#include <variant>
#include <vector>

#include "rislink/core.hpp"

namespace rislink {

/// Uniform linear array. Antenna p (1-based) sits at
/// center + ((N+1)/2 - p) * spacing * axis.
struct UlaLayout {
  int count = 1;
  double spacing = 0.0;
  Vec3 axis = Vec3::UnitX();
};

/// Uniform planar array with `cols` antennas along axis_x and `rows` along axis_y.
struct UpaLayout {
  int rows = 1;
  int cols = 1;
  double spacing_x = 0.0;
  double spacing_y = 0.0;
  Vec3 axis_x = Vec3::UnitX();
  Vec3 axis_y = Vec3::UnitY();
};

struct TransmitterArray {
  Vec3 center = Vec3::Zero();
  std::variant<UlaLayout, UpaLayout> layout = UlaLayout{};
  double element_gain = 1.0;  // G_t, linear

  int size() const;
  bool is_ula() const { return std::holds_alternative<UlaLayout>(layout); }
  /// Axis whose cosine enters the ULA phase progression (axis_x for a UPA).
  Vec3 primary_axis() const;
  /// Length scale used by the transmit-side far-field condition.
  double aperture_scale() const;
  void validate() const;
};

TransmitterArray make_ula(const Vec3& center, int count, double spacing, const Vec3& axis,
                          double element_gain = 1.0);
TransmitterArray make_upa(const Vec3& center, int rows, int cols, double spacing_x,
                          double spacing_y, const Vec3& axis_x, const Vec3& axis_y,
                          double element_gain = 1.0);

/// Orthonormal panel frame. The reflecting side faces +normal.
struct PanelFrame {
  Vec3 normal = Vec3::UnitZ();
  Vec3 x_axis = Vec3::UnitX();
  Vec3 y_axis = Vec3::UnitY();
};

/// Builds a right-handed frame from a normal and a hint for the in-plane x axis.
PanelFrame frame_from_normal(const Vec3& normal, const Vec3& x_hint);

/// Orientation that mirrors T onto R: the normal bisects the angle TIR and
/// x_axis lies in the T-I-R plane pointing toward R (so phi_r = 0, phi_t = pi).
PanelFrame specular_frame(const Vec3& transmitter, const Vec3& ris_center, const Vec3& receiver);

struct RisPanel {
  Vec3 center = Vec3::Zero();
  int rows = 1;  // N_I
  int cols = 1;  // M_I
  double element_dx = 0.0;
  double element_dy = 0.0;
  PanelFrame frame{};
  double reflection_coeff = 1.0;  // Gamma
  double pattern_exponent = 0.0;  // k
  double element_gain = 1.0;      // G, linear

  int size() const { return rows * cols; }
  double element_diagonal() const { return std::hypot(element_dx, element_dy); }
  void validate() const;
};

struct Receiver {
  Vec3 position = Vec3::Zero();
  double gain = 1.0;  // G_r, linear
};

/// 1-based grid coordinates of an element: m is the column, n the row.
struct GridIndex {
  int m = 1;
  int n = 1;
};

/// Row-major numbering: q = (n - 1) * cols + (m - 1), zero-based q.
GridIndex element_index(const RisPanel& ris, int q);

/// Offset of element q from the panel center expressed in panel (x, y) coordinates.
Eigen::Vector2d element_offset(const RisPanel& ris, int q);

std::vector<Vec3> antenna_offsets(const TransmitterArray& tx);
std::vector<Vec3> antenna_positions(const TransmitterArray& tx);
std::vector<Vec3> element_positions(const RisPanel& ris);

/// Far-field path-length offsets of each antenna toward a unit direction leaving
/// the array: -offset_p . direction. For a ULA this is ((N+1)/2 - p) dT cos(mu).
Eigen::VectorXd array_path_offsets(const TransmitterArray& tx, const Vec3& direction);

/// Distances and angles of a T-I-R link.
///
/// theta_t/phi_t (theta_r/phi_r) are the elevation and azimuth of r_T - r_I
/// (r_R - r_I) in the panel frame, phi in [0, 2pi) counterclockwise from x_axis.
/// mu_ti (mu_tr) is the angle between the primary array axis and r_T - r_I
/// (r_T - r_R), so that cos(mu) multiplies the antenna offsets directly.
/// theta_0 is the angle TIR from the law of cosines.
struct LinkAngles {
  double d_ti = 0.0;
  double d_ir = 0.0;
  double d_tr = 0.0;
  double theta_t = 0.0;
  double phi_t = 0.0;
  double theta_r = 0.0;
  double phi_r = 0.0;
  double mu_ti = 0.0;
  double mu_tr = 0.0;
  double theta_0 = 0.0;
  Vec3 dir_ti = Vec3::UnitX();  // unit T -> I
  Vec3 dir_tr = Vec3::UnitX();  // unit T -> R
};

LinkAngles link_angles(const TransmitterArray& tx, const RisPanel& ris, const Vec3& rx_position);

/// Law-of-cosines angle opposite `opposite`, clamped to [0, pi].
double triangle_angle(double adjacent_a, double adjacent_b, double opposite);

struct FarFieldReport {
  bool ok = false;
  /// d_TI / (N dT), d_TI / (L sqrt(dx^2 + dy^2)), d_IR / (L sqrt(dx^2 + dy^2)).
  std::array<double, 3> ratios{};
};

FarFieldReport far_field_check(const TransmitterArray& tx, const RisPanel& ris,
                               const Vec3& rx_position, double margin = 1.0);

}  // namespace rislink
