#pragma once

#include <optional>

#include "rislink/geometry.hpp"

namespace rislink {

/// Normalized power pattern of a reflective element: cos^k(theta) on the front
/// half-space, zero behind the panel.
template <typename Scalar>
Scalar radiation_pattern(Scalar theta, Scalar k) {
  using std::cos;
  using std::pow;
  if (!(theta >= Scalar(0) && theta <= kPi<Scalar>)) {
    throw Error(ErrorKind::DomainError, "elevation angle outside [0, pi]");
  }
  if (theta > kPi<Scalar> / 2) return Scalar(0);
  const Scalar c = cos(theta);
  if (c <= Scalar(0)) return k == Scalar(0) ? Scalar(1) : Scalar(0);
  return pow(c, k);
}

/// Per-element cascade amplitude constant delta_TIR (amplitude at unit distances).
template <typename Scalar>
Scalar tir_delta(Scalar tx_gain, Scalar rx_gain, Scalar ris_gain, Scalar dx, Scalar dy,
                 Scalar wavelength, Scalar pattern_t, Scalar pattern_r, Scalar reflection) {
  using std::sqrt;
  const Scalar pi = kPi<Scalar>;
  return sqrt(tx_gain * rx_gain * ris_gain * dx * dy * wavelength * wavelength * pattern_t *
              pattern_r * reflection * reflection / (Scalar(64) * pi * pi * pi));
}

/// Friis amplitude of the direct link.
template <typename Scalar>
Scalar direct_amplitude(Scalar tx_gain, Scalar rx_gain, Scalar wavelength, Scalar distance) {
  using std::sqrt;
  return sqrt(tx_gain * rx_gain * wavelength * wavelength) / (Scalar(4) * kPi<Scalar>) / distance;
}

struct Scene {
  TransmitterArray tx;
  RisPanel ris;
  Receiver rx;
  double wavelength = 0.0;
  bool direct_link = false;

  void validate() const;
};

struct AmplitudeGain {
  double delta = 0.0;  // delta_TIR
  double a_tir = 0.0;  // delta_TIR / (d_TI d_IR)
};

/// Throws ShadowedPanel when T or R sits outside the element pattern support.
AmplitudeGain amplitude_gain_tir(const LinkAngles& angles, const Scene& scene);

/// Channels in the "conjugate-transposed" orientation, so that the received
/// amplitude is ir^T diag(theta) ti v + tr^T v without further conjugation.
///   ti : L x N   (H_TI^H)
///   ir : L       (h_IR^H)
///   tr : N       (h_TR^H), present only with a direct link
struct ChannelSet {
  ComplexMatrix ti;
  ComplexVector ir;
  std::optional<ComplexVector> tr;
  double wavelength = 0.0;

  Eigen::Index ris_size() const { return ti.rows(); }
  Eigen::Index antennas() const { return ti.cols(); }
  /// Cascade H_TIR^H[q, p] = ir[q] * ti[q, p].
  ComplexMatrix cascade() const { return ir.asDiagonal() * ti; }
  void validate() const;
};

/// Rank-one factors of the far-field channels.
struct FarFieldFactors {
  double a_tir = 0.0;
  ComplexVector a_vec;  // L, transmitter-side RIS steering
  ComplexVector b_vec;  // N, RIS-side array steering
  ComplexVector c_vec;  // L, receiver-side RIS steering
  ComplexVector d_vec;  // L, c o a
  Complex ti_phase{1.0, 0.0};  // e^{j 2 pi d_TI / lambda}
  Complex ir_phase{1.0, 0.0};  // e^{j 2 pi d_IR / lambda}

  /// a_TIR e^{j 2pi d_TI/lambda} a b^T (with a_IR = 1).
  ComplexMatrix reassemble_ti() const { return a_tir * ti_phase * a_vec * b_vec.transpose(); }
};

enum class FarFieldMode { Warn, Strict };

struct FarFieldChannel {
  ChannelSet channels;
  FarFieldFactors factors;
  LinkAngles angles;
  FarFieldReport check;
  double a_tr = 0.0;  // direct-link amplitude, 0 without a direct link
};

/// Channels under the far-field amplitude and phase approximations.
/// Strict mode throws FarFieldViolation when the far-field conditions fail at
/// `margin`; warn mode reports the failure in `check`.
FarFieldChannel farfield_channel(const Scene& scene, FarFieldMode mode = FarFieldMode::Warn,
                                 double margin = 1.0);

/// Element-by-element channels using exact antenna-element distances.
/// Pattern angles are taken at the panel center.
ChannelSet exact_channel(const Scene& scene);

enum class DirectModel { Exact, FarField };

/// Direct T -> R channel with the common Friis amplitude. Exact mode uses
/// per-antenna distances for the phase, far-field mode the linear offsets.
ComplexVector direct_channel(const TransmitterArray& tx, const Receiver& rx, double wavelength,
                             DirectModel model = DirectModel::Exact);

/// Effective MISO row ir^T diag(theta) ti + tr^T.
ComplexVector effective_channel(const ChannelSet& channels, const ComplexVector& theta);

/// |ir^T diag(theta) ti v + tr^T v|^2. With `power_budget`, rejects ||v||^2
/// above the budget; always rejects non-unit-modulus theta.
double received_power(const ChannelSet& channels, const ComplexVector& theta,
                      const ComplexVector& v, std::optional<double> power_budget = std::nullopt);

}  // namespace rislink
