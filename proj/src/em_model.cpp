#include "rislink/em_model.hpp"

#include <cmath>

namespace rislink {

namespace {

constexpr double kUnitModulusTol = 1e-9;
constexpr double kBudgetSlack = 1e-9;

double two_pi_over(double wavelength) { return 2.0 * kPi<double> / wavelength; }

}  // namespace

void Scene::validate() const {
  tx.validate();
  ris.validate();
  if (!rx.position.allFinite()) throw Error(ErrorKind::InvalidArgument, "receiver position is not finite");
  if (!(rx.gain > 0.0)) throw Error(ErrorKind::InvalidArgument, "receiver gain must be > 0");
  if (!(wavelength > 0.0)) throw Error(ErrorKind::InvalidArgument, "wavelength must be > 0");
}

void ChannelSet::validate() const {
  if (!(wavelength > 0.0)) throw Error(ErrorKind::InvalidArgument, "wavelength must be > 0");
  if (ir.size() != ti.rows()) throw Error(ErrorKind::DimensionMismatch, "ir length != ti rows");
  if (tr && tr->size() != ti.cols()) throw Error(ErrorKind::DimensionMismatch, "tr length != ti cols");
}

AmplitudeGain amplitude_gain_tir(const LinkAngles& angles, const Scene& scene) {
  const double k = scene.ris.pattern_exponent;
  const double f_t = radiation_pattern(angles.theta_t, k);
  const double f_r = radiation_pattern(angles.theta_r, k);
  if (f_t * f_r == 0.0) {
    throw Error(ErrorKind::ShadowedPanel, "transmitter or receiver lies behind the panel");
  }
  AmplitudeGain g;
  g.delta = tir_delta(scene.tx.element_gain, scene.rx.gain, scene.ris.element_gain,
                      scene.ris.element_dx, scene.ris.element_dy, scene.wavelength, f_t, f_r,
                      scene.ris.reflection_coeff);
  g.a_tir = g.delta / (angles.d_ti * angles.d_ir);
  return g;
}

FarFieldChannel farfield_channel(const Scene& scene, FarFieldMode mode, double margin) {
  scene.validate();
  FarFieldChannel out;
  out.check = far_field_check(scene.tx, scene.ris, scene.rx.position, margin);
  if (mode == FarFieldMode::Strict && !out.check.ok) {
    throw Error(ErrorKind::FarFieldViolation, "scene violates the far-field conditions");
  }
  const LinkAngles& ang = out.angles = link_angles(scene.tx, scene.ris, scene.rx.position);
  const AmplitudeGain gain = amplitude_gain_tir(ang, scene);
  const double k0 = two_pi_over(scene.wavelength);
  const int l = scene.ris.size();
  const int n = scene.tx.size();

  // Direction cosines of I->T and I->R projected on the panel axes.
  const double tx_x = std::sin(ang.theta_t) * std::cos(ang.phi_t);
  const double tx_y = std::sin(ang.theta_t) * std::sin(ang.phi_t);
  const double rx_x = std::sin(ang.theta_r) * std::cos(ang.phi_r);
  const double rx_y = std::sin(ang.theta_r) * std::sin(ang.phi_r);

  FarFieldFactors& f = out.factors;
  f.a_tir = gain.a_tir;
  f.a_vec.resize(l);
  f.c_vec.resize(l);
  for (int q = 0; q < l; ++q) {
    const Eigen::Vector2d o = element_offset(scene.ris, q);
    f.a_vec(q) = phasor(k0 * -(tx_x * o.x() + tx_y * o.y()));
    f.c_vec(q) = phasor(k0 * -(rx_x * o.x() + rx_y * o.y()));
  }
  f.d_vec = f.c_vec.cwiseProduct(f.a_vec);
  const Eigen::VectorXd tx_offsets = array_path_offsets(scene.tx, ang.dir_ti);
  f.b_vec.resize(n);
  for (int p = 0; p < n; ++p) f.b_vec(p) = phasor(k0 * tx_offsets(p));
  f.ti_phase = phasor(k0 * ang.d_ti);
  f.ir_phase = phasor(k0 * ang.d_ir);

  ChannelSet& ch = out.channels;
  ch.wavelength = scene.wavelength;
  ch.ti = f.reassemble_ti();
  ch.ir = f.ir_phase * f.c_vec;
  if (scene.direct_link) {
    ch.tr = direct_channel(scene.tx, scene.rx, scene.wavelength, DirectModel::FarField);
    out.a_tr = direct_amplitude(scene.tx.element_gain, scene.rx.gain, scene.wavelength, ang.d_tr);
  }
  return out;
}

ChannelSet exact_channel(const Scene& scene) {
  scene.validate();
  const LinkAngles ang = link_angles(scene.tx, scene.ris, scene.rx.position);
  const AmplitudeGain gain = amplitude_gain_tir(ang, scene);
  const double k0 = two_pi_over(scene.wavelength);
  const auto antennas = antenna_positions(scene.tx);
  const auto elements = element_positions(scene.ris);
  const int l = scene.ris.size();
  const int n = scene.tx.size();

  ChannelSet ch;
  ch.wavelength = scene.wavelength;
  ch.ti.resize(l, n);
  ch.ir.resize(l);
  // Split delta / (d_TI,pq d_IR,q) as (delta / (d_TI,pq d_IR)) * (d_IR / d_IR,q),
  // which tends to the far-field split (a_TIR, 1) entry by entry.
  for (int q = 0; q < l; ++q) {
    for (int p = 0; p < n; ++p) {
      const double d = (elements[q] - antennas[p]).norm();
      if (d == 0.0) throw Error(ErrorKind::DegenerateGeometry, "antenna coincides with an element");
      ch.ti(q, p) = gain.delta / (d * ang.d_ir) * phasor(k0 * d);
    }
    const double d = (scene.rx.position - elements[q]).norm();
    if (d == 0.0) throw Error(ErrorKind::DegenerateGeometry, "receiver coincides with an element");
    ch.ir(q) = ang.d_ir / d * phasor(k0 * d);
  }
  if (scene.direct_link) ch.tr = direct_channel(scene.tx, scene.rx, scene.wavelength, DirectModel::Exact);
  return ch;
}

ComplexVector direct_channel(const TransmitterArray& tx, const Receiver& rx, double wavelength,
                             DirectModel model) {
  tx.validate();
  const double d_tr = (rx.position - tx.center).norm();
  if (d_tr == 0.0) throw Error(ErrorKind::DegenerateGeometry, "transmitter coincides with receiver");
  const double amp = direct_amplitude(tx.element_gain, rx.gain, wavelength, d_tr);
  const double k0 = two_pi_over(wavelength);
  const int n = tx.size();
  ComplexVector h(n);
  if (model == DirectModel::FarField) {
    const Eigen::VectorXd offsets = array_path_offsets(tx, (rx.position - tx.center) / d_tr);
    for (int p = 0; p < n; ++p) h(p) = amp * phasor(k0 * (d_tr + offsets(p)));
    return h;
  }
  const auto antennas = antenna_positions(tx);
  for (int p = 0; p < n; ++p) {
    const double d = (rx.position - antennas[p]).norm();
    if (d == 0.0) throw Error(ErrorKind::DegenerateGeometry, "receiver coincides with an antenna");
    h(p) = amp * phasor(k0 * d);
  }
  return h;
}

ComplexVector effective_channel(const ChannelSet& channels, const ComplexVector& theta) {
  channels.validate();
  if (theta.size() != channels.ris_size()) {
    throw Error(ErrorKind::DimensionMismatch, "phase vector length != number of elements");
  }
  ComplexVector h = channels.ti.transpose() * channels.ir.cwiseProduct(theta);
  if (channels.tr) h += *channels.tr;
  return h;
}

double received_power(const ChannelSet& channels, const ComplexVector& theta,
                      const ComplexVector& v, std::optional<double> power_budget) {
  if (v.size() != channels.antennas()) {
    throw Error(ErrorKind::DimensionMismatch, "beamformer length != number of antennas");
  }
  for (Eigen::Index q = 0; q < theta.size(); ++q) {
    if (std::abs(std::abs(theta(q)) - 1.0) > kUnitModulusTol) {
      throw Error(ErrorKind::DomainError, "phase shifts must be unit-modulus");
    }
  }
  if (power_budget && v.squaredNorm() > *power_budget * (1.0 + kBudgetSlack)) {
    throw Error(ErrorKind::InvalidArgument, "beamformer exceeds the power budget");
  }
  const ComplexVector h = effective_channel(channels, theta);
  return std::norm(h.cwiseProduct(v).sum());
}

}  // namespace rislink
