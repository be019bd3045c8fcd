#pragma once

#include <cstdint>

#include "rislink/em_model.hpp"

namespace rislink {

enum class Method { ClosedForm, ClosedFormTwoPath, SvdProjected, Mrt };

const char* to_string(Method method);

struct Solution {
  ComplexVector v;      // beamformer, ||v||^2 <= P_t
  ComplexVector theta;  // unit-modulus phase shifts
  double predicted_power = 0.0;
  Method method = Method::Mrt;
};

/// Maximum-ratio transmission against an effective row h (received = h^T v):
/// v = sqrt(P_t) conj(h) / ||h||.
ComplexVector mrt_beamforming(const ComplexVector& effective_channel, double transmit_power);

/// Optimal phase angles phi*_q for the RIS-only far-field link.
Eigen::VectorXd closed_form_phase_angles(const LinkAngles& angles, const RisPanel& ris,
                                         double wavelength);

/// theta*_q = e^{j phi*_q}; equal to conj(d_vec) of the far-field factors.
ComplexVector closed_form_phases(const LinkAngles& angles, const RisPanel& ris, double wavelength);

/// v_p = sqrt(P_t / N) e^{-j 2pi/lambda * path_offset_p}, the conjugate of b_vec.
ComplexVector closed_form_beamforming(const LinkAngles& angles, const TransmitterArray& tx,
                                      double wavelength, double transmit_power);

/// N L^2 a_TIR^2 P_t.
inline double closed_form_power(double a_tir, int antennas, int elements, double transmit_power) {
  return antennas * static_cast<double>(elements) * elements * a_tir * a_tir * transmit_power;
}

/// sin(x) / x with sinc(0) = 1.
template <typename Scalar>
Scalar sinc(Scalar x) {
  using std::abs;
  using std::sin;
  if (abs(x) < Scalar(1e-8)) return Scalar(1) - x * x / Scalar(6);
  return sin(x) / x;
}

/// Coherence factor between the RIS path and the direct path of a ULA:
/// O = sinc(N u) / sinc(u), u = pi dT (cos mu_TI - cos mu_TR) / lambda.
/// Equals (1/N) sum_p cos(K_p); the direct sum is used where sin(u) vanishes.
template <typename Scalar>
Scalar two_path_o(int antennas, Scalar spacing, Scalar mu_ti, Scalar mu_tr, Scalar wavelength) {
  using std::abs;
  using std::cos;
  using std::sin;
  if (antennas < 1) throw Error(ErrorKind::InvalidArgument, "need at least one antenna");
  const Scalar u = kPi<Scalar> * spacing * (cos(mu_ti) - cos(mu_tr)) / wavelength;
  if (abs(sin(u)) > Scalar(1e-6) || abs(u) < Scalar(1e-9)) {
    return sinc(Scalar(antennas) * u) / sinc(u);
  }
  Scalar sum(0);
  for (int p = 1; p <= antennas; ++p) {
    sum += cos(Scalar(2) * u * (Scalar(p) - Scalar(antennas + 1) / Scalar(2)));
  }
  return sum / Scalar(antennas);
}

struct TwoPathTerms {
  double o = 1.0;
  /// pi/2 (sign(O) - 1) - 2pi (d_TI + d_IR - d_TR) / lambda.
  double phase_offset = 0.0;
  /// O == 0: sign taken as +1, the cross term vanishes either way.
  bool ambiguous_sign = false;
};

/// O and the common phase offset for the scene. A ULA uses the sinc ratio; a
/// UPA uses the direct coherent sum of its path offsets.
TwoPathTerms two_path_terms(const LinkAngles& angles, const TransmitterArray& tx, double wavelength);

struct TwoPathPhases {
  ComplexVector theta;
  TwoPathTerms terms;
};

/// Closed-form phases with a direct link: the RIS-only phases plus the common offset.
TwoPathPhases closed_form_phases_two_path(const LinkAngles& angles, const RisPanel& ris,
                                          const TransmitterArray& tx, double wavelength);

/// N L^2 a_TIR^2 P_t + N a_TR^2 P_t + 2 N L a_TR a_TIR |O| P_t.
double two_path_power_closed_form(double a_tir, double a_tr, double o, int antennas, int elements,
                                  double transmit_power);

/// MRT against the effective channel of fixed phases.
Solution mrt_solution(const ChannelSet& channels, const ComplexVector& theta, double transmit_power);

/// Closed-form solution for a scene (two-path variant when the scene has a
/// direct link). The beamformer is MRT against the far-field effective channel,
/// which reduces to the closed-form v for the RIS-only link.
Solution closed_form_solution(const Scene& scene, double transmit_power);

struct PowerIterationOptions {
  double tolerance = 1e-12;  // relative change of the Rayleigh quotient
  int max_iterations = 10000;
  std::uint64_t restart_seed = 0x5eed;
};

struct LeadingSingular {
  ComplexVector left;   // u1, largest-magnitude entry real-positive
  ComplexVector right;  // v1
  double sigma = 0.0;
  int iterations = 0;
  double residual = 0.0;  // ||G v1 - sigma^2 v1|| / sigma^2
};

/// Leading singular pair by power iteration on the Gram matrix A^H A.
LeadingSingular leading_singular_pair(const ComplexMatrix& a, const PowerIterationOptions& options = {});

/// Phase projection of the leading left singular vector of the cascade,
/// followed by MRT. With a direct link the cascade is augmented by the direct
/// row and the projected phases are referenced to it.
Solution svd_solution(const ChannelSet& channels, double transmit_power,
                      const PowerIterationOptions& options = {});

/// L sigma_max^2(H_TIR) P_t, or (L + 1) sigma_max^2 of the augmented cascade
/// with a direct link.
double power_upper_bound(const ChannelSet& channels, double transmit_power);

enum class AntiDecayMode { FixArea, FixElement };

struct RisGridDesign {
  int rows = 0;
  int cols = 0;
  double element_dx = 0.0;
  double element_dy = 0.0;
  double achieved_area = 0.0;
  double target_area = 0.0;
};

/// Scales the panel with the wavelength so the RIS-link power stays constant.
///  FixArea:    ratio = element size / lambda, reference = total panel area (m^2).
///  FixElement: ratio = element count * lambda (m), reference = element side (m).
/// Grids are square and rounded down; the achieved area is reported.
RisGridDesign anti_decay_design(double wavelength, AntiDecayMode mode, double ratio, double reference);

}  // namespace rislink
