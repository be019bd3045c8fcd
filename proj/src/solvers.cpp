#include "rislink/solvers.hpp"

#include <cmath>
#include <random>

namespace rislink {

const char* to_string(Method method) {
  switch (method) {
    case Method::ClosedForm: return "closed_form";
    case Method::ClosedFormTwoPath: return "closed_form_two_path";
    case Method::SvdProjected: return "svd_projected";
    case Method::Mrt: return "mrt";
  }
  return "unknown";
}

ComplexVector mrt_beamforming(const ComplexVector& effective_channel, double transmit_power) {
  const double norm = effective_channel.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::ZeroChannel, "effective channel is zero");
  if (!(transmit_power >= 0.0)) throw Error(ErrorKind::InvalidArgument, "transmit power must be >= 0");
  return std::sqrt(transmit_power) * effective_channel.conjugate() / norm;
}

Eigen::VectorXd closed_form_phase_angles(const LinkAngles& angles, const RisPanel& ris,
                                         double wavelength) {
  const double k0 = 2.0 * kPi<double> / wavelength;
  const double gx = std::sin(angles.theta_t) * std::cos(angles.phi_t) +
                    std::sin(angles.theta_r) * std::cos(angles.phi_r);
  const double gy = std::sin(angles.theta_t) * std::sin(angles.phi_t) +
                    std::sin(angles.theta_r) * std::sin(angles.phi_r);
  Eigen::VectorXd phi(ris.size());
  for (int q = 0; q < ris.size(); ++q) {
    const Eigen::Vector2d o = element_offset(ris, q);
    phi(q) = k0 * (gx * o.x() + gy * o.y());
  }
  return phi;
}

ComplexVector closed_form_phases(const LinkAngles& angles, const RisPanel& ris, double wavelength) {
  const Eigen::VectorXd phi = closed_form_phase_angles(angles, ris, wavelength);
  return phi.unaryExpr([](double x) { return phasor(x); });
}

ComplexVector closed_form_beamforming(const LinkAngles& angles, const TransmitterArray& tx,
                                      double wavelength, double transmit_power) {
  const double k0 = 2.0 * kPi<double> / wavelength;
  const Eigen::VectorXd offsets = array_path_offsets(tx, angles.dir_ti);
  const double scale = std::sqrt(transmit_power / tx.size());
  return offsets.unaryExpr([&](double d) { return scale * phasor(-k0 * d); });
}

TwoPathTerms two_path_terms(const LinkAngles& angles, const TransmitterArray& tx, double wavelength) {
  TwoPathTerms t;
  if (const auto* ula = std::get_if<UlaLayout>(&tx.layout)) {
    t.o = two_path_o(ula->count, ula->spacing, angles.mu_ti, angles.mu_tr, wavelength);
  } else {
    const double k0 = 2.0 * kPi<double> / wavelength;
    const Eigen::VectorXd diff =
        array_path_offsets(tx, angles.dir_ti) - array_path_offsets(tx, angles.dir_tr);
    t.o = (k0 * diff).array().cos().mean();
  }
  // Values this close to zero come from rounding of an exact null.
  t.ambiguous_sign = std::abs(t.o) < 1e-14;
  const double sign_term = (t.ambiguous_sign || t.o > 0.0) ? 0.0 : -kPi<double>;
  t.phase_offset =
      sign_term - 2.0 * kPi<double> * (angles.d_ti + angles.d_ir - angles.d_tr) / wavelength;
  return t;
}

TwoPathPhases closed_form_phases_two_path(const LinkAngles& angles, const RisPanel& ris,
                                          const TransmitterArray& tx, double wavelength) {
  TwoPathPhases out;
  out.terms = two_path_terms(angles, tx, wavelength);
  const Eigen::VectorXd phi = closed_form_phase_angles(angles, ris, wavelength);
  const double offset = out.terms.phase_offset;
  out.theta = phi.unaryExpr([offset](double x) { return phasor(x + offset); });
  return out;
}

double two_path_power_closed_form(double a_tir, double a_tr, double o, int antennas, int elements,
                                  double transmit_power) {
  const double n = antennas;
  const double l = elements;
  return n * l * l * a_tir * a_tir * transmit_power + n * a_tr * a_tr * transmit_power +
         2.0 * n * l * a_tr * a_tir * std::abs(o) * transmit_power;
}

Solution mrt_solution(const ChannelSet& channels, const ComplexVector& theta, double transmit_power) {
  Solution s;
  s.theta = theta;
  const ComplexVector h = effective_channel(channels, theta);
  s.v = mrt_beamforming(h, transmit_power);
  s.predicted_power = h.squaredNorm() * transmit_power;
  s.method = Method::Mrt;
  return s;
}

Solution closed_form_solution(const Scene& scene, double transmit_power) {
  const FarFieldChannel ff = farfield_channel(scene);
  const int n = scene.tx.size();
  const int l = scene.ris.size();
  Solution s;
  if (!scene.direct_link) {
    s.theta = closed_form_phases(ff.angles, scene.ris, scene.wavelength);
    s.v = closed_form_beamforming(ff.angles, scene.tx, scene.wavelength, transmit_power);
    s.predicted_power = closed_form_power(ff.factors.a_tir, n, l, transmit_power);
    s.method = Method::ClosedForm;
    return s;
  }
  const TwoPathPhases phases = closed_form_phases_two_path(ff.angles, scene.ris, scene.tx, scene.wavelength);
  s.theta = phases.theta;
  s.v = mrt_beamforming(effective_channel(ff.channels, s.theta), transmit_power);
  s.predicted_power =
      two_path_power_closed_form(ff.factors.a_tir, ff.a_tr, phases.terms.o, n, l, transmit_power);
  s.method = Method::ClosedFormTwoPath;
  return s;
}

LeadingSingular leading_singular_pair(const ComplexMatrix& a, const PowerIterationOptions& options) {
  if (a.size() == 0 || !(a.norm() > 0.0)) throw Error(ErrorKind::ZeroChannel, "cascade channel is zero");
  const ComplexMatrix gram = a.adjoint() * a;
  const Eigen::Index n = gram.rows();
  const double mean_eigenvalue = gram.trace().real() / static_cast<double>(n);

  const auto iterate = [&](ComplexVector x, LeadingSingular& out) -> double {
    double lambda = 0.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
      const ComplexVector y = gram * x;
      const double y_norm = y.norm();
      if (y_norm == 0.0) return 0.0;
      const double next = x.dot(y).real();  // Rayleigh quotient, ||x|| = 1
      x = y / y_norm;
      out.iterations = it;
      if (it > 1 && std::abs(next - lambda) <= options.tolerance * std::abs(next)) {
        lambda = next;
        out.right = x;
        out.residual = (gram * x - lambda * x).norm() / lambda;
        return lambda;
      }
      lambda = next;
    }
    out.right = x;
    out.residual = (gram * x - lambda * x).norm() / lambda;
    throw Error(ErrorKind::NoConvergence,
                "power iteration stalled, residual " + std::to_string(out.residual));
  };

  LeadingSingular out;
  double lambda = iterate(ComplexVector::Ones(n) / std::sqrt(static_cast<double>(n)), out);
  // The top eigenvalue is at least the mean; falling below it means the start
  // vector was orthogonal to the dominant direction.
  if (lambda < mean_eigenvalue * (1.0 - 1e-9)) {
    std::mt19937_64 rng(options.restart_seed);
    std::normal_distribution<double> normal;
    ComplexVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = Complex(normal(rng), normal(rng));
    lambda = iterate(x.normalized(), out);
  }
  out.sigma = std::sqrt(std::max(lambda, 0.0));
  out.left = a * out.right / out.sigma;
  out.left.normalize();
  Eigen::Index largest = 0;
  out.left.cwiseAbs().maxCoeff(&largest);
  const Complex align = std::conj(out.left(largest)) / std::abs(out.left(largest));
  out.left *= align;
  out.right *= align;
  return out;
}

namespace {

ComplexMatrix augmented_cascade(const ChannelSet& channels) {
  channels.validate();
  const ComplexMatrix cascade = channels.cascade();
  if (!channels.tr) return cascade;
  ComplexMatrix aug(cascade.rows() + 1, cascade.cols());
  aug.topRows(cascade.rows()) = cascade;
  aug.bottomRows(1) = channels.tr->transpose();
  return aug;
}

}  // namespace

Solution svd_solution(const ChannelSet& channels, double transmit_power,
                      const PowerIterationOptions& options) {
  const ComplexMatrix cascade = augmented_cascade(channels);
  const LeadingSingular pair = leading_singular_pair(cascade, options);
  const Eigen::Index l = channels.ris_size();
  ComplexVector projected(cascade.rows());
  for (Eigen::Index q = 0; q < cascade.rows(); ++q) {
    projected(q) = phasor(std::arg(std::conj(pair.left(q))));
  }
  ComplexVector theta = projected.head(l);
  if (channels.tr) theta /= projected(l);  // direct path keeps a unit coefficient
  Solution s = mrt_solution(channels, theta, transmit_power);
  s.method = Method::SvdProjected;
  return s;
}

double power_upper_bound(const ChannelSet& channels, double transmit_power) {
  const ComplexMatrix cascade = augmented_cascade(channels);
  if (cascade.size() == 0) return 0.0;
  const Eigen::JacobiSVD<ComplexMatrix> svd(cascade);
  const double sigma = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return static_cast<double>(cascade.rows()) * sigma * sigma * transmit_power;
}

RisGridDesign anti_decay_design(double wavelength, AntiDecayMode mode, double ratio, double reference) {
  if (!(ratio > 0.0)) throw Error(ErrorKind::InvalidArgument, "design ratio must be > 0");
  if (!(wavelength > 0.0)) throw Error(ErrorKind::InvalidArgument, "wavelength must be > 0");
  if (!(reference > 0.0)) throw Error(ErrorKind::InvalidArgument, "design reference must be > 0");
  // Guard against floor() landing one below an exact integer.
  constexpr double kRoundingSlack = 1e-9;
  RisGridDesign d;
  if (mode == AntiDecayMode::FixArea) {
    d.element_dx = d.element_dy = ratio * wavelength;
    d.target_area = reference;
    const int side = static_cast<int>(std::floor(std::sqrt(reference) / d.element_dx + kRoundingSlack));
    d.rows = d.cols = side;
  } else {
    d.element_dx = d.element_dy = reference;
    const double count = ratio / wavelength;
    d.target_area = count * reference * reference;
    const int side = static_cast<int>(std::floor(std::sqrt(count) + kRoundingSlack));
    d.rows = d.cols = side;
  }
  d.achieved_area = d.rows * d.cols * d.element_dx * d.element_dy;
  return d;
}

}  // namespace rislink
