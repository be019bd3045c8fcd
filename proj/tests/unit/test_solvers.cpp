#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "rislink/solvers.hpp"
#include "rislink/validation.hpp"

using namespace rislink;
using rislink::test::rel_diff;
using rislink::test::thrown_kind;

namespace {

Scene oblique_scene(int antennas, int side, bool direct) {
  Scene s;
  s.wavelength = 0.0286;
  s.tx = make_ula(Vec3(-60, 25, 110), antennas, 0.0143, Vec3(1, 2, 0.5).normalized(), db_to_linear(21));
  s.rx.position = Vec3(90, -40, 70);
  s.rx.gain = db_to_linear(21);
  s.ris.rows = s.ris.cols = side;
  s.ris.element_dx = s.ris.element_dy = 0.01;
  s.ris.pattern_exponent = 3;
  s.ris.element_gain = db_to_linear(9.03);
  s.ris.frame = frame_from_normal(Vec3(0.1, -0.2, 1).normalized(), Vec3::UnitX());
  s.direct_link = direct;
  return s;
}

ComplexMatrix random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("mrt attains the channel norm") {
  ComplexVector h(3);
  h << Complex(1, 2), Complex(-0.5, 0), Complex(0, 3);
  const ComplexVector v = mrt_beamforming(h, 2.0);
  CHECK(v.squaredNorm() == doctest::Approx(2.0));
  CHECK(std::norm((h.transpose() * v).value()) == doctest::Approx(h.squaredNorm() * 2.0));
  CHECK(thrown_kind([] { mrt_beamforming(ComplexVector::Zero(3), 1.0); }) == ErrorKind::ZeroChannel);
}

TEST_CASE("closed form attains N L^2 a^2 P on the far-field channel") {
  const Scene s = oblique_scene(4, 5, false);
  const FarFieldChannel ff = farfield_channel(s);
  const Solution sol = closed_form_solution(s, 0.5);
  CHECK(sol.method == Method::ClosedForm);
  CHECK(sol.v.squaredNorm() == doctest::Approx(0.5));
  const double expected = closed_form_power(ff.factors.a_tir, 4, 25, 0.5);
  CHECK(rel_diff(sol.predicted_power, expected) < 1e-12);
  CHECK(rel_diff(received_power(ff.channels, sol.theta, sol.v, 0.5), expected) < 1e-9);
  CHECK((closed_form_phases(ff.angles, s.ris, s.wavelength) - ff.factors.d_vec.conjugate()).norm() < 1e-9);
  const ComplexVector v_cf = closed_form_beamforming(ff.angles, s.tx, s.wavelength, 0.5);
  CHECK(rel_diff(received_power(ff.channels, sol.theta, v_cf, 0.5), expected) < 1e-9);
}

TEST_CASE("closed form phases lie on the unit circle") {
  const Scene s = oblique_scene(2, 6, false);
  const LinkAngles a = link_angles(s.tx, s.ris, s.rx.position);
  const ComplexVector theta = closed_form_phases(a, s.ris, s.wavelength);
  CHECK((theta.cwiseAbs() - Eigen::VectorXd::Ones(36)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("closed form power scales with N and L^2") {
  const double a = 3.0e-9;
  CHECK(rel_diff(closed_form_power(a, 8, 100, 1.0), 2 * closed_form_power(a, 4, 100, 1.0)) < 1e-15);
  CHECK(rel_diff(closed_form_power(a, 4, 200, 1.0), 4 * closed_form_power(a, 4, 100, 1.0)) < 1e-15);
}

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(std::abs(sinc(kPi<double>)) < 1e-16);
  CHECK(sinc(1e-9) == doctest::Approx(1.0));
  CHECK(sinc(0.5) == doctest::Approx(std::sin(0.5) / 0.5));
}

TEST_CASE("coherence factor matches the direct antenna sum") {
  const double lambda = 0.0286, dT = lambda / 2;
  for (int n : {1, 2, 5, 16}) {
    for (double mu_ti : {0.1, 0.7, 1.3, 2.5}) {
      for (double mu_tr : {0.2, 1.0, 1.5707963, 3.0}) {
        const double u = kPi<double> * dT * (std::cos(mu_ti) - std::cos(mu_tr)) / lambda;
        double sum = 0.0;
        for (int p = 1; p <= n; ++p) sum += std::cos(2.0 * u * (p - (n + 1) / 2.0));
        CHECK(two_path_o(n, dT, mu_ti, mu_tr, lambda) == doctest::Approx(sum / n).epsilon(1e-9));
      }
    }
  }
  CHECK(two_path_o(8, dT, 0.4, 0.4, lambda) == doctest::Approx(1.0));
  // u = 2 pi, where the sinc ratio is 0 / 0.
  CHECK(two_path_o(4, 2 * lambda, 0.0, kPi<double> / 2, lambda) == doctest::Approx(1.0));
  CHECK(std::abs(two_path_o(4, dT, kPi<double> / 3, kPi<double> / 2, lambda)) < 1e-12);
  CHECK(thrown_kind([] { two_path_o(0, 0.1, 0.1, 0.2, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("two-path closed form attains its predicted power on the far-field channel") {
  const Scene s = oblique_scene(4, 4, true);
  const FarFieldChannel ff = farfield_channel(s);
  REQUIRE(ff.channels.tr.has_value());
  const Solution sol = closed_form_solution(s, 1.0);
  CHECK(sol.method == Method::ClosedFormTwoPath);
  CHECK(rel_diff(received_power(ff.channels, sol.theta, sol.v, 1.0), sol.predicted_power) < 1e-9);
  const double o = two_path_terms(ff.angles, s.tx, s.wavelength).o;
  const double expected = two_path_power_closed_form(ff.factors.a_tir, ff.a_tr, o, 4, 16, 1.0);
  CHECK(rel_diff(sol.predicted_power, expected) < 1e-12);
  CHECK(two_path_power_closed_form(1.0, 0.0, 0.3, 2, 3, 1.0) == doctest::Approx(closed_form_power(1.0, 2, 3, 1.0)));
}

TEST_CASE("power iteration matches a dense SVD") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const ComplexMatrix a = random_matrix(12, 5, seed);
    const LeadingSingular pair = leading_singular_pair(a);
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    CHECK(rel_diff(pair.sigma, svd.singularValues()(0)) < 1e-9);
    CHECK(pair.residual < 1e-5);
    CHECK(pair.left.norm() == doctest::Approx(1.0));
    Eigen::Index idx = 0;
    pair.left.cwiseAbs().maxCoeff(&idx);
    CHECK(std::abs(pair.left(idx).imag()) < 1e-12);
    CHECK(pair.left(idx).real() > 0.0);
  }
}

TEST_CASE("power iteration restarts when the start vector misses the dominant direction") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = Complex(1, 0);
  a(0, 1) = Complex(-1, 0);
  a(1, 0) = Complex(0.1, 0);
  a(1, 1) = Complex(0.1, 0);
  const LeadingSingular pair = leading_singular_pair(a);
  CHECK(pair.sigma == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("power iteration error paths") {
  CHECK(thrown_kind([] { leading_singular_pair(ComplexMatrix::Zero(3, 2)); }) == ErrorKind::ZeroChannel);
  ComplexMatrix close = ComplexMatrix::Zero(2, 2);
  close(0, 0) = 1.0;
  close(1, 1) = 0.9999999;
  PowerIterationOptions opt;
  opt.max_iterations = 5;
  opt.tolerance = 1e-15;
  CHECK(thrown_kind([&] { leading_singular_pair(close, opt); }) == ErrorKind::NoConvergence);
}

TEST_CASE("solutions never exceed the upper bound") {
  for (bool direct : {false, true}) {
    const Scene s = oblique_scene(3, 4, direct);
    const ChannelSet exact = exact_channel(s);
    const double bound = power_upper_bound(exact, 1.0);
    const Solution svd = svd_solution(exact, 1.0);
    const Solution cf = closed_form_solution(s, 1.0);
    CHECK(svd.method == Method::SvdProjected);
    CHECK(received_power(exact, svd.theta, svd.v, 1.0) <= bound * (1 + 1e-9));
    CHECK(received_power(exact, cf.theta, cf.v, 1.0) <= bound * (1 + 1e-9));
    for (const auto& pair : random_feasible_solutions(16, 3, 1.0, 200, 7)) {
      CHECK(received_power(exact, pair.theta, pair.v, 1.0) <= bound * (1 + 1e-9));
    }
  }
}

TEST_CASE("upper bound is L sigma^2 P") {
  ChannelSet ch;
  ch.wavelength = 0.01;
  ch.ti = random_matrix(6, 3, 4);
  ch.ir = random_matrix(6, 1, 5).col(0);
  Eigen::JacobiSVD<ComplexMatrix> svd(ch.cascade());
  const double s = svd.singularValues()(0);
  CHECK(rel_diff(power_upper_bound(ch, 2.0), 6 * s * s * 2.0) < 1e-12);
}

TEST_CASE("anti-decay design") {
  const RisGridDesign area = anti_decay_design(0.0286, AntiDecayMode::FixArea, 1.0 / 3.0, 4.0);
  CHECK(area.element_dx == doctest::Approx(0.0286 / 3));
  CHECK(area.rows == 209);
  CHECK(area.cols == 209);
  CHECK(area.target_area == doctest::Approx(4.0));
  CHECK(area.achieved_area <= 4.0);
  CHECK(area.achieved_area == doctest::Approx(209 * 209 * area.element_dx * area.element_dy));

  const RisGridDesign elem = anti_decay_design(0.0286, AntiDecayMode::FixElement, 400 * 0.0286, 0.01);
  CHECK(elem.rows == 20);
  CHECK(elem.element_dx == doctest::Approx(0.01));
  const RisGridDesign half = anti_decay_design(0.0143, AntiDecayMode::FixElement, 400 * 0.0286, 0.01);
  CHECK(half.rows == 28);
  CHECK(half.target_area == doctest::Approx(2 * elem.target_area));

  const RisGridDesign quarter = anti_decay_design(0.0143, AntiDecayMode::FixArea, 1.0 / 3.0, 4.0);
  CHECK(quarter.rows == 419);

  CHECK(thrown_kind([] { anti_decay_design(0.0, AntiDecayMode::FixArea, 1.0, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { anti_decay_design(0.01, AntiDecayMode::FixArea, -1.0, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { anti_decay_design(0.01, AntiDecayMode::FixArea, 1.0, 0.0); }) == ErrorKind::InvalidArgument);
}

}
