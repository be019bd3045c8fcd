#include "doctest.h"
#include "helpers.hpp"
#include "rislink/geometry.hpp"

using namespace rislink;
using rislink::test::thrown_kind;

TEST_SUITE("geometry") {

TEST_CASE("ula antennas are numbered from the positive end of the axis") {
  const auto tx = make_ula(Vec3(1, 2, 3), 3, 0.5, Vec3::UnitY());
  const auto pos = antenna_positions(tx);
  REQUIRE(pos.size() == 3);
  CHECK((pos[0] - Vec3(1, 2.5, 3)).norm() < 1e-15);
  CHECK((pos[1] - Vec3(1, 2.0, 3)).norm() < 1e-15);
  CHECK((pos[2] - Vec3(1, 1.5, 3)).norm() < 1e-15);
  CHECK(tx.size() == 3);
  CHECK(tx.is_ula());
}

TEST_CASE("single antenna ula sits at the center") {
  const auto tx = make_ula(Vec3(4, 5, 6), 1, 0.1, Vec3::UnitX());
  CHECK(antenna_offsets(tx)[0].norm() == 0.0);
}

TEST_CASE("upa offsets are centered") {
  const auto tx = make_upa(Vec3::Zero(), 3, 4, 0.2, 0.3, Vec3::UnitX(), Vec3::UnitY());
  CHECK(tx.size() == 12);
  Vec3 sum = Vec3::Zero();
  for (const auto& o : antenna_offsets(tx)) sum += o;
  CHECK(sum.norm() < 1e-14);
}

TEST_CASE("invalid arrays are rejected") {
  CHECK(thrown_kind([] { make_ula(Vec3::Zero(), 0, 0.1, Vec3::UnitX()); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { make_ula(Vec3::Zero(), 2, 0.0, Vec3::UnitX()); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { make_ula(Vec3::Zero(), 2, 0.1, Vec3::UnitX(), -1.0); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] {
          make_upa(Vec3::Zero(), 2, 2, 0.1, 0.1, Vec3::UnitX(), Vec3(1, 1, 0).normalized());
        }) == ErrorKind::InvalidArgument);
}

TEST_CASE("elements are numbered row-major from 1-based (m, n)") {
  RisPanel ris;
  ris.rows = 2;
  ris.cols = 3;
  ris.element_dx = 0.01;
  ris.element_dy = 0.02;
  const GridIndex g = element_index(ris, 4);
  CHECK(g.m == 2);
  CHECK(g.n == 2);
  const GridIndex last = element_index(ris, 5);
  CHECK(last.m == 3);
  CHECK(last.n == 2);
}

TEST_CASE("element offsets are symmetric about the panel center") {
  RisPanel ris;
  ris.rows = 4;
  ris.cols = 5;
  ris.element_dx = 0.01;
  ris.element_dy = 0.02;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  double max_x = 0.0;
  for (int q = 0; q < ris.size(); ++q) {
    sum += element_offset(ris, q);
    max_x = std::max(max_x, std::abs(element_offset(ris, q).x()));
  }
  CHECK(sum.norm() < 1e-15);
  CHECK(max_x == doctest::Approx(0.02));
  CHECK(element_positions(ris).size() == 20);
}

TEST_CASE("specular frame bisects the TIR angle") {
  const Vec3 t(-3, 1, 4), r(5, -2, 6), c(0.5, 0.2, 0.1);
  const PanelFrame f = specular_frame(t, c, r);
  CHECK(f.normal.dot((t - c).normalized()) == doctest::Approx(f.normal.dot((r - c).normalized())));
  CHECK(f.normal.cross(f.x_axis).dot(f.y_axis) == doctest::Approx(1.0));

  RisPanel ris;
  ris.center = c;
  ris.frame = f;
  ris.element_dx = ris.element_dy = 0.01;
  const auto tx = make_ula(t, 1, 0.1, Vec3::UnitX());
  const LinkAngles a = link_angles(tx, ris, r);
  CHECK(a.theta_t == doctest::Approx(a.theta_r));
  CHECK(a.theta_t + a.theta_r == doctest::Approx(a.theta_0));
  CHECK(a.phi_r == doctest::Approx(0.0));
  CHECK(a.phi_t == doctest::Approx(kPi<double>));
}

TEST_CASE("specular frame rejects coincident and collinear-opposite points") {
  CHECK(thrown_kind([] { specular_frame(Vec3::Zero(), Vec3::Zero(), Vec3::UnitX()); }) ==
        ErrorKind::DegenerateGeometry);
  CHECK(thrown_kind([] { specular_frame(-Vec3::UnitX(), Vec3::Zero(), Vec3::UnitX()); }) ==
        ErrorKind::DegenerateGeometry);
}

TEST_CASE("triangle angle follows the law of cosines") {
  CHECK(triangle_angle(1.0, 1.0, std::sqrt(2.0)) == doctest::Approx(kPi<double> / 2));
  CHECK(triangle_angle(1.0, 1.0, 1.0) == doctest::Approx(kPi<double> / 3));
  CHECK(triangle_angle(1.0, 1.0, 2.0 + 1e-12) == doctest::Approx(kPi<double>));
}

TEST_CASE("link angles for a panel facing +z") {
  RisPanel ris;
  ris.element_dx = ris.element_dy = 0.01;
  const auto tx = make_ula(Vec3(0, 0, 10), 2, 0.01, Vec3::UnitZ());
  const LinkAngles a = link_angles(tx, ris, Vec3(10, 0, 10));
  CHECK(a.d_ti == doctest::Approx(10.0));
  CHECK(a.d_ir == doctest::Approx(std::sqrt(200.0)));
  CHECK(a.d_tr == doctest::Approx(10.0));
  CHECK(a.theta_t == doctest::Approx(0.0));
  CHECK(a.theta_r == doctest::Approx(kPi<double> / 4));
  CHECK(a.theta_0 == doctest::Approx(kPi<double> / 4));
  CHECK(a.mu_ti == doctest::Approx(0.0));
  CHECK(a.mu_tr == doctest::Approx(kPi<double> / 2));
}

TEST_CASE("ula path offsets scale with the cosine of the departure angle") {
  const auto tx = make_ula(Vec3::Zero(), 4, 0.5, Vec3::UnitX());
  const Vec3 dir = Vec3(-std::cos(0.3), std::sin(0.3), 0.0);
  const Eigen::VectorXd off = array_path_offsets(tx, dir);
  for (int p = 1; p <= 4; ++p) CHECK(off[p - 1] == doctest::Approx((2.5 - p) * 0.5 * std::cos(0.3)));
}

TEST_CASE("far-field check reports the three ratios") {
  RisPanel ris;
  ris.rows = ris.cols = 2;
  ris.element_dx = ris.element_dy = 0.01;
  const auto tx = make_ula(Vec3(0, 0, 10), 2, 0.5, Vec3::UnitX());
  const FarFieldReport r = far_field_check(tx, ris, Vec3(0, 0, 20));
  CHECK(r.ok);
  CHECK(r.ratios[0] == doctest::Approx(10.0));
  CHECK(r.ratios[1] == doctest::Approx(10.0 / (4 * std::sqrt(2e-4))));
  CHECK(r.ratios[2] == doctest::Approx(20.0 / (4 * std::sqrt(2e-4))));
  CHECK_FALSE(far_field_check(tx, ris, Vec3(0, 0, 20), 20.0).ok);
  CHECK(thrown_kind([&] { far_field_check(tx, ris, Vec3(0, 0, 20), 0.5); }) == ErrorKind::InvalidArgument);
}

}
