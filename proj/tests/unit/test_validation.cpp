#include "doctest.h"
#include "helpers.hpp"
#include "rislink/validation.hpp"

using namespace rislink;
using rislink::test::rel_diff;
using rislink::test::thrown_kind;

TEST_SUITE("validation") {

TEST_CASE("exhaustive search matches brute force on a tiny grid") {
  ChannelSet ch;
  ch.wavelength = 0.01;
  ch.ti = ComplexMatrix(3, 2);
  ch.ti << Complex(1, 0.5), Complex(0.2, -1), Complex(-0.3, 0.8), Complex(0.9, 0.1), Complex(0.4, 0.4),
      Complex(-1, 0.2);
  ch.ir = ComplexVector(3);
  ch.ir << Complex(0.7, 0.1), Complex(-0.2, 0.9), Complex(0.5, -0.5);
  OracleConfig cfg;
  cfg.phase_levels = 6;
  const PhaseSearchResult res = exhaustive_phase_search(ch, 2.0, cfg);
  CHECK(res.combinations == 36);

  double best = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        ComplexVector theta(3);
        theta << phasor(2 * kPi<double> * a / 6), phasor(2 * kPi<double> * b / 6), phasor(2 * kPi<double> * c / 6);
        best = std::max(best, effective_channel(ch, theta).squaredNorm() * 2.0);
      }
  CHECK(rel_diff(res.best_power, best) < 1e-12);
  CHECK(rel_diff(effective_channel(ch, res.best_theta).squaredNorm() * 2.0, best) < 1e-12);
}

TEST_CASE("exhaustive search refuses oversized grids") {
  ChannelSet ch;
  ch.wavelength = 0.01;
  ch.ti = ComplexMatrix::Ones(7, 1);
  ch.ir = ComplexVector::Ones(7);
  CHECK(thrown_kind([&] { exhaustive_phase_search(ch, 1.0); }) == ErrorKind::TooLarge);
  ch.ti = ComplexMatrix::Ones(5, 1);
  ch.ir = ComplexVector::Ones(5);
  CHECK(thrown_kind([&] { exhaustive_phase_search(ch, 1.0); }) == ErrorKind::TooLarge);
  OracleConfig bad;
  bad.phase_levels = 1;
  CHECK(thrown_kind([&] { bad.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("random feasible solutions respect the constraints and the seed") {
  const auto a = random_feasible_solutions(9, 3, 0.25, 20, 42);
  const auto b = random_feasible_solutions(9, 3, 0.25, 20, 42);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].v.squaredNorm() == doctest::Approx(0.25));
    CHECK((a[i].theta.cwiseAbs() - Eigen::VectorXd::Ones(9)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(a[i].theta == b[i].theta);
    CHECK(a[i].v == b[i].v);
  }
}

TEST_CASE("toy scene is far-field valid") {
  const Scene s = toy_scene(false);
  CHECK(s.ris.size() == 4);
  CHECK(s.tx.size() == 2);
  CHECK(farfield_channel(s).check.ok);
  CHECK(toy_scene(true).direct_link);
}

TEST_CASE("direct amplitude override") {
  ChannelSet ch = exact_channel(toy_scene(true));
  set_direct_amplitude(ch, 0.5);
  for (Eigen::Index p = 0; p < ch.tr->size(); ++p) CHECK(std::abs((*ch.tr)(p)) == doctest::Approx(0.5));
  ch.tr.reset();
  CHECK(thrown_kind([&] { set_direct_amplitude(ch, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("random plane scenes are reproducible and avoid region D") {
  for (std::uint64_t seed : {1u, 17u, 123u}) {
    const PlaneScene a = random_plane_scene(seed);
    const PlaneScene b = random_plane_scene(seed);
    REQUIRE(a.feasible.size() == 1);
    REQUIRE(a.feasible[0].size() == b.feasible[0].size());
    for (std::size_t i = 0; i < a.feasible[0].size(); ++i) CHECK(a.feasible[0][i] == b.feasible[0][i]);
    for (const auto& v : a.feasible[0]) CHECK_FALSE(in_region(RegionKind::D, a.tx, a.rx, a.to_world(v)));
  }
}

TEST_CASE("dense grid visits the bounding box and keeps the first maximum") {
  const PlaneScene s = make_plane_scene(10, 10, 20, {rectangle(0, 0, 1, 1)});
  PositionObjective flat;
  flat.evaluate = [](const Vec3&) { return 1.0; };
  const GridArgmax g = dense_position_grid(s, flat, 3);
  CHECK(g.evaluated == 9);
  CHECK(g.position == Point2(0, 0));
  CHECK(g.cell == Point2(0.5, 0.5));
  CHECK(thrown_kind([&] { dense_position_grid(s, flat, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("distance to the reduced search set") {
  const PlaneScene s = make_plane_scene(10, 10, 20, {rectangle(0, 5, 10, 8)});
  CHECK(distance_to_search_set(s, Point2(5, 6), 1.0) == doctest::Approx(1.0));
  CHECK(distance_to_search_set(s, Point2(30, 0), 0.0) == doctest::Approx(10.0));
  CHECK(distance_to_search_set(s, Point2(30, 0), 1.0) == doctest::Approx(0.0));
}

}
