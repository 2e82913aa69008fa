#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "rdmgeo/mean_field.hpp"

using namespace rdmgeo;

TEST_CASE("symmetric solution below the mean-field transition") {
  // closed form for Bz < 2J with a tie-break field: az = Bz / 2J
  const GroundStateResult r = mean_field_extreme({1.0, 1.0, 1e-9}, 32, SeededRng(5));
  REQUIRE(r.point.b == Catch::Approx(0.5).margin(1e-6));
  REQUIRE(r.point.c == Catch::Approx(std::sqrt(0.75)).margin(1e-6));
  REQUIRE(r.point.a == Catch::Approx(0.75).margin(1e-6));
}

TEST_CASE("polarized phase at Bz >= 2J") {
  const GroundStateResult r = mean_field_extreme({1.0, 3.0, 0.0}, 32, SeededRng(5));
  REQUIRE(r.point.a == Catch::Approx(0.0).margin(1e-7));
  REQUIRE(r.point.b == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(r.point.c == Catch::Approx(0.0).margin(1e-7));
}

TEST_CASE("pure x-field aligns both spins") {
  const GroundStateResult r = mean_field_extreme({0.0, 0.0, 1.0}, 32, SeededRng(5));
  REQUIRE(r.point.a == Catch::Approx(1.0).margin(1e-8));
  REQUIRE(r.point.b == Catch::Approx(0.0).margin(1e-8));
  REQUIRE(r.point.c == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("degenerate Bx = 0 minimum reports the symmetric point") {
  const GroundStateResult r = mean_field_extreme({1.0, 0.5, 0.0}, 32, SeededRng(11));
  REQUIRE(r.degeneracy == 2);
  REQUIRE(r.point.c == 0.0);
  REQUIRE(r.point.a == Catch::Approx(1.0 - 0.0625).margin(1e-6));  // ax^2 = 1 - (Bz/2J)^2
}

TEST_CASE("antiferromagnetic coupling anti-aligns the product pair") {
  const MeanFieldSolution s = mean_field_solve({-1.0, 0.4, 0.0}, 32, SeededRng(3));
  REQUIRE(s.a.ax == Catch::Approx(-s.b.ax).margin(1e-8));
  REQUIRE(s.ground.point.a < 0.0);  // <XX> sign follows J
  REQUIRE(std::fabs(s.a.norm() - 1.0) < 1e-9);
  REQUIRE(std::fabs(s.b.norm() - 1.0) < 1e-9);
}

TEST_CASE("restart validation") {
  REQUIRE_THROWS_AS(mean_field_extreme({1.0, 1.0, 0.0}, 4, SeededRng(1)), Error);
}

TEST_CASE("energy does not exceed the variational bound from the chain") {
  // chain (d=1) ground energy per site lies below the product-state optimum
  const SpinParams p{1.0, 0.8, 0.1};
  const GroundStateResult mf = mean_field_extreme(p, 32, SeededRng(9));
  // two-spin bound is not comparable; check against the known exact d=1
  // inequality via a modest chain instead (same convention: one bond/site).
  REQUIRE(mf.energy_per_site >= -2.0);  // coarse sanity; precise test in test_geometry
}
