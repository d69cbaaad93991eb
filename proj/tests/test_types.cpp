#include <catch2/catch_amalgamated.hpp>

#include "passalign/types.hpp"

using namespace passalign;
using Catch::Approx;

TEST_CASE("UnitVec3 accepts unit vectors and rejects the rest") {
  REQUIRE_NOTHROW(UnitVec3(Vec3(0.0, 0.0, 1.0)));
  REQUIRE_NOTHROW(UnitVec3(Vec3(std::sqrt(0.5), std::sqrt(0.5), 0.0)));
  REQUIRE_THROWS_AS(UnitVec3(Vec3(0.0, 0.0, 1.5)), Error);
  REQUIRE_THROWS_AS(UnitVec3(Vec3::Zero()), Error);
}

TEST_CASE("UnitVec3::normalize scales arbitrary vectors to length one") {
  const UnitVec3 u = UnitVec3::normalize(Vec3(3.0, 4.0, 0.0));
  REQUIRE(u.x() == Approx(0.6).margin(1e-15));
  REQUIRE(u.y() == Approx(0.8).margin(1e-15));
  REQUIRE(u.vec().norm() == Approx(1.0).margin(1e-15));
  REQUIRE_THROWS_AS(UnitVec3::normalize(Vec3(1e-9, 0.0, 0.0)), Error);
}

TEST_CASE("Wrench stacking round-trips and supports arithmetic") {
  Wrench w{Vec3(1.0, 2.0, 3.0), Vec3(-4.0, 5.0, -6.0)};
  const Vec6 s = w.stacked();
  REQUIRE(s(0) == 1.0);
  REQUIRE(s(5) == -6.0);
  const Wrench back = Wrench::from_stacked(s);
  REQUIRE(back.force == w.force);
  REQUIRE(back.torque == w.torque);

  const Wrench sum = w + w;
  REQUIRE(sum.force == Vec3(2.0, 4.0, 6.0));
  const Wrench diff = w - w;
  REQUIRE(diff.force.norm() == 0.0);
  REQUIRE((-w).torque == Vec3(4.0, -5.0, 6.0));

  REQUIRE(w.is_finite());
  w.force.x() = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_FALSE(w.is_finite());
}

TEST_CASE("angle conversions are exact inverses") {
  REQUIRE(deg2rad(180.0) == Approx(M_PI).margin(1e-15));
  REQUIRE(rad2deg(M_PI / 2.0) == Approx(90.0).margin(1e-12));
  REQUIRE(rad2deg(deg2rad(33.7)) == Approx(33.7).margin(1e-12));
}

TEST_CASE("clamp and sign behave at the boundaries") {
  REQUIRE(clamp(5.0, -1.0, 1.0) == 1.0);
  REQUIRE(clamp(-5.0, -1.0, 1.0) == -1.0);
  REQUIRE(clamp(0.3, -1.0, 1.0) == 0.3);
  REQUIRE(sign(2.5) == 1.0);
  REQUIRE(sign(-0.1) == -1.0);
  REQUIRE(sign(0.0) == 0.0);
}
