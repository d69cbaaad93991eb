#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "passalign/dynamics.hpp"

using namespace passalign;
using Catch::Approx;

TEST_CASE("free fall gains the expected velocity in one step") {
  const InertiaModel inertia;
  BodyState state;
  state = step(state, Wrench{}, Wrench{}, inertia, 1e-3);
  REQUIRE(state.twist(2) == Approx(-0.00981).margin(1e-15));
  // semi-implicit: the position already moves with the updated velocity
  REQUIRE(state.position.z() == Approx(-9.81e-6).margin(1e-18));
  REQUIRE(state.twist.head<2>().norm() == 0.0);
  REQUIRE(state.twist.tail<3>().norm() == 0.0);
}

TEST_CASE("exact weight compensation hovers indefinitely") {
  const InertiaModel inertia;
  BodyState state;
  state.position = Vec3(0.2, -0.1, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const Wrench w_a = -gravity_wrench(state.orientation, inertia.mass);
    state = step(state, w_a, Wrench{}, inertia, 1e-3);
  }
  REQUIRE(state.twist.norm() == 0.0);
  REQUIRE(state.position == Vec3(0.2, -0.1, 1.0));
}

TEST_CASE("gravity wrench follows the body orientation") {
  const Wrench g_id = gravity_wrench(Quat::Identity(), 3.0);
  REQUIRE(g_id.force == Vec3(0.0, 0.0, -29.43));
  REQUIRE(g_id.torque.norm() == 0.0);

  const Quat q(Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitX()));
  const Wrench g_rot = gravity_wrench(q, 3.0);
  REQUIRE(g_rot.force.isApprox(Vec3(0.0, -29.43, 0.0), 1e-12));
}

TEST_CASE("coriolis term matches the closed form") {
  InertiaModel inertia;
  Vec6 twist;
  twist << 0.3, -0.2, 0.5, 0.1, 0.2, -0.3;
  const Vec6 c = coriolis_term(inertia, twist);
  REQUIRE(c(0) == Approx(0.12).margin(1e-15));
  REQUIRE(c(1) == Approx(-0.42).margin(1e-15));
  REQUIRE(c(2) == Approx(-0.24).margin(1e-15));
  REQUIRE(c(3) == Approx(-0.0012).margin(1e-18));
  REQUIRE(c(4) == Approx(0.0006).margin(1e-18));
  REQUIRE(c(5) == Approx(0.0).margin(1e-18));
}

TEST_CASE("quaternion exponential and logarithm invert each other") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const Vec3 r(u(rng) * 2.0, u(rng) * 2.0, u(rng) * 2.0);
    if (r.norm() >= M_PI) continue;  // log returns the shortest arc
    const Vec3 back = quat_log(quat_exp(r));
    REQUIRE((back - r).norm() < 1e-9);
  }
  // tiny angles take the series branch
  const Vec3 small(1e-13, -2e-13, 0.0);
  REQUIRE((quat_log(quat_exp(small)) - small).norm() < 1e-15);
  // sign canonicalization: -q is the same rotation
  const Quat q = quat_exp(Vec3(0.1, 0.2, 0.3));
  const Quat mq(-q.w(), -q.x(), -q.y(), -q.z());
  REQUIRE((quat_log(q) - quat_log(mq)).norm() < 1e-12);
}

TEST_CASE("principal-axis spin conserves rotational energy") {
  const InertiaModel inertia;
  BodyState state;
  state.twist << 0.0, 0.0, 0.0, 0.0, 0.0, 2.0;
  const double e0 = 0.5 * state.twist.tail<3>().dot(
                              inertia.inertia * state.twist.tail<3>());
  for (int k = 0; k < 10000; ++k) {
    const Wrench w_a = -gravity_wrench(state.orientation, inertia.mass);
    state = step(state, w_a, Wrench{}, inertia, 1e-3);
  }
  const double e1 = 0.5 * state.twist.tail<3>().dot(
                              inertia.inertia * state.twist.tail<3>());
  REQUIRE(std::abs(e1 - e0) < 1e-6);
  REQUIRE(state.twist.tail<3>().isApprox(Vec3(0.0, 0.0, 2.0), 1e-12));
  REQUIRE(std::abs(state.orientation.norm() - 1.0) < 1e-12);
  // the body yawed by 2 rad/s * 10 s modulo 2 pi
  const double yaw = quat_log(state.orientation).z();
  REQUIRE(std::remainder(yaw - 20.0, 2.0 * M_PI) == Approx(0.0).margin(1e-9));
}

TEST_CASE("velocity updates before position within a step") {
  const InertiaModel inertia;
  BodyState state;
  Wrench w_a;
  w_a.force = Vec3(3.0, 0.0, 29.43);  // 1 m/s^2 along x plus exact hover
  state = step(state, w_a, Wrench{}, inertia, 1e-3);
  REQUIRE(state.twist(0) == Approx(1e-3).margin(1e-15));
  REQUIRE(state.position.x() == Approx(1e-6).margin(1e-18));
}

TEST_CASE("angular acceleration uses the full inertia tensor") {
  InertiaModel inertia;
  inertia.inertia = Vec3(0.03, 0.04, 0.05).asDiagonal();
  BodyState state;
  Wrench w_a;
  w_a.force = Vec3(0.0, 0.0, 29.43);
  w_a.torque = Vec3(0.006, 0.008, 0.01);
  const Vec6 acc = acceleration(state, w_a, Wrench{}, inertia);
  REQUIRE(acc.head<3>().norm() == Approx(0.0).margin(1e-12));
  REQUIRE(acc(3) == Approx(0.2).margin(1e-12));
  REQUIRE(acc(4) == Approx(0.2).margin(1e-12));
  REQUIRE(acc(5) == Approx(0.2).margin(1e-12));
}

TEST_CASE("step rejects bad timesteps and non-finite inputs") {
  const InertiaModel inertia;
  const BodyState state;
  REQUIRE_THROWS_AS(step(state, Wrench{}, Wrench{}, inertia, 0.0), ConfigError);
  REQUIRE_THROWS_AS(step(state, Wrench{}, Wrench{}, inertia, 0.02),
                    ConfigError);
  Wrench bad;
  bad.force.x() = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(step(state, bad, Wrench{}, inertia, 1e-3), NonFiniteState);
  REQUIRE_THROWS_AS(step(state, Wrench{}, bad, inertia, 1e-3), NonFiniteState);
}

TEST_CASE("inertia model validation") {
  InertiaModel m;
  REQUIRE_NOTHROW(m.validate());
  m.mass = 0.0;
  REQUIRE_THROWS_AS(m.validate(), ConfigError);
  m = InertiaModel{};
  m.inertia(0, 0) = -0.01;
  REQUIRE_THROWS_AS(m.validate(), ConfigError);
  m = InertiaModel{};
  m.inertia(0, 1) = 0.001;  // asymmetric
  REQUIRE_THROWS_AS(m.validate(), ConfigError);

  const Mat6 mm = InertiaModel{}.mass_matrix();
  REQUIRE(mm(0, 0) == 3.0);
  REQUIRE(mm(3, 3) == 0.03);
  REQUIRE(mm(5, 5) == 0.05);
  REQUIRE(mm(0, 3) == 0.0);
}
