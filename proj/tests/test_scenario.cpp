#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "passalign/scenario.hpp"

using namespace passalign;
using Catch::Approx;

TEST_CASE("scenario JSON round-trips through parse and serialize") {
  Scenario sc;
  sc.name = "roundtrip";
  sc.dt = 5e-4;
  sc.duration = 7.5;
  sc.surface.tilt_deg = 11.0;
  sc.surface.mu_s = 1.2;
  sc.surface.mu_k = 1.0;
  sc.controller.f_ref = 21.0;
  sc.contact.v_eps = 0.01;
  sc.disturbance.seed = 77;
  sc.metrics.impact_grace = 0.4;
  sc.conditions.beta_max = deg2rad(11.0);

  const Scenario back = scenario_from_json(scenario_to_json(sc));
  REQUIRE(back.name == sc.name);
  REQUIRE(back.dt == Approx(sc.dt).margin(0.0));
  REQUIRE(back.duration == sc.duration);
  REQUIRE(back.surface.tilt_deg == sc.surface.tilt_deg);
  REQUIRE(back.surface.mu_s == sc.surface.mu_s);
  REQUIRE(back.controller.f_ref == sc.controller.f_ref);
  REQUIRE(back.contact.v_eps == sc.contact.v_eps);
  REQUIRE(back.disturbance.seed == sc.disturbance.seed);
  REQUIRE(back.metrics.impact_grace == sc.metrics.impact_grace);
  REQUIRE(back.conditions.beta_max == Approx(sc.conditions.beta_max).margin(1e-15));
  REQUIRE(scenario_hash(back) == scenario_hash(sc));
}

TEST_CASE("unknown keys are rejected with the offending name") {
  Json j = {{"name", "bad"}, {"surface", {{"tilt_dg", 6.0}}}};
  try {
    scenario_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(std::string(e.what()).find("tilt_dg") != std::string::npos);
  }
  REQUIRE_THROWS_AS(scenario_from_json(Json{{"nmae", "typo"}}), ConfigError);
}

TEST_CASE("scenario defaults and derived design range") {
  const Scenario sc = scenario_from_json(Json{{"name", "defaults"}});
  REQUIRE(sc.dt == 1e-3);
  REQUIRE(sc.duration == 10.0);
  REQUIRE(sc.inertia.mass == 3.0);
  REQUIRE(sc.surface.tilt_deg == 6.0);
  REQUIRE(sc.controller.f_ref == 20.0);
  // the design range defaults to the scenario's own tilt
  REQUIRE(sc.conditions.beta_max == Approx(deg2rad(6.0)).margin(1e-15));
  REQUIRE(sc.conditions.mu_s == sc.surface.mu_s);
  REQUIRE(sc.conditions.f_B_mag == sc.controller.f_ref);
  REQUIRE(sc.conditions.d_r == sc.ee.d_r);
  REQUIRE_NOTHROW(sc.validate());

  const Scenario tilted = scenario_from_json(
      Json{{"name", "t"}, {"surface", {{"tilt_deg", 11.0}}}});
  REQUIRE(tilted.conditions.beta_max == Approx(deg2rad(11.0)).margin(1e-15));

  // explicit pin overrides the derived default
  const Scenario pinned = scenario_from_json(
      Json{{"name", "p"},
           {"surface", {{"tilt_deg", 11.0}}},
           {"conditions", {{"beta_max_deg", 6.0}}}});
  REQUIRE(pinned.conditions.beta_max == Approx(deg2rad(6.0)).margin(1e-15));
}

TEST_CASE("scenario validation catches inconsistent physics") {
  Json j{{"name", "v"}};
  j["dt_s"] = 0.0;
  REQUIRE_THROWS_AS(scenario_from_json(j).validate(), ConfigError);

  j = Json{{"name", "v"}, {"surface", {{"mu_s", 0.3}, {"mu_k", 0.4}}}};
  REQUIRE_THROWS_AS(scenario_from_json(j).validate(), ConfigError);

  j = Json{{"name", "v"}, {"surface", {{"tilt_deg", 50.0}}}};
  REQUIRE_THROWS_AS(scenario_from_json(j).validate(), ConfigError);

  j = Json{{"name", "v"}, {"disturbance", {{"type", "banana"}}}};
  REQUIRE_THROWS_AS(scenario_from_json(j).validate(), ConfigError);

  j = Json{{"name", "v"},
           {"phases", {{"standoff_gap_m", 0.06}, {"approach_start_gap_m", 0.05}}}};
  REQUIRE_THROWS_AS(scenario_from_json(j).validate(), ConfigError);
}

TEST_CASE("work surface construction from tilt angles") {
  Scenario sc;
  sc.surface.tilt_deg = 6.0;
  sc.surface.tilt_axis_deg = 0.0;
  sc.phases.approach_start_gap = 0.05;
  const Vec3 cc_start(0.0, 0.0, 0.1);
  const WorkSurface surf = make_surface(sc, cc_start);

  REQUIRE(surf.normal.vec().isApprox(
      Vec3(0.0, 0.10452846326765347, -0.99452189536827334), 1e-12));
  REQUIRE(surf.point.isApprox(
      Vec3(0.0, -0.0052264231633826736, 0.14972609476841367), 1e-12));
  // the starting CC sits exactly at the approach gap from the plane
  REQUIRE((cc_start - surf.point).dot(surf.normal.vec()) ==
          Approx(0.05).margin(1e-12));

  // zero tilt: plane normal points straight down at the vehicle
  sc.surface.tilt_deg = 0.0;
  REQUIRE(make_surface(sc, cc_start)
              .normal.vec()
              .isApprox(Vec3(0.0, 0.0, -1.0), 1e-12));
}

TEST_CASE("random disturbance torque is reproducible and bounded") {
  DisturbanceSpec d;
  d.type = "random";
  d.amplitude = 0.5;
  d.seed = 1;
  d.hold = 0.1;

  SECTION("same time, same torque") {
    REQUIRE(disturbance_torque(d, 0.3701)
                .isApprox(disturbance_torque(d, 0.3701), 0.0));
  }

  SECTION("piecewise constant over the hold interval") {
    REQUIRE(disturbance_torque(d, 0.301)
                .isApprox(disturbance_torque(d, 0.399), 0.0));
    REQUIRE_FALSE(disturbance_torque(d, 0.301)
                      .isApprox(disturbance_torque(d, 0.401), 0.0));
  }

  SECTION("seed changes the sequence") {
    DisturbanceSpec d2 = d;
    d2.seed = 2;
    REQUIRE_FALSE(disturbance_torque(d, 0.05)
                      .isApprox(disturbance_torque(d2, 0.05), 0.0));
  }

  SECTION("amplitude bounds the magnitude, torque stays in the x-y plane") {
    for (int k = 0; k < 200; ++k) {
      const Vec3 tau = disturbance_torque(d, 0.1 * k + 0.01);
      REQUIRE(tau.norm() <= d.amplitude + 1e-12);
      REQUIRE(tau.z() == 0.0);
    }
  }

  SECTION("other types") {
    DisturbanceSpec none;
    none.type = "none";
    REQUIRE(disturbance_torque(none, 1.0).norm() == 0.0);

    DisturbanceSpec c;
    c.type = "constant";
    c.amplitude = 0.2;
    REQUIRE(disturbance_torque(c, 1.0).isApprox(Vec3(0.2, 0.0, 0.0), 0.0));

    DisturbanceSpec s;
    s.type = "sinusoid";
    s.amplitude = 0.5;
    s.freq = 1.0;
    REQUIRE(disturbance_torque(s, 0.3).x() ==
            Approx(0.47552825814757679).margin(1e-12));
    REQUIRE(disturbance_torque(s, -0.1).norm() == 0.0);
  }
}

TEST_CASE("scenario hash is stable under key order and sensitive to values") {
  const Json a = {{"name", "h"}, {"dt_s", 1e-3}, {"duration_s", 10.0}};
  const Json b = {{"duration_s", 10.0}, {"name", "h"}, {"dt_s", 1e-3}};
  REQUIRE(scenario_hash(scenario_from_json(a)) ==
          scenario_hash(scenario_from_json(b)));

  Json c = a;
  c["duration_s"] = 10.001;
  REQUIRE(scenario_hash(scenario_from_json(a)) !=
          scenario_hash(scenario_from_json(c)));

  const std::string h = scenario_hash(scenario_from_json(a));
  REQUIRE(h.size() == 16);
  REQUIRE(h.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("load_scenario reads files and reports missing ones") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "passalign_test_scn";
  fs::create_directories(dir);
  const fs::path file = dir / "ok.json";
  std::ofstream(file) << R"({"name": "fromfile", "dt_s": 0.001})";
  const Scenario sc = load_scenario(file);
  REQUIRE(sc.name == "fromfile");
  REQUIRE_THROWS_AS(load_scenario(dir / "missing.json"), ConfigError);

  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  REQUIRE_THROWS(load_scenario(bad));
  fs::remove_all(dir);
}
