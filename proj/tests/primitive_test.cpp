#include <catch2/catch.hpp>

#include "surfwarp/primitive.hpp"

using namespace surfwarp;

TEST_CASE("extract_primitive lays out a touch-lift-advance-touch cycle") {
  PrimitiveConfig config;
  config.waypoint_count = 4;
  config.lift_height = 0.05;
  config.period_length = 0.2;
  const PeriodicPrimitive prim = extract_primitive(config);

  REQUIRE(prim.waypoints.size() == 4);
  CHECK(prim.waypoints[0].tip_offset.x() == Approx(0.0));
  CHECK(prim.waypoints[1].tip_offset.x() == Approx(0.2 / 3.0));
  CHECK(prim.waypoints[2].tip_offset.x() == Approx(0.4 / 3.0));
  CHECK(prim.waypoints[3].tip_offset.x() == Approx(0.2).epsilon(1e-6));
  CHECK(prim.waypoints[3].tip_offset.x() < 0.2);

  CHECK(prim.waypoints[0].tip_offset.z() == 0.0);
  CHECK(prim.waypoints[1].tip_offset.z() == Approx(0.05));
  CHECK(prim.waypoints[2].tip_offset.z() == Approx(0.05));
  CHECK(prim.waypoints[3].tip_offset.z() == 0.0);

  CHECK(prim.waypoints[0].contact);
  CHECK_FALSE(prim.waypoints[1].contact);
  CHECK_FALSE(prim.waypoints[2].contact);
  CHECK(prim.waypoints[3].contact);
}

TEST_CASE("zero lift marks every waypoint as contact") {
  PrimitiveConfig config;
  config.waypoint_count = 6;
  config.lift_height = 0.0;
  const PeriodicPrimitive prim = extract_primitive(config);
  for (const auto& wp : prim.waypoints) {
    CHECK(wp.contact);
    CHECK(wp.tip_offset.z() == 0.0);
  }
}

TEST_CASE("three waypoints is the minimum and yields one free waypoint") {
  PrimitiveConfig config;
  config.waypoint_count = 3;
  config.lift_height = 0.02;
  const PeriodicPrimitive prim = extract_primitive(config);
  REQUIRE(prim.waypoints.size() == 3);
  int free = 0;
  for (const auto& wp : prim.waypoints) free += wp.contact ? 0 : 1;
  CHECK(free == 1);

  config.waypoint_count = 2;
  CHECK_THROWS_AS(extract_primitive(config), std::invalid_argument);
}

TEST_CASE("primitive validation") {
  PrimitiveConfig config;
  config.period_length = 0.0;
  CHECK_THROWS_AS(extract_primitive(config), std::invalid_argument);

  PeriodicPrimitive prim;
  prim.period_length = 0.1;
  prim.tool_length = 0.1;
  prim.waypoints = {{Vec3(0, 0, 0.1), false},
                    {Vec3(0.05, 0, 0.1), false},
                    {Vec3(0.09, 0, 0.1), false}};
  CHECK_THROWS_AS(prim.validate(), std::invalid_argument);
}
