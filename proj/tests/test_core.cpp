#include "doctest.h"
#include "fixtures.hpp"

#include "hta/core/model.hpp"
#include "hta/core/trace.hpp"

using namespace hta;

TEST_CASE("well-formed home validates clean") {
  HomeModel home = test::make_test_home();
  CHECK(validate_home(home).empty());
}

TEST_CASE("validate_home is idempotent and flags the right fields") {
  HomeModel home = test::make_test_home();

  SUBCASE("temp setpoint equal to supply air is singular") {
    home.zones[2].temp_setpoint_f = home.zones[2].supply_air_temp_f;
    auto v1 = validate_home(home);
    auto v2 = validate_home(home);
    REQUIRE(v1.size() == 1);
    CHECK(v1[0].field == "zones[2].temp_setpoint_f");
    CHECK(v1.size() == v2.size());  // no side effects
  }

  SUBCASE("appliance referencing a missing zone") {
    home.appliances[5].zone = 9;
    auto v = validate_home(home);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "appliances[5].zone");
  }

  SUBCASE("negative volume") {
    home.zones[1].volume_ft3 = -10;
    auto v = validate_home(home);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "zones[1].volume_ft3");
  }

  SUBCASE("slot grid must cover the day") {
    home.slots_per_day = 1000;
    CHECK(!validate_home(home).empty());
  }

  SUBCASE("idle activity must have zero rates") {
    home.activities[0].co2_emission = 5;
    CHECK(!validate_home(home).empty());
  }
}

TEST_CASE("occupant_count_from_tracking") {
  HomeModel home = test::make_test_home();
  SensorTrace trace;
  trace.resize(10, home);
  for (int64_t t = 0; t < 10; ++t)
    for (int z = 1; z < trace.num_zones; ++z) trace.co2[t * trace.num_zones + z] = 800;

  SUBCASE("everyone outside gives zero conditioned counts") {
    auto counts = occupant_count_from_tracking(trace);
    for (int64_t t = 0; t < 10; ++t)
      for (int z = 1; z < trace.num_zones; ++z) CHECK(counts[t * trace.num_zones + z] == 0);
    CHECK(counts[0 * trace.num_zones + 0] == 2);
  }

  SUBCASE("single placement shows up") {
    trace.occupant_zone[5 * 2 + 0] = 2;
    auto counts = occupant_count_from_tracking(trace);
    CHECK(counts[5 * trace.num_zones + 2] == 1);
    CHECK(counts[5 * trace.num_zones + 0] == 1);
  }

  SUBCASE("two occupants in one zone") {
    trace.occupant_zone[0 * 2 + 0] = 1;
    trace.occupant_zone[0 * 2 + 1] = 1;
    auto counts = occupant_count_from_tracking(trace);
    CHECK(counts[0 * trace.num_zones + 1] == 2);
  }

  SUBCASE("total presence is conserved across slots") {
    trace.occupant_zone[3 * 2 + 0] = 4;
    trace.occupant_zone[7 * 2 + 1] = 2;
    auto counts = occupant_count_from_tracking(trace);
    for (int64_t t = 0; t < 10; ++t) {
      int total = 0;
      for (int z = 0; z < trace.num_zones; ++z) total += counts[t * trace.num_zones + z];
      CHECK(total == home.num_occupants());
    }
  }
}

TEST_CASE("trace validation catches bad ids and non-positive co2") {
  HomeModel home = test::make_test_home();
  SensorTrace trace;
  trace.resize(5, home);
  for (int64_t t = 0; t < 5; ++t)
    for (int z = 1; z < trace.num_zones; ++z) trace.co2[t * trace.num_zones + z] = 700;
  CHECK(validate_trace(trace, home).empty());

  SUBCASE("zone id out of range") {
    trace.occupant_zone[0] = 9;
    CHECK(!validate_trace(trace, home).empty());
  }
  SUBCASE("co2 must be positive") {
    trace.co2[1 * trace.num_zones + 2] = 0;
    CHECK(!validate_trace(trace, home).empty());
  }
}

TEST_CASE("slot sets merge and answer membership") {
  SlotSet s;
  s.add(10, 20);
  s.add(15, 30);
  s.add(40, 45);
  CHECK(s.contains(10));
  CHECK(s.contains(29));
  CHECK(!s.contains(30));
  CHECK(s.contains(44));
  CHECK(!s.contains(39));
  CHECK(s.intervals().size() == 2);
  CHECK(SlotSet::all().contains(123456));
}

TEST_CASE("access profile validation and full profile") {
  HomeModel home = test::make_test_home();
  AccessProfile full = AccessProfile::full(home);
  CHECK(full.validate(home).empty());
  CHECK(full.zone_ok(0));
  CHECK(full.zone_ok(4));
  CHECK(full.appliance_ok(12));

  AccessProfile bad;
  bad.zones = {7};
  CHECK(!bad.validate(home).empty());
}
