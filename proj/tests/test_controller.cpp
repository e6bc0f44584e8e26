#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"

#include "hta/control/controller.hpp"
#include "hta/error.hpp"
#include "hta/io/io.hpp"
#include "hta/rng.hpp"

using namespace hta;
using namespace hta::control;

namespace {

Zone reference_zone() {
  Zone z;
  z.id = 1;
  z.volume_ft3 = 1000;
  z.co2_setpoint_ppm = 800;
  z.temp_setpoint_f = 75;
  z.supply_air_temp_f = 55;
  z.mixed_air_temp_f = 75;
  return z;
}

HomeModel bare_home() {
  HomeModel home;
  home.sampling_minutes = 1;
  home.slots_per_day = 1440;
  return home;
}

}  // namespace

TEST_CASE("ventilation airflow solves the printed balance") {
  HomeModel home = bare_home();
  Zone zone = reference_zone();
  ZoneLoads loads;

  SUBCASE("zero demand at setpoint gives zero airflow") {
    loads.co2_rate = 0;
    CHECK(solve_vent_airflow(home, zone, loads, 800, 400) == 0.0);
  }

  SUBCASE("worked example: 224 cfm") {
    loads.occupant_count = 1;
    loads.co2_rate = 12000;
    double q = solve_vent_airflow(home, zone, loads, 900, 400);
    CHECK(q == doctest::Approx(224.0).epsilon(1e-12));
    // back-substitution residual of the balance
    double lhs = loads.co2_rate * 1.0 / zone.volume_ft3;
    double rhs = zone.co2_setpoint_ppm - (1.0 - q / zone.volume_ft3) * 900 -
                 (q * 1.0 / zone.volume_ft3) * 400;
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }

  SUBCASE("denominator at zero is singular") {
    loads.co2_rate = 10000;
    CHECK_THROWS_AS(solve_vent_airflow(home, zone, loads, 400, 400), Error);
  }
}

TEST_CASE("temperature airflow solves the heat balance") {
  HomeModel home = bare_home();
  Zone zone = reference_zone();
  ZoneLoads loads;

  SUBCASE("no load, no airflow") {
    CHECK(solve_temp_airflow(home, zone, loads) == 0.0);
  }

  SUBCASE("one occupant at 100 W") {
    loads.heat_w = 100;
    CHECK(solve_temp_airflow(home, zone, loads) ==
          doctest::Approx(100.0 / (20 * 0.3167)).epsilon(1e-9));
    CHECK(solve_temp_airflow(home, zone, loads) == doctest::Approx(15.787).epsilon(1e-3));
  }

  SUBCASE("1000 W appliance radiating 12 percent") {
    loads.heat_w = 1000 * 0.12;
    CHECK(solve_temp_airflow(home, zone, loads) == doctest::Approx(18.946).epsilon(1e-3));
  }
}

TEST_CASE("served airflow is the max of both demands") {
  HomeModel home = bare_home();
  Zone zone = reference_zone();
  ZoneLoads loads;
  loads.occupant_count = 1;
  loads.co2_rate = 12000;
  loads.heat_w = 100;
  AirflowSolution s = zone_airflow(home, zone, loads, 900, 400);
  CHECK(s.q == doctest::Approx(224.0));
  CHECK(s.q_temp == doctest::Approx(15.787).epsilon(1e-3));

  SUBCASE("both zero") {
    ZoneLoads none;
    AirflowSolution z = zone_airflow(home, zone, none, 800, 400);
    CHECK(z.q == 0.0);
  }

  SUBCASE("negative vent demand clamps and temp wins") {
    ZoneLoads mild;
    mild.heat_w = 5 * (20 * 0.3167);  // q_temp = 5 cfm
    AirflowSolution z = zone_airflow(home, zone, mild, 700, 400);  // below setpoint
    CHECK(z.q_vent == 0.0);
    CHECK(z.q == doctest::Approx(5.0));
  }
}

TEST_CASE("slot consumption matches hand evaluation") {
  HomeModel home = bare_home();
  Zone zone = reference_zone();
  zone.mixed_air_temp_f = 75;  // TM - TSP = 20
  home.zones.push_back(Zone{});
  home.zones[0].id = 0;
  home.zones.push_back(zone);
  home.zones[1].id = 1;

  std::vector<AirflowSolution> flows(2);
  std::vector<uint8_t> appliances;

  SUBCASE("all zero") {
    CHECK(slot_consumption(home, flows, appliances.data()) == 0.0);
  }

  SUBCASE("100 cfm at 20F") {
    flows[1].q = 100;
    CHECK(slot_consumption(home, flows, appliances.data()) ==
          doctest::Approx(0.0105567).epsilon(1e-7));
  }

  SUBCASE("600 W appliance adds 0.01 kWh") {
    flows[1].q = 100;
    home.appliances.push_back({0, "a", 1, 600, 0.5, false, false});
    appliances = {1};
    double kwh = slot_consumption(home, flows, appliances.data());
    CHECK(kwh - 100 * 20 * 0.3167 / 60000.0 == doctest::Approx(0.01).epsilon(1e-12));
  }
}

TEST_CASE("billing applies the battery to each day's peak window") {
  Tariff tariff;
  tariff.offpeak_rate = 0.2;
  tariff.peak_rate = 0.5;
  tariff.battery_kwh = 3;
  tariff.peak_slots = {5, 6, 7};

  SUBCASE("zero consumption bills zero") {
    std::vector<double> cons(10, 0.0);
    CHECK(billing(cons, tariff, 10).total == 0.0);
  }

  SUBCASE("battery covering everything keeps the off-peak rate") {
    std::vector<double> cons(10, 0.5);
    tariff.battery_kwh = 10;
    BillingResult r = billing(cons, tariff, 10);
    CHECK(r.total == doctest::Approx(0.2 * 5.0).epsilon(1e-12));
  }

  SUBCASE("boundary slot crossing the battery bills entirely at peak") {
    std::vector<double> cons(10, 0.0);
    cons[5] = cons[6] = cons[7] = 2.0;
    BillingResult r = billing(cons, tariff, 10);
    CHECK(r.slot_cost[5] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(r.slot_cost[6] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.slot_cost[7] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.total == doctest::Approx(2.4).epsilon(1e-9));
  }

  SUBCASE("battery recharges at the next day's peak window") {
    std::vector<double> cons(20, 0.0);
    cons[5] = 2.0;
    cons[15] = 2.0;  // next day, cumulative must reset
    BillingResult r = billing(cons, tariff, 10);
    CHECK(r.slot_cost[15] == doctest::Approx(0.4).epsilon(1e-12));
  }

  SUBCASE("pointwise-larger consumption never bills less") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a(10), b(10);
      for (int i = 0; i < 10; ++i) {
        a[i] = rng.uniform(0, 2);
        b[i] = a[i] + rng.uniform(0, 1);
      }
      CHECK(billing(b, tariff, 10).total >= billing(a, tariff, 10).total - 1e-12);
    }
  }
}

TEST_CASE("back-substitution residuals stay below 1e-9 on random states") {
  HomeModel home = bare_home();
  Rng rng(4242);
  for (int i = 0; i < 10000; ++i) {
    Zone zone = reference_zone();
    zone.volume_ft3 = rng.uniform(300, 4000);
    zone.co2_setpoint_ppm = rng.uniform(600, 1100);
    zone.temp_setpoint_f = rng.uniform(68, 78);
    zone.supply_air_temp_f = rng.uniform(50, 60);
    ZoneLoads loads;
    loads.occupant_count = static_cast<int>(rng.uniform_int(0, 4));
    loads.co2_rate = loads.occupant_count * rng.uniform(5000, 20000);
    loads.heat_w = rng.uniform(0, 2500);
    double co2 = rng.uniform(500, 1500);
    double oc = rng.uniform(350, 450);
    if (std::abs(co2 - oc) < 1.0) continue;

    double qv = solve_vent_airflow(home, zone, loads, co2, oc);
    if (qv > 0) {
      double lhs = loads.co2_rate * 1.0 / zone.volume_ft3;
      double rhs = zone.co2_setpoint_ppm - (1.0 - qv / zone.volume_ft3) * co2 -
                   (qv * 1.0 / zone.volume_ft3) * oc;
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
    double qt = solve_temp_airflow(home, zone, loads);
    if (qt > 0) {
      double back = qt * (zone.temp_setpoint_f - zone.supply_air_temp_f) * 0.3167;
      CHECK(std::abs(back - loads.heat_w) <= 1e-9);
    }
  }
}

TEST_CASE("airflow is monotone in occupancy and load") {
  HomeModel home = bare_home();
  Zone zone = reference_zone();
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    ZoneLoads a;
    a.co2_rate = rng.uniform(0, 30000);
    a.heat_w = rng.uniform(0, 2000);
    ZoneLoads b = a;
    b.co2_rate += rng.uniform(0, 5000);
    b.heat_w += rng.uniform(0, 500);
    double co2 = rng.uniform(820, 1400);
    AirflowSolution qa = zone_airflow(home, zone, a, co2, 400);
    AirflowSolution qb = zone_airflow(home, zone, b, co2, 400);
    CHECK(qb.q >= qa.q - 1e-12);
  }
}

TEST_CASE("simulate: all-outside trace costs the appliance baseline") {
  HomeModel home = test::make_test_home();
  SensorTrace trace;
  trace.resize(1440, home);
  for (int64_t t = 0; t < 1440; ++t) {
    for (int z = 1; z < trace.num_zones; ++z) {
      trace.co2[t * trace.num_zones + z] = home.zones[z].co2_setpoint_ppm;
      trace.temp[t * trace.num_zones + z] = home.zones[z].temp_setpoint_f;
    }
    trace.outdoor_co2[t] = 420;
    trace.outdoor_temp[t] = 70;
    // standby appliances stay on
    for (const Appliance& d : home.appliances)
      trace.appliance_on[t * trace.num_appliances + d.id] = d.always_on ? 1 : 0;
  }
  ControlLog log = simulate(trace, home);
  // standby loads force a small positive airflow, so cost strictly exceeds
  // the pure appliance term but stays small
  double appl_kwh = (30 + 35 + 40 + 25) / 60000.0 * 1440;
  CHECK(log.total_cost > 0.2 * appl_kwh * 0.99);
  for (int64_t t = 0; t < 1440; ++t) {
    CHECK(log.consumption_kwh[t] >= appl_kwh / 1440 - 1e-12);
    for (int z = 1; z < trace.num_zones; ++z) CHECK(log.at(t, z).q >= 0);
  }
}

TEST_CASE("synthetic traces satisfy the verification recurrences everywhere") {
  HomeModel home = test::make_test_home();
  io::SynthConfig cfg = test::make_test_synth(home, 11);
  SensorTrace trace = io::synth_trace(home, cfg, 2);
  ResidualReport report = verify_physics(trace, home);
  CHECK(report.checked > 0);
  CHECK(report.violations.empty());
  CHECK(report.max_residual <= 1e-6);
}

TEST_CASE("doubling heat radiation never lowers the total cost") {
  HomeModel home = test::make_test_home();
  io::SynthConfig cfg = test::make_test_synth(home, 3);
  SensorTrace trace = io::synth_trace(home, cfg, 1);
  ControlLog base = simulate(trace, home);

  HomeModel hotter = home;
  for (ActivityProfile& a : hotter.activities) a.heat_radiation_w *= 2;
  // regenerate so the sensor series stays consistent with the new physics
  SensorTrace trace2 = io::synth_trace(hotter, cfg, 1);
  ControlLog more = simulate(trace2, hotter);
  CHECK(more.total_cost >= base.total_cost - 1e-9);
}
