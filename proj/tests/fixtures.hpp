#pragma once

#include <vector>

#include "hta/core/model.hpp"
#include "hta/core/trace.hpp"
#include "hta/io/io.hpp"

namespace hta::test {

// Outside + 4 conditioned zones, 2 occupants, 13 appliances (a standby load
// per conditioned zone keeps airflow positive everywhere). Bedroom=1,
// living=2, kitchen=3, bathroom=4. Activities: 1 sleeping, 2 relaxing,
// 3 cooking, 4 showering, 5 chores.
inline HomeModel make_test_home() {
  HomeModel home;
  home.name = "test_home";
  home.sampling_minutes = 1;
  home.slots_per_day = 1440;

  auto zone = [](int id, const char* name, double vol, double ts, double tm,
                 std::vector<int> acts) {
    Zone z;
    z.id = id;
    z.name = name;
    z.volume_ft3 = vol;
    z.co2_setpoint_ppm = 800;
    z.temp_setpoint_f = ts;
    z.supply_air_temp_f = 55;
    z.mixed_air_temp_f = tm;
    z.allowed_activities = std::move(acts);
    return z;
  };
  Zone outside;
  outside.id = 0;
  outside.name = "outside";
  outside.allowed_activities = {0};
  home.zones.push_back(outside);
  home.zones.push_back(zone(1, "bedroom", 1500, 74, 78, {0, 1}));
  home.zones.push_back(zone(2, "living", 2400, 75, 78, {0, 2, 5}));
  home.zones.push_back(zone(3, "kitchen", 1000, 76, 80, {0, 3, 5}));
  home.zones.push_back(zone(4, "bathroom", 400, 74, 78, {0, 4}));

  home.occupants.push_back({0, "resident_a", 1.0});
  home.occupants.push_back({1, "resident_b", 0.9});

  auto act = [](int id, const char* name, double ce, double hr) {
    return ActivityProfile{id, name, ce, hr};
  };
  home.activities.push_back(act(0, "idle", 0, 0));
  home.activities.push_back(act(1, "sleeping", 8000, 70));
  home.activities.push_back(act(2, "relaxing", 10000, 100));
  home.activities.push_back(act(3, "cooking", 15000, 180));
  home.activities.push_back(act(4, "showering", 12000, 150));
  home.activities.push_back(act(5, "chores", 13000, 160));

  auto appl = [](int id, const char* name, int zone, double w, double hrf,
                 bool trig, bool always) {
    return Appliance{id, name, zone, w, hrf, trig, always};
  };
  home.appliances.push_back(appl(0, "standby_bedroom", 1, 30, 0.5, false, true));
  home.appliances.push_back(appl(1, "standby_living", 2, 35, 0.5, false, true));
  home.appliances.push_back(appl(2, "standby_kitchen", 3, 40, 0.5, false, true));
  home.appliances.push_back(appl(3, "standby_bathroom", 4, 25, 0.5, false, true));
  home.appliances.push_back(appl(4, "tv", 2, 150, 0.6, true, false));
  home.appliances.push_back(appl(5, "oven", 3, 2000, 0.7, true, false));
  home.appliances.push_back(appl(6, "microwave", 3, 1100, 0.5, true, false));
  home.appliances.push_back(appl(7, "dishwasher", 3, 1300, 0.3, true, false));
  home.appliances.push_back(appl(8, "kettle", 3, 1500, 0.6, true, false));
  home.appliances.push_back(appl(9, "washer", 4, 500, 0.3, true, false));
  home.appliances.push_back(appl(10, "dryer", 4, 3000, 0.6, true, false));
  home.appliances.push_back(appl(11, "lamp", 1, 20, 0.12, true, false));
  home.appliances.push_back(appl(12, "fan", 2, 75, 0.4, true, false));

  home.tariff.offpeak_rate = 0.20;
  home.tariff.peak_rate = 0.45;
  home.tariff.battery_kwh = 0.3;
  for (int s = 1020; s < 1260; ++s) home.tariff.peak_slots.push_back(s);
  return home;
}

// Daily routine stencil: night in the bedroom, morning bathroom/kitchen,
// work hours outside, evening kitchen then living room, back to bed. Tight
// dwell jitter keeps the (arrival, duration) habit clusters compact.
inline io::SynthConfig make_test_synth(const HomeModel& home, uint64_t seed = 1) {
  io::SynthConfig cfg;
  cfg.seed = seed;
  const int Z = home.num_zones();

  auto band = [&](int start, std::vector<std::pair<int, int>> route) {
    io::SynthBand b;
    b.start_slot = start;
    b.transition.assign(Z, std::vector<double>(Z, 0.0));
    std::vector<bool> routed(Z, false);
    for (auto [from, to] : route) {
      b.transition[from][to] = 1.0;
      routed[from] = true;
    }
    for (int z = 0; z < Z; ++z)
      if (!routed[z]) b.transition[z][z] = 1.0;
    return b;
  };

  // zones: 0 outside, 1 bedroom, 2 living, 3 kitchen, 4 bathroom. Late
  // risers still pass through the bathroom and kitchen so every conditioned
  // zone is re-occupied daily and zone CO2 never fully decays to outdoor.
  cfg.bands.push_back(band(0, {{2, 1}, {3, 1}, {4, 1}, {0, 1}}));          // night
  cfg.bands.push_back(band(360, {{1, 4}, {4, 3}, {3, 0}}));                // morning
  cfg.bands.push_back(band(510, {{1, 4}, {4, 3}, {3, 0}, {2, 0}}));        // work
  cfg.bands.push_back(band(1020, {{0, 3}, {3, 2}, {2, 2}}));               // evening
  cfg.bands.push_back(band(1320, {{0, 1}, {2, 1}, {3, 1}, {4, 1}}));       // bedtime

  cfg.dwell_range.assign(Z, {60, 80});
  cfg.dwell_range[0] = {230, 250};  // outside
  cfg.dwell_range[1] = {320, 340};  // bedroom
  cfg.dwell_range[2] = {110, 130};  // living
  cfg.dwell_range[3] = {45, 60};    // kitchen
  cfg.dwell_range[4] = {20, 28};    // bathroom

  cfg.activity_weights.assign(Z, std::vector<double>(home.num_activities(), 0.0));
  cfg.activity_weights[0][0] = 1.0;
  cfg.activity_weights[1][1] = 1.0;
  cfg.activity_weights[2][2] = 0.7;
  cfg.activity_weights[2][5] = 0.3;
  cfg.activity_weights[3][3] = 0.8;
  cfg.activity_weights[3][5] = 0.2;
  cfg.activity_weights[4][4] = 1.0;

  cfg.start_zone = {1, 1};
  cfg.linked_activity.assign(home.num_appliances(), -1);
  cfg.linked_activity[4] = 2;   // tv while relaxing
  cfg.linked_activity[5] = 3;   // oven while cooking
  cfg.outdoor_co2_ppm = 420;
  cfg.outdoor_temp_mean_f = 70;
  cfg.outdoor_temp_swing_f = 12;
  return cfg;
}

// Outside + 2 conditioned zones, 1 occupant, standby loads only.
inline HomeModel make_tiny_home() {
  HomeModel home = make_test_home();
  home.name = "tiny_home";
  home.zones.resize(3);
  home.occupants.resize(1);
  home.appliances.clear();
  home.appliances.push_back({0, "standby_bedroom", 1, 30, 0.5, false, true});
  home.appliances.push_back({1, "standby_living", 2, 35, 0.5, false, true});
  home.appliances.push_back({2, "heater", 2, 900, 0.8, true, false});
  return home;
}

inline io::SynthConfig make_tiny_synth(const HomeModel& home, uint64_t seed = 1) {
  io::SynthConfig cfg;
  cfg.seed = seed;
  const int Z = home.num_zones();
  io::SynthBand day;
  day.start_slot = 0;
  day.transition.assign(Z, std::vector<double>(Z, 0.0));
  day.transition[0][1] = 1.0;
  day.transition[1][2] = 1.0;
  day.transition[2][0] = 1.0;
  cfg.bands.push_back(day);
  cfg.dwell_range.assign(Z, {90, 110});
  cfg.activity_weights.assign(Z, std::vector<double>(home.num_activities(), 0.0));
  cfg.activity_weights[0][0] = 1.0;
  cfg.activity_weights[1][1] = 1.0;
  cfg.activity_weights[2][2] = 1.0;
  cfg.start_zone = {1};
  cfg.linked_activity.assign(home.num_appliances(), -1);
  return cfg;
}

}  // namespace hta::test
