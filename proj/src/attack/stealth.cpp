#include "hta/attack/stealth.hpp"

#include <algorithm>
#include <cmath>

#include "hta/control/controller.hpp"
#include "hta/error.hpp"

namespace hta::attack {

SensorTrace apply_fdi(const SensorTrace& trace, const AttackVector& vector,
                      const AccessProfile& access, const HomeModel& home) {
  SensorTrace out = trace;
  const int Z = trace.num_zones;
  const int O = trace.num_occupants;
  const int D = trace.num_appliances;

  for (const auto& d : vector.co2) {
    if (!access.slot_ok(d.slot) || !access.zone_ok(d.zone))
      throw Error(ErrorKind::access_violation,
                  "co2 delta at slot " + std::to_string(d.slot) + " zone " +
                      std::to_string(d.zone) + " is outside the access profile");
    out.co2[d.slot * Z + d.zone] += d.delta;
  }
  for (const auto& d : vector.temp) {
    if (!access.slot_ok(d.slot) || !access.zone_ok(d.zone))
      throw Error(ErrorKind::access_violation,
                  "temp delta at slot " + std::to_string(d.slot) + " zone " +
                      std::to_string(d.zone) + " is outside the access profile");
    out.temp[d.slot * Z + d.zone] += d.delta;
  }
  for (const auto& m : vector.moves) {
    if (!access.slot_ok(m.slot) || !access.occupant_ok(m.occupant) ||
        !access.zone_ok(m.from_zone) || !access.zone_ok(m.to_zone))
      throw Error(ErrorKind::access_violation,
                  "occupant move at slot " + std::to_string(m.slot) +
                      " is outside the access profile");
    int64_t idx = m.slot * O + m.occupant;
    if (out.occupant_zone[idx] != m.from_zone)
      throw Error(ErrorKind::invalid,
                  "move at slot " + std::to_string(m.slot) + ": occupant " +
                      std::to_string(m.occupant) + " is not in zone " +
                      std::to_string(m.from_zone));
    out.occupant_zone[idx] = static_cast<int16_t>(m.to_zone);
    out.activity[idx] = static_cast<int16_t>(m.activity);
  }
  for (const auto& f : vector.flips) {
    if (!access.slot_ok(f.slot) || !access.appliance_ok(f.appliance))
      throw Error(ErrorKind::access_violation,
                  "appliance flip at slot " + std::to_string(f.slot) +
                      " is outside the access profile");
    int64_t idx = f.slot * D + f.appliance;
    if (out.appliance_on[idx])
      throw Error(ErrorKind::invalid,
                  "flip at slot " + std::to_string(f.slot) + ": appliance " +
                      std::to_string(f.appliance) + " is already on");
    out.appliance_on[idx] = 1;
  }
  (void)home;
  return out;
}

ReplayResult realtime_replay(const AttackSchedule& schedule, const TriggerPlan& plan,
                             const SensorTrace& actual, const HomeModel& home,
                             const AccessProfile& access) {
  if (schedule.num_slots != actual.num_slots ||
      schedule.num_occupants != actual.num_occupants)
    throw Error(ErrorKind::invalid, "schedule does not match the trace shape");

  ReplayResult result;
  result.attacked = actual;
  SensorTrace& attacked = result.attacked;
  const int Z = actual.num_zones;
  const int O = actual.num_occupants;
  const int D = actual.num_appliances;

  std::vector<uint8_t> zone_ok(home.num_zones(), 0);
  for (int z : access.zones) zone_ok[z] = 1;
  std::vector<uint8_t> occ_ok(home.num_occupants(), 0);
  for (int o : access.occupants) occ_ok[o] = 1;

  // Occupancy and activity deltas, gated per slot.
  for (int64_t t = 0; t < actual.num_slots; ++t) {
    if (!access.slot_ok(t)) continue;
    for (int o = 0; o < O; ++o) {
      if (!schedule.scheduled_at(t, o) || !occ_ok[o]) continue;
      int za = actual.zone_of(t, o);
      int zs = schedule.zone_at(t, o);
      if (!zone_ok[za] || !zone_ok[zs]) continue;
      if (zs == za) continue;
      int64_t idx = t * O + o;
      attacked.occupant_zone[idx] = static_cast<int16_t>(zs);
      attacked.activity[idx] = static_cast<int16_t>(schedule.activity_at(t, o));
      result.vector.moves.push_back({t, o, za, zs, schedule.activity_at(t, o)});
    }
  }

  // Appliance activations.
  for (const auto& e : plan.entries) {
    int64_t idx = e.slot * D + e.appliance;
    if (!attacked.appliance_on[idx]) {
      attacked.appliance_on[idx] = 1;
      result.vector.flips.push_back({e.slot, e.appliance});
    }
  }

  // IAQ deltas: each zone follows the actual series until its recurrence
  // inputs first diverge, then the balances are re-solved forward so the
  // attacked trace stays consistent on the attacker-held surface.
  std::vector<uint8_t> co2_div(Z, 0), temp_div(Z, 0);
  for (int64_t t = 1; t < actual.num_slots; ++t) {
    const int16_t* occ_prev = &attacked.occupant_zone[(t - 1) * O];
    const int16_t* act_prev = &attacked.activity[(t - 1) * O];
    const uint8_t* app_prev = &attacked.appliance_on[(t - 1) * D];
    const int16_t* occ_prev_b = &actual.occupant_zone[(t - 1) * O];
    const int16_t* act_prev_b = &actual.activity[(t - 1) * O];
    const uint8_t* app_prev_b = &actual.appliance_on[(t - 1) * D];
    const int16_t* occ_cur = &attacked.occupant_zone[t * O];
    const int16_t* act_cur = &attacked.activity[t * O];
    const uint8_t* app_cur = &attacked.appliance_on[t * D];
    const int16_t* occ_cur_b = &actual.occupant_zone[t * O];
    const int16_t* act_cur_b = &actual.activity[t * O];
    const uint8_t* app_cur_b = &actual.appliance_on[t * D];
    for (int z = 1; z < Z; ++z) {
      if (!zone_ok[z] || !access.slot_ok(t)) continue;
      const Zone& zone = home.zones[z];
      control::ZoneLoads prev = control::zone_loads(home, occ_prev, act_prev, app_prev, z);
      control::ZoneLoads prev_b =
          control::zone_loads(home, occ_prev_b, act_prev_b, app_prev_b, z);
      bool roll_co2 = co2_div[z] || prev.co2_rate != prev_b.co2_rate ||
                      prev.heat_w != prev_b.heat_w;

      double q_prev = 0;
      if (roll_co2 || temp_div[z] || true) {
        // q of the previous slot under attacked measurements; cheap enough
        // to compute unconditionally
        q_prev = control::zone_airflow(home, zone, prev, attacked.co2_at(t - 1, z),
                                       attacked.outdoor_co2[t - 1])
                     .q;
      }
      if (roll_co2) {
        double next_co2 =
            control::co2_next(home, zone, attacked.co2_at(t - 1, z), q_prev,
                              prev.co2_rate, attacked.outdoor_co2[t - 1]);
        if (next_co2 != actual.co2_at(t, z)) {
          attacked.co2[t * Z + z] = next_co2;
          result.vector.co2.push_back({t, z, next_co2 - actual.co2_at(t, z)});
        }
        co2_div[z] = 1;
      }

      control::ZoneLoads cur = control::zone_loads(home, occ_cur, act_cur, app_cur, z);
      control::ZoneLoads cur_b =
          control::zone_loads(home, occ_cur_b, act_cur_b, app_cur_b, z);
      bool roll_temp = temp_div[z] || roll_co2 || cur.heat_w != cur_b.heat_w;
      if (roll_temp) {
        double next_temp =
            control::temp_next(attacked.temp_at(t - 1, z), q_prev, cur.heat_w);
        if (next_temp != actual.temp_at(t, z)) {
          attacked.temp[t * Z + z] = next_temp;
          result.vector.temp.push_back({t, z, next_temp - actual.temp_at(t, z)});
        }
        temp_div[z] = 1;
      }
    }
  }
  return result;
}

StealthVerdict verify_stealth(const SensorTrace& original, const SensorTrace& attacked,
                              const HomeModel& home, const adm::AdmModel& model,
                              const AccessProfile& access) {
  if (original.num_slots != attacked.num_slots)
    throw Error(ErrorKind::invalid, "traces cover different slot ranges");
  StealthVerdict verdict;

  // (12) Attacked occupancy follows the clusters.
  for (const adm::StayEvent& e : adm::detect(attacked, model)) {
    bool in_scope = false;
    for (int64_t t = e.arrival; t <= e.exit && !in_scope; ++t)
      in_scope = access.slot_ok(t);
    if (!in_scope) continue;
    verdict.violations.push_back({"eq12", e.arrival, e.occupant, e.zone, 0,
                                  "stay of duration " + std::to_string(e.duration) +
                                      " outside every cluster"});
  }

  // (13) Occupant conservation per accessible slot.
  for (int64_t t = 0; t < original.num_slots; ++t) {
    if (!access.slot_ok(t)) continue;
    int before = 0, after = 0;
    for (int o : access.occupants) {
      if (access.zone_ok(original.zone_of(t, o))) ++before;
      if (access.zone_ok(attacked.zone_of(t, o))) ++after;
    }
    if (before != after)
      verdict.violations.push_back({"eq13", t, -1, -1, 0,
                                    "accessible presence sum changed from " +
                                        std::to_string(before) + " to " +
                                        std::to_string(after)});
  }

  // (14)/(15) Recurrence residuals over the accessible surface.
  std::vector<int> zone_scope;
  for (int z : access.zones)
    if (z != kOutsideZone) zone_scope.push_back(z);
  SlotSet slot_scope = access.slots;
  control::ResidualReport residuals =
      control::verify_physics(attacked, home, 1e-6, &slot_scope, &zone_scope);
  for (const auto& rv : residuals.violations)
    verdict.violations.push_back({rv.kind == 'C' ? "eq14" : "eq15", rv.slot, -1,
                                  rv.zone, rv.residual, "recurrence residual"});

  // (16) Appliance flips only in actually-unoccupied zones.
  for (int64_t t = 0; t < original.num_slots; ++t) {
    for (int d = 0; d < original.num_appliances; ++d) {
      if (original.appliance_at(t, d) == attacked.appliance_at(t, d)) continue;
      int z = home.appliances[d].zone;
      if (original.occupant_count(t, z) != 0)
        verdict.violations.push_back({"eq16", t, -1, z,
                                      0, "appliance " + std::to_string(d) +
                                             " flipped in an occupied zone"});
    }
  }

  verdict.stealthy = verdict.violations.empty();
  return verdict;
}

double attack_cost(const SensorTrace& attacked, const HomeModel& home) {
  return control::simulate(attacked, home).total_cost;
}

}  // namespace hta::attack
