#include "hta/attack/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hta/control/controller.hpp"
#include "hta/error.hpp"

namespace hta::attack {

const char* to_string(AssignCheck check) {
  switch (check) {
    case AssignCheck::ok: return "ok";
    case AssignCheck::blocked_gate: return "access gate (slot passes through)";
    case AssignCheck::blocked_zone: return "zone outside the accessible set";
    case AssignCheck::blocked_max_stay: return "Eq. 19: stay would exceed its cap";
    case AssignCheck::blocked_exit_range: return "Eq. 20: exit duration not in range";
    case AssignCheck::blocked_fresh_stay: return "Eq. 19: no completable stay from this arrival";
  }
  return "unknown";
}

World::World(const SensorTrace& actual, const HomeModel& home,
             const adm::AdmModel& model, const AccessProfile& access,
             const std::vector<uint8_t>* appliance_overlay)
    : actual_(actual), home_(home), model_(model), access_(access) {
  if (home.num_zones() > kMaxZones)
    throw Error(ErrorKind::config, "attack search supports at most " +
                                       std::to_string(kMaxZones) + " zones");
  if (home.num_occupants() > kMaxOccupants)
    throw Error(ErrorKind::config, "attack search supports at most " +
                                       std::to_string(kMaxOccupants) + " occupants");

  const int Z = home.num_zones();
  const int64_t N = actual.num_slots;
  const double dt = home.sampling_minutes;

  appliance_on_ = actual.appliance_on;
  overlay_diff_.assign(N * Z, 0);
  if (appliance_overlay) {
    if (appliance_overlay->size() != appliance_on_.size())
      throw Error(ErrorKind::invalid, "appliance overlay size mismatch");
    for (int64_t t = 0; t < N; ++t) {
      for (const Appliance& d : home.appliances) {
        int64_t idx = t * actual.num_appliances + d.id;
        if ((*appliance_overlay)[idx] && !appliance_on_[idx]) {
          appliance_on_[idx] = 1;
          overlay_diff_[t * Z + d.zone] = 1;
        }
      }
    }
  }

  zone_mask_.assign(Z, 0);
  for (int z : access.zones) zone_mask_[z] = 1;
  occupant_mask_.assign(home.num_occupants(), 0);
  for (int o : access.occupants) occupant_mask_[o] = 1;
  zones_sorted_ = access.zones;
  std::sort(zones_sorted_.begin(), zones_sorted_.end());

  // Benign rollout: per-zone HVAC kWh and loads (reused verbatim until a
  // zone diverges), appliance kWh with the overlay, and billing state. The
  // summation order mirrors controller::simulate so values agree exactly.
  bg_hvac_.assign(N * Z, 0.0);
  actual_co2_rate_.assign(N * Z, 0.0);
  actual_heat_.assign(N * Z, 0.0);
  appliance_kwh_.assign(N, 0.0);
  benign_peak_cum_.assign(N, 0.0);

  std::vector<double> consumption(N, 0.0);
  for (int64_t t = 0; t < N; ++t) {
    const int16_t* occ = &actual.occupant_zone[t * actual.num_occupants];
    const int16_t* act = &actual.activity[t * actual.num_occupants];
    const uint8_t* app_actual = &actual.appliance_on[t * actual.num_appliances];
    const uint8_t* app_over = &appliance_on_[t * actual.num_appliances];
    double kwh = 0;
    for (int z = 1; z < Z; ++z) {
      control::ZoneLoads loads = control::zone_loads(home, occ, act, app_actual, z);
      actual_co2_rate_[t * Z + z] = loads.co2_rate;
      actual_heat_[t * Z + z] = loads.heat_w;
      AirflowSolution q;
      try {
        q = control::zone_airflow(home, home.zones[z], loads, actual.co2_at(t, z),
                                  actual.outdoor_co2[t]);
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (slot " + std::to_string(t) +
                                  ", zone " + std::to_string(z) + ")");
      }
      double term = q.q *
                    (home.zones[z].mixed_air_temp_f - home.zones[z].supply_air_temp_f) *
                    control::kCfmDegFToWatt * dt / 60000.0;
      bg_hvac_[t * Z + z] = term;
      kwh += term;
    }
    double app_kwh = 0;
    for (const Appliance& d : home.appliances) {
      if (app_over[d.id]) {
        kwh += d.power_w * dt / 60000.0;
        app_kwh += d.power_w * dt / 60000.0;
      }
    }
    appliance_kwh_[t] = app_kwh;
    consumption[t] = kwh;
  }
  control::BillingResult bill =
      control::billing(consumption, home.tariff, home.slots_per_day);
  benign_peak_cum_ = std::move(bill.cumulative_peak_kwh);

  compute_value_bound();
  compute_safety();
}

void World::compute_value_bound() {
  // Admissible per-slot dollar cap, exhausting occupant placement patterns
  // when their count is small. Reachable attacked CO2 stays within
  // [min(C0, CS), max(C0, CS)]: the exact solve pins the next measurement to
  // the setpoint and the clamped branch only grows it toward the setpoint,
  // so a fixed denominator floor bounds the ventilation demand. Appliance
  // schedules are fixed per slot and each slot is capped at its own tariff
  // rate with battery-certain peak slots kept at the off-peak rate.
  const double dt = home_.sampling_minutes;
  const int Z = home_.num_zones();
  const int64_t N = actual_.num_slots;
  bool bounded = true;

  double oc_max = 0;
  for (int64_t t = 0; t < N; ++t)
    oc_max = std::max(oc_max, actual_.outdoor_co2[t]);

  std::vector<double> coef(Z, 0.0);  // kWh per cfm per slot
  std::vector<double> zone_static_value(Z, 0.0);
  for (int z = 1; z < Z; ++z) {
    if (!zone_mask_[z]) continue;
    const Zone& zone = home_.zones[z];
    coef[z] = (zone.mixed_air_temp_f - zone.supply_air_temp_f) *
              control::kCfmDegFToWatt * dt / 60000.0;
  }

  // Vent demand cap for a zone holding occupants emitting ce_sum. The true
  // quotient's derivative in C has constant sign, so the maximum over the
  // reachable CO2 interval sits at an endpoint; each endpoint is evaluated
  // coherently with its own denominator (smallest via the largest outdoor
  // level). Positive demand over a vanishing denominator means no finite
  // cap exists.
  bool unbounded_zone = false;
  auto qv_cap = [&](int z, double ce_sum) {
    const Zone& zone = home_.zones[z];
    double c0 = actual_.co2_at(0, z);
    double c_lo = std::min(c0, zone.co2_setpoint_ppm);
    double c_hi = std::max(c0, zone.co2_setpoint_ppm);
    auto at = [&](double c) {
      double num = ce_sum * dt - zone.volume_ft3 * (zone.co2_setpoint_ppm - c);
      double den = home_.co2_balance_verbatim ? c - dt * oc_max : dt * (c - oc_max);
      if (den <= 1e-9) {
        if (num > 0) unbounded_zone = true;
        return 0.0;
      }
      return std::max(num / den, 0.0);
    };
    return std::max(at(c_lo), at(c_hi));
  };

  const int O = home_.num_occupants();
  std::vector<double> ce_max(O, 0.0), hr_max(O, 0.0);
  for (int o = 0; o < O; ++o) {
    for (int a = 0; a < home_.num_activities(); ++a) {
      ce_max[o] = std::max(ce_max[o], home_.co2_rate(o, a));
      hr_max[o] = std::max(hr_max[o], home_.heat_rate(o, a));
    }
  }

  // Static zone ranking (per-occupant best marginal) for search ordering.
  for (int z = 1; z < Z; ++z) {
    if (!zone_mask_[z]) continue;
    const Zone& zone = home_.zones[z];
    for (int o = 0; o < O; ++o) {
      double qv = qv_cap(z, ce_max[o]);
      double qt = hr_max[o] / ((zone.temp_setpoint_f - zone.supply_air_temp_f) *
                               control::kCfmDegFToWatt);
      zone_static_value[z] = std::max(zone_static_value[z], coef[z] * std::max(qv, qt));
    }
  }
  zones_by_value_ = zones_sorted_;
  std::stable_sort(zones_by_value_.begin(), zones_by_value_.end(),
                   [&](int a, int b) { return zone_static_value[a] > zone_static_value[b]; });

  if (!bounded) {
    dollar_cap_prefix_.clear();
    return;
  }

  // Occupant placement patterns over the accessible conditioned zones plus
  // "elsewhere"; exhaustive when small, otherwise one shared additive cap.
  std::vector<int> pattern_zones;
  for (int z : zones_sorted_)
    if (z != kOutsideZone) pattern_zones.push_back(z);
  const int P = static_cast<int>(pattern_zones.size()) + 1;  // + elsewhere
  double patterns_count = 1;
  for (int o = 0; o < O; ++o) patterns_count *= P;
  const bool enumerate_patterns = patterns_count <= 4096;

  std::vector<double> appl_heat_slot(Z, 0.0);
  std::vector<double> kwh_cap(N, 0.0);
  for (int64_t t = 0; t < N; ++t) {
    std::fill(appl_heat_slot.begin(), appl_heat_slot.end(), 0.0);
    const uint8_t* app = &appliance_on_[t * actual_.num_appliances];
    for (const Appliance& d : home_.appliances)
      if (app[d.id]) appl_heat_slot[d.zone] += d.power_w * d.heat_radiation_factor;

    auto zone_cap = [&](int z, double ce_sum, double hr_sum) {
      const Zone& zone = home_.zones[z];
      double qv = qv_cap(z, ce_sum);
      double qt = (appl_heat_slot[z] + hr_sum) /
                  ((zone.temp_setpoint_f - zone.supply_air_temp_f) *
                   control::kCfmDegFToWatt);
      return coef[z] * std::max(qv, qt);
    };

    double hvac_cap = 0;
    if (enumerate_patterns) {
      std::vector<int> assign(O, 0);
      double best = 0;
      while (true) {
        std::array<double, kMaxZones> ce_sum{}, hr_sum{};
        for (int o = 0; o < O; ++o) {
          if (assign[o] < static_cast<int>(pattern_zones.size())) {
            int z = pattern_zones[assign[o]];
            ce_sum[z] += ce_max[o];
            hr_sum[z] += hr_max[o];
          }
        }
        double total = 0;
        for (int z : pattern_zones) total += zone_cap(z, ce_sum[z], hr_sum[z]);
        best = std::max(best, total);
        int pos = O - 1;
        while (pos >= 0 && ++assign[pos] == P) assign[pos--] = 0;
        if (pos < 0) break;
      }
      hvac_cap = best;
    } else {
      double total_empty = 0;
      for (int z : pattern_zones) total_empty += zone_cap(z, 0, 0);
      double margs = 0;
      for (int o = 0; o < O; ++o) {
        double best = 0;
        for (int z : pattern_zones)
          best = std::max(best, zone_cap(z, ce_max[o], hr_max[o]) - zone_cap(z, 0, 0));
        margs += best;
      }
      hvac_cap = total_empty + margs;
    }

    double bg = 0;
    for (int z = 1; z < Z; ++z)
      if (!zone_mask_[z]) bg += bg_hvac_[t * Z + z];
    kwh_cap[t] = hvac_cap + bg + appliance_kwh_[t];
    if (unbounded_zone) {
      bounded = false;
      break;
    }
  }
  if (!bounded) {
    dollar_cap_prefix_.clear();
    return;
  }

  // Every slot certainly consumes its background, appliance and empty-zone
  // appliance-heat airflow terms; occupants only add demand.
  std::vector<double> kwh_min(N, 0.0);
  for (int64_t t = 0; t < N; ++t) {
    std::fill(appl_heat_slot.begin(), appl_heat_slot.end(), 0.0);
    const uint8_t* app = &appliance_on_[t * actual_.num_appliances];
    for (const Appliance& d : home_.appliances)
      if (app[d.id]) appl_heat_slot[d.zone] += d.power_w * d.heat_radiation_factor;
    double kwh = 0;
    for (int z : pattern_zones)
      kwh += coef[z] * (appl_heat_slot[z] /
                        ((home_.zones[z].temp_setpoint_f -
                          home_.zones[z].supply_air_temp_f) *
                         control::kCfmDegFToWatt));
    for (int z = 1; z < Z; ++z)
      if (!zone_mask_[z]) kwh += bg_hvac_[t * Z + z];
    kwh_min[t] = kwh + appliance_kwh_[t];
  }

  // Prefix sums: per-slot cap at the slot's rate ceiling, and the certain
  // consumption of peak slots for the battery credit.
  dollar_cap_prefix_.assign(N + 1, 0.0);
  kwh_min_peak_prefix_.assign(N + 1, 0.0);
  peak_slot_cap_max_ = 0;
  for (int64_t t = 0; t < N; ++t) {
    int sod = static_cast<int>(t % home_.slots_per_day);
    double rate = home_.tariff.offpeak_rate;
    double peak_min = 0;
    if (home_.tariff.is_peak(sod)) {
      rate = std::max(home_.tariff.offpeak_rate, home_.tariff.peak_rate);
      peak_min = kwh_min[t];
      peak_slot_cap_max_ = std::max(peak_slot_cap_max_, kwh_cap[t]);
    }
    double cap = kwh_cap[t] * rate * (1.0 + 1e-9) + 1e-15;
    dollar_cap_prefix_[t + 1] = dollar_cap_prefix_[t] + cap;
    kwh_min_peak_prefix_[t + 1] = kwh_min_peak_prefix_[t] + peak_min;
  }
}

void World::compute_safety() {
  // Backward induction: safe_exit_max[o][z][t] is the largest duration D
  // such that a stay arriving at t can still be completed -- an in-range
  // exit no later than D with a feasible landing zone, or a legal run into
  // the trace end. Prevents window myopia from stranding an occupant in a
  // state where Eq. 18-20 admit no continuation.
  const int Z = home_.num_zones();
  const int O = home_.num_occupants();
  const int64_t N = actual_.num_slots;
  safe_exit_max_.assign(static_cast<size_t>(O) * Z * N, -1);

  auto arrive_safe = [&](int o, int z, int64_t t) {
    if (t >= N) return true;  // beyond the horizon, nothing left to satisfy
    return safe_exit_max_[(static_cast<size_t>(o) * Z + z) * N + t] >= 1;
  };

  for (int o = 0; o < O; ++o) {
    for (int64_t t = N - 1; t >= 0; --t) {
      for (int z : zones_sorted_) {
        auto mn = model_.min_stay(t, o, z);
        if (!mn) continue;
        int mx = *model_.max_stay(t, o, z);
        int best = -1;
        if (t + mx >= N - 1) {
          best = mx;  // the stay can legally run into the trace end
        } else {
          for (int d = mx; d >= *mn; --d) {
            if (!model_.in_range_stay(t, o, z, d)) continue;
            bool landing = false;
            for (int z2 : zones_sorted_) {
              if (z2 == z) continue;
              if (arrive_safe(o, z2, t + d + 1)) {
                landing = true;
                break;
              }
            }
            if (landing) {
              best = d;
              break;
            }
          }
        }
        safe_exit_max_[(static_cast<size_t>(o) * Z + z) * N + t] = best;
      }
    }
  }
}

StayState World::actual_stay_state(int64_t t, int occupant) const {
  StayState st;
  st.zone = actual_.zone_of(t, occupant);
  int64_t a = t;
  while (a > 0 && actual_.zone_of(a - 1, occupant) == st.zone) --a;
  st.arrival = a;
  st.arrival_observed = a > 0;
  st.touched = false;
  return st;
}

WorldState World::initial_state(int64_t t0) const {
  WorldState s;
  s.t = t0;
  for (int z = 0; z < home_.num_zones(); ++z) s.co2[z] = actual_.co2_at(t0, z);
  for (int o = 0; o < home_.num_occupants(); ++o)
    s.stays[o] = actual_stay_state(t0, o);
  s.peak_cum = t0 > 0 ? benign_peak_cum_[t0 - 1] : 0.0;
  return s;
}

bool World::gate_open(int64_t t, int occupant) const {
  if (!occupant_mask_[occupant]) return false;
  if (!access_.slot_ok(t)) return false;
  return zone_mask_[actual_.zone_of(t, occupant)] != 0;
}

AssignCheck World::check_assignment(const WorldState& s, int occupant, int zone) const {
  const int64_t t = s.t;
  const int actual_zone = actual_.zone_of(t, occupant);
  const StayState& st = s.stays[occupant];

  if (!gate_open(t, occupant)) {
    if (zone != actual_zone) return AssignCheck::blocked_gate;
    // Forced pass-through. A transition away from a forged stay is still an
    // exit the defender sees; untouched stays mirror actual behavior and are
    // never the attacker's doing.
    if (zone != st.zone && st.touched && st.arrival_observed &&
        !model_.in_range_stay(st.arrival, occupant, st.zone, (t - 1) - st.arrival))
      return AssignCheck::blocked_exit_range;
    return AssignCheck::ok;
  }

  if (!zone_mask_[zone]) return AssignCheck::blocked_zone;

  if (zone == st.zone) {
    if (!st.arrival_observed) return AssignCheck::ok;
    if (t - st.arrival > stay_cap(occupant, zone, st.arrival))
      return AssignCheck::blocked_max_stay;
    return AssignCheck::ok;
  }

  if (st.arrival_observed &&
      !model_.in_range_stay(st.arrival, occupant, st.zone, (t - 1) - st.arrival))
    return AssignCheck::blocked_exit_range;
  if (stay_cap(occupant, zone, t) < 1) return AssignCheck::blocked_fresh_stay;
  return AssignCheck::ok;
}

void World::choices(const WorldState& s, int occupant, std::vector<int>* out) const {
  out->clear();
  if (!gate_open(s.t, occupant)) {
    int forced = actual_.zone_of(s.t, occupant);
    if (check_assignment(s, occupant, forced) == AssignCheck::ok)
      out->push_back(forced);
    return;
  }
  for (int z : zones_sorted_)
    if (check_assignment(s, occupant, z) == AssignCheck::ok) out->push_back(z);
}

double World::step(WorldState& s, const int* zones, const int* activities_in,
                   int* activities_out) const {
  const int64_t t = s.t;
  const int O = home_.num_occupants();
  const int Z = home_.num_zones();
  const double dt = home_.sampling_minutes;
  const uint8_t* app_row = &appliance_on_[t * actual_.num_appliances];

  std::array<int16_t, kMaxOccupants> occ_row{};
  std::array<int16_t, kMaxOccupants> act_row{};

  // Occupants keeping their actual zone keep their actual activity; the
  // attacker forges the reported activity only where it relocates.
  for (int o = 0; o < O; ++o) {
    occ_row[o] = static_cast<int16_t>(zones[o]);
    bool relocated = zones[o] != actual_.zone_of(t, o);
    if (activities_in && activities_in[o] >= 0)
      act_row[o] = static_cast<int16_t>(activities_in[o]);
    else if (!relocated)
      act_row[o] = static_cast<int16_t>(actual_.activity_of(t, o));
    else
      act_row[o] = -1;  // chosen below
  }

  auto zone_co2_in = [&](int z) {
    return s.diverged[z] ? s.co2[z] : actual_.co2_at(t, z);
  };
  auto zone_hvac = [&](int z) {
    control::ZoneLoads loads =
        control::zone_loads(home_, occ_row.data(), act_row.data(), app_row, z);
    AirflowSolution q;
    try {
      q = control::zone_airflow(home_, home_.zones[z], loads, zone_co2_in(z),
                                actual_.outdoor_co2[t]);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (attacked state, slot " +
                                std::to_string(t) + ", zone " + std::to_string(z) + ")");
    }
    double term = q.q *
                  (home_.zones[z].mixed_air_temp_f - home_.zones[z].supply_air_temp_f) *
                  control::kCfmDegFToWatt * dt / 60000.0;
    return std::tuple<double, double, control::ZoneLoads>(q.q, term, loads);
  };

  // Relocated occupants report the allowed activity of their zone that
  // maximizes the slot cost, sequentially by ascending id; ties resolve to
  // the lowest activity id via strict improvement over ascending candidates.
  for (int o = 0; o < O; ++o) {
    if (act_row[o] >= 0) continue;
    const int z = occ_row[o];
    const Zone& zone = home_.zones[z];
    int best_act = kIdleActivity;
    if (!zone.is_outside() && !zone.allowed_activities.empty()) {
      double best_kwh = -1;
      for (int a : zone.allowed_activities) {
        act_row[o] = static_cast<int16_t>(a);
        double kwh = std::get<1>(zone_hvac(z));
        if (kwh > best_kwh) {
          best_kwh = kwh;
          best_act = a;
        }
      }
    }
    act_row[o] = static_cast<int16_t>(best_act);
  }
  if (activities_out)
    for (int o = 0; o < O; ++o) activities_out[o] = act_row[o];

  // Slot consumption: accessible zones under attacked loads, inaccessible
  // zones verbatim from the benign rollout, then appliances one by one. The
  // summation order matches controller::simulate for exact value agreement.
  double kwh = 0;
  std::array<double, kMaxZones> q_served{};
  std::array<const control::ZoneLoads*, kMaxZones> loads_by_zone{};
  std::array<control::ZoneLoads, kMaxZones> loads_storage{};
  for (int z = 1; z < Z; ++z) {
    if (zone_mask_[z]) {
      auto [q, term, loads] = zone_hvac(z);
      q_served[z] = q;
      loads_storage[z] = loads;
      loads_by_zone[z] = &loads_storage[z];
      kwh += term;
    } else {
      kwh += bg_hvac_[t * Z + z];
    }
  }
  for (const Appliance& d : home_.appliances)
    if (app_row[d.id]) kwh += d.power_w * dt / 60000.0;

  // Billing with battery state.
  const int sod = static_cast<int>(t % home_.slots_per_day);
  double rate = home_.tariff.offpeak_rate;
  if (home_.tariff.is_peak(sod)) {
    if (sod == home_.tariff.first_peak_slot()) s.peak_cum = 0;
    s.peak_cum += kwh;
    rate = s.peak_cum <= home_.tariff.battery_kwh ? home_.tariff.offpeak_rate
                                                  : home_.tariff.peak_rate;
  }
  const double cost = kwh * rate;
  s.value += cost;

  // Divergence tracking and the CO2 recurrence for accessible zones. A zone
  // follows the actual series until its loads differ; from then on the
  // recurrence defines the forged measurement.
  for (int z = 1; z < Z; ++z) {
    if (!zone_mask_[z]) continue;
    const control::ZoneLoads& loads = *loads_by_zone[z];
    bool differs = s.diverged[z] || overlay_diff_[t * Z + z] ||
                   loads.co2_rate != actual_co2_rate_[t * Z + z] ||
                   loads.heat_w != actual_heat_[t * Z + z];
    if (differs) {
      s.co2[z] = control::co2_next(home_, home_.zones[z], zone_co2_in(z), q_served[z],
                                   loads.co2_rate, actual_.outdoor_co2[t]);
      s.diverged[z] = 1;
    }
  }

  // Stay bookkeeping.
  for (int o = 0; o < O; ++o) {
    StayState& st = s.stays[o];
    bool relocated = zones[o] != actual_.zone_of(t, o);
    if (zones[o] != st.zone) {
      st.zone = zones[o];
      st.arrival = t;
      st.arrival_observed = true;
    }
    st.touched = st.touched || relocated;
  }

  s.t = t + 1;
  return cost;
}

}  // namespace hta::attack
