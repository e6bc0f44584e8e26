#include "hta/control/controller.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "hta/error.hpp"

namespace hta::control {

ZoneLoads zone_loads(const HomeModel& home, const int16_t* occupant_zone_row,
                     const int16_t* activity_row, const uint8_t* appliance_row,
                     int zone) {
  ZoneLoads loads;
  for (int o = 0; o < home.num_occupants(); ++o) {
    if (occupant_zone_row[o] != zone) continue;
    loads.occupant_count += 1;
    int a = activity_row[o];
    loads.co2_rate += home.co2_rate(o, a);
    loads.heat_w += home.heat_rate(o, a);
  }
  for (const Appliance& d : home.appliances) {
    if (d.zone != zone) continue;
    if (appliance_row[d.id])
      loads.heat_w += d.power_w * d.heat_radiation_factor;
  }
  return loads;
}

double solve_vent_airflow(const HomeModel& home, const Zone& zone,
                          const ZoneLoads& loads, double co2_ppm,
                          double outdoor_co2_ppm) {
  const double dt = home.sampling_minutes;
  const double numerator =
      loads.co2_rate * dt - zone.volume_ft3 * (zone.co2_setpoint_ppm - co2_ppm);
  double denominator;
  if (home.co2_balance_verbatim)
    denominator = co2_ppm - dt * outdoor_co2_ppm;
  else
    denominator = dt * (co2_ppm - outdoor_co2_ppm);
  if (std::abs(denominator) < 1e-9)
    throw Error(ErrorKind::singular_ventilation,
                "ventilation balance is singular: indoor CO2 " +
                    std::to_string(co2_ppm) +
                    " indistinguishable from supplied air");
  return std::max(numerator / denominator, 0.0);
}

double solve_temp_airflow(const HomeModel& home, const Zone& zone,
                          const ZoneLoads& loads) {
  (void)home;
  const double dT = zone.temp_setpoint_f - zone.supply_air_temp_f;
  if (std::abs(dT) < 1e-12)
    throw Error(ErrorKind::singular_temperature,
                "temperature setpoint equals supply air temperature in zone " +
                    std::to_string(zone.id));
  return std::max(loads.heat_w / (dT * kCfmDegFToWatt), 0.0);
}

AirflowSolution zone_airflow(const HomeModel& home, const Zone& zone,
                             const ZoneLoads& loads, double co2_ppm,
                             double outdoor_co2_ppm) {
  AirflowSolution s;
  s.q_vent = solve_vent_airflow(home, zone, loads, co2_ppm, outdoor_co2_ppm);
  s.q_temp = solve_temp_airflow(home, zone, loads);
  s.q = std::max({s.q_vent, s.q_temp, 0.0});
  return s;
}

double slot_consumption(const HomeModel& home,
                        const std::vector<AirflowSolution>& airflow_by_zone,
                        const uint8_t* appliance_row) {
  const double dt = home.sampling_minutes;
  double kwh = 0;
  for (int z = 1; z < home.num_zones(); ++z) {
    const Zone& zone = home.zones[z];
    kwh += airflow_by_zone[z].q *
           (zone.mixed_air_temp_f - zone.supply_air_temp_f) * kCfmDegFToWatt *
           dt / 60000.0;
  }
  for (const Appliance& d : home.appliances)
    if (appliance_row[d.id]) kwh += d.power_w * dt / 60000.0;
  return kwh;
}

BillingResult billing(const std::vector<double>& consumption_kwh,
                      const Tariff& tariff, int slots_per_day) {
  BillingResult out;
  out.slot_cost.resize(consumption_kwh.size());
  out.cumulative_peak_kwh.resize(consumption_kwh.size());
  const int first_peak = tariff.first_peak_slot();
  double cum = 0;
  for (size_t t = 0; t < consumption_kwh.size(); ++t) {
    const int sod = static_cast<int>(t % slots_per_day);
    double rate = tariff.offpeak_rate;
    if (tariff.is_peak(sod)) {
      if (sod == first_peak) cum = 0;  // battery recharged off-peak
      cum += consumption_kwh[t];
      rate = cum <= tariff.battery_kwh ? tariff.offpeak_rate : tariff.peak_rate;
    }
    out.cumulative_peak_kwh[t] = cum;
    out.slot_cost[t] = consumption_kwh[t] * rate;
    out.total += out.slot_cost[t];
  }
  return out;
}

double co2_next(const HomeModel& home, const Zone& zone, double co2_ppm,
                double q_cfm, double co2_rate, double outdoor_co2_ppm) {
  const double dt = home.sampling_minutes;
  const double v = zone.volume_ft3;
  double next;
  if (home.co2_balance_verbatim)
    next = co2_rate * dt / v + (1.0 - q_cfm / v) * co2_ppm +
           (q_cfm * dt / v) * outdoor_co2_ppm;
  else
    next = co2_rate * dt / v + (1.0 - q_cfm * dt / v) * co2_ppm +
           (q_cfm * dt / v) * outdoor_co2_ppm;
  // An emptied zone under appliance heat decays geometrically toward the
  // outdoor level, where the printed balance denominator turns singular.
  // Measurements floor just above it; the flooring error stays strictly
  // below the 1e-6 verification tolerance.
  return std::max(next, outdoor_co2_ppm + 1e-6);
}

double temp_next(double temp_f, double q_cfm, double heat_next_w) {
  if (q_cfm > 0) return temp_f + heat_next_w / (q_cfm * kCfmDegFToWatt);
  return temp_f;  // no served air: recurrence is vacuous only when heat == 0
}

double co2_residual(const HomeModel& home, const Zone& zone, double co2_prev,
                    double co2_cur, double q_prev, double co2_rate_prev,
                    double outdoor_co2_prev) {
  const double dt = home.sampling_minutes;
  const double v = zone.volume_ft3;
  const double lhs = co2_rate_prev * dt / v;
  double rhs;
  if (home.co2_balance_verbatim)
    rhs = co2_cur - (1.0 - q_prev / v) * co2_prev -
          (q_prev * dt / v) * outdoor_co2_prev;
  else
    rhs = co2_cur - (1.0 - q_prev * dt / v) * co2_prev -
          (q_prev * dt / v) * outdoor_co2_prev;
  return lhs - rhs;
}

double temp_residual(double temp_prev, double temp_cur, double q_prev,
                     double heat_cur_w) {
  return q_prev * (temp_cur - temp_prev) * kCfmDegFToWatt - heat_cur_w;
}

ControlLog simulate(const SensorTrace& trace, const HomeModel& home) {
  ControlLog log;
  log.num_slots = trace.num_slots;
  log.num_zones = trace.num_zones;
  log.airflow.resize(trace.num_slots * trace.num_zones);
  log.consumption_kwh.resize(trace.num_slots);

  std::vector<AirflowSolution> row(trace.num_zones);
  for (int64_t t = 0; t < trace.num_slots; ++t) {
    const int16_t* occ = &trace.occupant_zone[t * trace.num_occupants];
    const int16_t* act = &trace.activity[t * trace.num_occupants];
    const uint8_t* app = &trace.appliance_on[t * trace.num_appliances];
    for (int z = 0; z < trace.num_zones; ++z) {
      if (z == kOutsideZone) {
        row[z] = AirflowSolution{};
        continue;
      }
      ZoneLoads loads = zone_loads(home, occ, act, app, z);
      try {
        row[z] = zone_airflow(home, home.zones[z], loads, trace.co2_at(t, z),
                              trace.outdoor_co2[t]);
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (slot " +
                                  std::to_string(t) + ", zone " +
                                  std::to_string(z) + ")");
      }
      log.airflow[t * trace.num_zones + z] = row[z];
    }
    log.consumption_kwh[t] = slot_consumption(home, row, app);
  }

  BillingResult bill = billing(log.consumption_kwh, home.tariff, home.slots_per_day);
  log.slot_cost = std::move(bill.slot_cost);
  log.cumulative_peak_kwh = std::move(bill.cumulative_peak_kwh);
  log.total_cost = bill.total;
  return log;
}

ResidualReport verify_physics(const SensorTrace& trace, const HomeModel& home,
                              double tolerance, const SlotSet* slot_scope,
                              const std::vector<int>* zone_scope,
                              const ControlLog* log) {
  ResidualReport report;
  ControlLog local;
  if (!log) {
    local = simulate(trace, home);
    log = &local;
  }

  auto zone_in_scope = [&](int z) {
    if (!zone_scope) return true;
    return std::find(zone_scope->begin(), zone_scope->end(), z) != zone_scope->end();
  };

  for (int64_t t = 1; t < trace.num_slots; ++t) {
    if (slot_scope && !slot_scope->contains(t)) continue;
    const int16_t* occ_prev = &trace.occupant_zone[(t - 1) * trace.num_occupants];
    const int16_t* act_prev = &trace.activity[(t - 1) * trace.num_occupants];
    const uint8_t* app_prev = &trace.appliance_on[(t - 1) * trace.num_appliances];
    const int16_t* occ_cur = &trace.occupant_zone[t * trace.num_occupants];
    const int16_t* act_cur = &trace.activity[t * trace.num_occupants];
    const uint8_t* app_cur = &trace.appliance_on[t * trace.num_appliances];

    for (int z = 1; z < trace.num_zones; ++z) {
      if (!zone_in_scope(z)) continue;
      const Zone& zone = home.zones[z];
      const double q_prev = log->at(t - 1, z).q;

      ZoneLoads prev = zone_loads(home, occ_prev, act_prev, app_prev, z);
      double rc = co2_residual(home, zone, trace.co2_at(t - 1, z),
                               trace.co2_at(t, z), q_prev, prev.co2_rate,
                               trace.outdoor_co2[t - 1]);
      ZoneLoads cur = zone_loads(home, occ_cur, act_cur, app_cur, z);
      double rt = temp_residual(trace.temp_at(t - 1, z), trace.temp_at(t, z),
                                q_prev, cur.heat_w);

      report.checked += 2;
      report.max_residual = std::max({report.max_residual, std::abs(rc), std::abs(rt)});
      if (std::abs(rc) > tolerance)
        report.violations.push_back({t, z, 'C', rc});
      if (std::abs(rt) > tolerance)
        report.violations.push_back({t, z, 'T', rt});
    }
  }
  return report;
}

}  // namespace hta::control
