#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hta/core/model.hpp"
#include "hta/core/trace.hpp"

namespace hta::control {

// cfm * F -> W conversion used by the temperature balance.
constexpr double kCfmDegFToWatt = 0.3167;

// Aggregated demand of one zone at one slot.
struct ZoneLoads {
  int occupant_count = 0;
  double co2_rate = 0;  // ppm*ft^3/min emitted by present occupants
  double heat_w = 0;    // occupant metabolic heat + appliance heat gain
};

// Sums run over occupants then appliances in ascending id order so that
// generator, verifier and attack rollout reproduce bit-identical values.
ZoneLoads zone_loads(const HomeModel& home, const int16_t* occupant_zone_row,
                     const int16_t* activity_row, const uint8_t* appliance_row,
                     int zone);

// Airflow meeting the CO2 balance; clamped below at 0.
// Throws ErrorKind::singular_ventilation when the balance denominator
// vanishes (indoor CO2 indistinguishable from supplied air).
double solve_vent_airflow(const HomeModel& home, const Zone& zone,
                          const ZoneLoads& loads, double co2_ppm,
                          double outdoor_co2_ppm);

// Airflow meeting the heat balance; clamped below at 0.
double solve_temp_airflow(const HomeModel& home, const Zone& zone,
                          const ZoneLoads& loads);

AirflowSolution zone_airflow(const HomeModel& home, const Zone& zone,
                             const ZoneLoads& loads, double co2_ppm,
                             double outdoor_co2_ppm);

// P^TEC for one slot: HVAC supply term per zone plus appliance power, kWh.
double slot_consumption(const HomeModel& home,
                        const std::vector<AirflowSolution>& airflow_by_zone,
                        const uint8_t* appliance_row);

struct BillingResult {
  std::vector<double> slot_cost;
  std::vector<double> cumulative_peak_kwh;
  double total = 0;
};

// Two-rate billing with a battery absorbing the first P^BS kWh of each
// day's peak window at the off-peak rate. The slot that crosses the battery
// capacity is billed entirely at the peak rate.
BillingResult billing(const std::vector<double>& consumption_kwh,
                      const Tariff& tariff, int slots_per_day);

// Next-slot CO2 measurement implied by the balance given this slot's state.
double co2_next(const HomeModel& home, const Zone& zone, double co2_ppm,
                double q_cfm, double co2_rate, double outdoor_co2_ppm);

// Next-slot temperature implied by the verification recurrence. heat_next_w
// is the heat gain at the *next* slot. Only defined when q_cfm > 0 or
// heat_next_w == 0; callers guarantee this via standby loads.
double temp_next(double temp_f, double q_cfm, double heat_next_w);

// Residuals of the verification recurrences, printed form.
double co2_residual(const HomeModel& home, const Zone& zone, double co2_prev,
                    double co2_cur, double q_prev, double co2_rate_prev,
                    double outdoor_co2_prev);
double temp_residual(double temp_prev, double temp_cur, double q_prev,
                     double heat_cur_w);

ControlLog simulate(const SensorTrace& trace, const HomeModel& home);

struct ResidualViolation {
  int64_t slot;
  int zone;
  char kind;  // 'C' or 'T'
  double residual;
};

struct ResidualReport {
  int64_t checked = 0;
  double max_residual = 0;
  std::vector<ResidualViolation> violations;
  bool ok(double tol = 1e-6) const { return violations.empty() && max_residual <= tol; }
};

// Slot-to-slot consistency of a trace with its own control decisions.
// scope/zone filters restrict checking to an attack surface; null = all.
ResidualReport verify_physics(const SensorTrace& trace, const HomeModel& home,
                              double tolerance = 1e-6,
                              const SlotSet* slot_scope = nullptr,
                              const std::vector<int>* zone_scope = nullptr,
                              const ControlLog* log = nullptr);

}  // namespace hta::control
