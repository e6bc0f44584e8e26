#pragma once

#include <cstdint>
#include <vector>

#include "hta/core/model.hpp"

namespace hta {

// Per-slot sensor record of the home. One zone per occupant per slot
// (zone 0 = outside). CO2/temperature are the measurements the controller
// acts on; for synthetic traces they are generated by the zone physics.
struct SensorTrace {
  int64_t num_slots = 0;
  int num_zones = 0;
  int num_occupants = 0;
  int num_appliances = 0;
  int slots_per_day = 1440;

  std::vector<int16_t> occupant_zone;   // [t * O + o]
  std::vector<int16_t> activity;        // [t * O + o]
  std::vector<double> co2;              // [t * Z + z], ppm
  std::vector<double> temp;             // [t * Z + z], F
  std::vector<uint8_t> appliance_on;    // [t * D + d]
  std::vector<double> outdoor_temp;     // [t], P^OT
  std::vector<double> outdoor_co2;      // [t], P^OC

  void resize(int64_t slots, const HomeModel& home);

  int zone_of(int64_t t, int o) const { return occupant_zone[t * num_occupants + o]; }
  int activity_of(int64_t t, int o) const { return activity[t * num_occupants + o]; }
  double co2_at(int64_t t, int z) const { return co2[t * num_zones + z]; }
  double temp_at(int64_t t, int z) const { return temp[t * num_zones + z]; }
  bool appliance_at(int64_t t, int d) const { return appliance_on[t * num_appliances + d] != 0; }

  int slot_of_day(int64_t t) const { return static_cast<int>(t % slots_per_day); }

  int occupant_count(int64_t t, int z) const {
    int n = 0;
    for (int o = 0; o < num_occupants; ++o) n += zone_of(t, o) == z ? 1 : 0;
    return n;
  }
};

// S^OE derived from tracking: counts[t * Z + z] = sum_o [zone_of(t,o) == z].
std::vector<int> occupant_count_from_tracking(const SensorTrace& trace);

// Structural validation against a home (ids in range, co2 > 0, sizes).
std::vector<Violation> validate_trace(const SensorTrace& trace, const HomeModel& home);

struct AirflowSolution {
  double q_vent = 0;  // cfm demanded by the CO2 balance
  double q_temp = 0;  // cfm demanded by the heat balance
  double q = 0;       // served airflow = max(q_vent, q_temp, 0)
};

// Per-slot actuation, consumption and billing produced by simulation.
struct ControlLog {
  int64_t num_slots = 0;
  int num_zones = 0;
  std::vector<AirflowSolution> airflow;     // [t * Z + z]
  std::vector<double> consumption_kwh;      // [t], P^TEC
  std::vector<double> cumulative_peak_kwh;  // [t], battery accounting
  std::vector<double> slot_cost;            // [t], $
  double total_cost = 0;                    // G^S

  const AirflowSolution& at(int64_t t, int z) const { return airflow[t * num_zones + z]; }
};

// Injection deltas; relocation entries preserve one-zone-per-occupant and
// appliance flips only activate (off -> on).
struct AttackVector {
  struct Co2Delta {
    int64_t slot;
    int zone;
    double delta;
  };
  struct TempDelta {
    int64_t slot;
    int zone;
    double delta;
  };
  struct OccupantMove {
    int64_t slot;
    int occupant;
    int from_zone;
    int to_zone;
    int activity;  // reported activity in the forged zone
  };
  struct ApplianceFlip {
    int64_t slot;
    int appliance;
  };

  std::vector<Co2Delta> co2;
  std::vector<TempDelta> temp;
  std::vector<OccupantMove> moves;
  std::vector<ApplianceFlip> flips;

  bool empty() const {
    return co2.empty() && temp.empty() && moves.empty() && flips.empty();
  }
};

}  // namespace hta
