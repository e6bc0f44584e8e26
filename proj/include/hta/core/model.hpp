#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hta {

// Zone 0 is reserved for "outside the home": it participates in occupant
// scheduling and stay clustering but contributes no HVAC demand.
constexpr int kOutsideZone = 0;

// Activity 0 is reserved for idle/none with zero emission and radiation.
constexpr int kIdleActivity = 0;

struct Zone {
  int id = 0;
  std::string name;
  double volume_ft3 = 0;         // P^V
  double co2_setpoint_ppm = 0;   // P^CS
  double temp_setpoint_f = 0;    // P^TS
  double supply_air_temp_f = 0;  // P^TSP
  double mixed_air_temp_f = 0;   // P^TM
  std::vector<int> allowed_activities;  // activity ids conductable here

  bool is_outside() const { return id == kOutsideZone; }
};

struct OccupantProfile {
  int id = 0;
  std::string name;
  // Scales the per-activity emission/radiation baselines for this occupant.
  double activity_scale = 1.0;
};

struct ActivityProfile {
  int id = 0;
  std::string name;
  double co2_emission = 0;    // P^CE baseline, ppm*ft^3 per person per minute
  double heat_radiation_w = 0;  // P^HR baseline, W per person
};

struct Appliance {
  int id = 0;
  std::string name;
  int zone = 0;
  double power_w = 0;                 // P^PC
  double heat_radiation_factor = 0;   // P^HRF in [0,1]
  bool voice_triggerable = false;
  bool always_on = false;  // standby load, kept on by the synthetic generator
};

struct Tariff {
  double offpeak_rate = 0;  // P^COP, $/kWh
  double peak_rate = 0;     // P^CP, $/kWh
  std::vector<int> peak_slots;  // slot-of-day indices, sorted ascending
  double battery_kwh = 0;       // P^BS

  bool is_peak(int slot_of_day) const;
  // First peak slot of a day; -1 when no peak window is configured.
  int first_peak_slot() const {
    return peak_slots.empty() ? -1 : peak_slots.front();
  }
};

struct HomeModel {
  std::string name;
  std::vector<Zone> zones;  // index == id, zone 0 outside
  std::vector<OccupantProfile> occupants;
  std::vector<Appliance> appliances;
  std::vector<ActivityProfile> activities;
  Tariff tariff;
  int sampling_minutes = 1;   // dt
  int slots_per_day = 1440;   // |T|
  // CO2 balance exactly as printed (outdoor term carries dt, return-air term
  // does not). The repaired form multiplies the whole exchange by dt.
  bool co2_balance_verbatim = true;

  int num_zones() const { return static_cast<int>(zones.size()); }
  int num_occupants() const { return static_cast<int>(occupants.size()); }
  int num_appliances() const { return static_cast<int>(appliances.size()); }
  int num_activities() const { return static_cast<int>(activities.size()); }

  double co2_rate(int occupant, int activity) const {
    return activities[activity].co2_emission * occupants[occupant].activity_scale;
  }
  double heat_rate(int occupant, int activity) const {
    return activities[activity].heat_radiation_w * occupants[occupant].activity_scale;
  }

  // Appliance ids located in a zone, ascending.
  std::vector<int> appliances_in(int zone) const;
};

struct Violation {
  std::string field;
  std::string message;
};

// Structural validation; violations are data, not faults. Empty iff valid.
std::vector<Violation> validate_home(const HomeModel& home);

// Sorted, half-open slot intervals.
class SlotSet {
 public:
  SlotSet() = default;
  static SlotSet all() {
    SlotSet s;
    s.all_ = true;
    return s;
  }
  static SlotSet range(int64_t begin, int64_t end) {
    SlotSet s;
    s.add(begin, end);
    return s;
  }

  void add(int64_t begin, int64_t end);
  bool contains(int64_t slot) const;
  bool is_all() const { return all_; }
  bool empty() const { return !all_ && intervals_.empty(); }
  int64_t first(int64_t fallback) const {
    if (all_ || intervals_.empty()) return fallback;
    return intervals_.front().first;
  }
  const std::vector<std::pair<int64_t, int64_t>>& intervals() const {
    return intervals_;
  }

 private:
  bool all_ = false;
  std::vector<std::pair<int64_t, int64_t>> intervals_;
};

// Attacker reach: which zones, slots, occupant tags, and appliances can be
// read or altered. Members reference home ids.
struct AccessProfile {
  std::string label;
  std::vector<int> zones;
  std::vector<int> occupants;
  std::vector<int> appliances;
  SlotSet slots;

  bool zone_ok(int z) const;
  bool occupant_ok(int o) const;
  bool appliance_ok(int d) const;
  bool slot_ok(int64_t t) const { return slots.contains(t); }
  bool empty() const {
    return zones.empty() || occupants.empty() || slots.empty();
  }

  static AccessProfile full(const HomeModel& home, const std::string& label = "full");
  std::vector<Violation> validate(const HomeModel& home) const;
};

}  // namespace hta
