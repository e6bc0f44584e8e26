#include "hta/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hta {

bool Tariff::is_peak(int slot_of_day) const {
  return std::binary_search(peak_slots.begin(), peak_slots.end(), slot_of_day);
}

std::vector<int> HomeModel::appliances_in(int zone) const {
  std::vector<int> out;
  for (const Appliance& a : appliances)
    if (a.zone == zone) out.push_back(a.id);
  return out;
}

namespace {

void add(std::vector<Violation>& v, std::string field, std::string message) {
  v.push_back({std::move(field), std::move(message)});
}

}  // namespace

std::vector<Violation> validate_home(const HomeModel& home) {
  std::vector<Violation> v;

  if (home.sampling_minutes < 1)
    add(v, "sampling_minutes", "must be >= 1");
  if (home.slots_per_day < 1)
    add(v, "slots_per_day", "must be >= 1");
  if (home.slots_per_day * home.sampling_minutes != 1440)
    add(v, "slots_per_day",
        "slots_per_day * sampling_minutes must equal 1440, got " +
            std::to_string(home.slots_per_day * home.sampling_minutes));

  if (home.zones.empty()) {
    add(v, "zones", "at least the outside zone (id 0) is required");
  }
  for (size_t i = 0; i < home.zones.size(); ++i) {
    const Zone& z = home.zones[i];
    const std::string f = "zones[" + std::to_string(i) + "]";
    if (z.id != static_cast<int>(i))
      add(v, f + ".id", "zone ids must be contiguous from 0");
    if (!z.is_outside()) {
      if (!(z.volume_ft3 > 0)) add(v, f + ".volume_ft3", "must be > 0");
      if (z.temp_setpoint_f == z.supply_air_temp_f)
        add(v, f + ".temp_setpoint_f",
            "equals supply_air_temp_f; airflow solve is singular");
      if (!(z.co2_setpoint_ppm > 0)) add(v, f + ".co2_setpoint_ppm", "must be > 0");
    }
    for (int a : z.allowed_activities)
      if (a < 0 || a >= home.num_activities())
        add(v, f + ".allowed_activities", "unknown activity id " + std::to_string(a));
  }

  for (size_t i = 0; i < home.occupants.size(); ++i) {
    if (home.occupants[i].id != static_cast<int>(i))
      add(v, "occupants[" + std::to_string(i) + "].id",
          "occupant ids must be contiguous from 0");
    if (!(home.occupants[i].activity_scale >= 0))
      add(v, "occupants[" + std::to_string(i) + "].activity_scale", "must be >= 0");
  }

  for (size_t i = 0; i < home.activities.size(); ++i) {
    const ActivityProfile& a = home.activities[i];
    const std::string f = "activities[" + std::to_string(i) + "]";
    if (a.id != static_cast<int>(i))
      add(v, f + ".id", "activity ids must be contiguous from 0");
    if (a.co2_emission < 0) add(v, f + ".co2_emission", "must be >= 0");
    if (a.heat_radiation_w < 0) add(v, f + ".heat_radiation_w", "must be >= 0");
  }
  if (!home.activities.empty()) {
    const ActivityProfile& idle = home.activities[0];
    if (idle.co2_emission != 0 || idle.heat_radiation_w != 0)
      add(v, "activities[0]", "activity 0 is reserved idle with zero rates");
  } else {
    add(v, "activities", "activity 0 (idle) is required");
  }

  for (size_t i = 0; i < home.appliances.size(); ++i) {
    const Appliance& a = home.appliances[i];
    const std::string f = "appliances[" + std::to_string(i) + "]";
    if (a.id != static_cast<int>(i))
      add(v, f + ".id", "appliance ids must be contiguous from 0");
    if (a.zone <= 0 || a.zone >= home.num_zones())
      add(v, f + ".zone",
          "references zone " + std::to_string(a.zone) +
              "; appliances must live in a conditioned zone");
    if (a.power_w < 0) add(v, f + ".power_w", "must be >= 0");
    if (a.heat_radiation_factor < 0 || a.heat_radiation_factor > 1)
      add(v, f + ".heat_radiation_factor", "must lie in [0,1]");
  }

  const Tariff& tf = home.tariff;
  if (tf.offpeak_rate < 0) add(v, "tariff.offpeak_rate", "must be >= 0");
  if (tf.peak_rate < 0) add(v, "tariff.peak_rate", "must be >= 0");
  if (tf.peak_rate < tf.offpeak_rate)
    add(v, "tariff.peak_rate", "must be >= offpeak_rate");
  if (tf.battery_kwh < 0) add(v, "tariff.battery_kwh", "must be >= 0");
  if (!std::is_sorted(tf.peak_slots.begin(), tf.peak_slots.end()))
    add(v, "tariff.peak_slots", "must be sorted ascending");
  for (int s : tf.peak_slots)
    if (s < 0 || s >= home.slots_per_day)
      add(v, "tariff.peak_slots", "slot " + std::to_string(s) + " out of day range");

  return v;
}

void SlotSet::add(int64_t begin, int64_t end) {
  if (begin >= end) return;
  intervals_.emplace_back(begin, end);
  std::sort(intervals_.begin(), intervals_.end());
  std::vector<std::pair<int64_t, int64_t>> merged;
  for (auto& iv : intervals_) {
    if (!merged.empty() && iv.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, iv.second);
    else
      merged.push_back(iv);
  }
  intervals_ = std::move(merged);
}

bool SlotSet::contains(int64_t slot) const {
  if (all_) return true;
  for (auto& iv : intervals_)
    if (slot >= iv.first && slot < iv.second) return true;
  return false;
}

bool AccessProfile::zone_ok(int z) const {
  return std::find(zones.begin(), zones.end(), z) != zones.end();
}
bool AccessProfile::occupant_ok(int o) const {
  return std::find(occupants.begin(), occupants.end(), o) != occupants.end();
}
bool AccessProfile::appliance_ok(int d) const {
  return std::find(appliances.begin(), appliances.end(), d) != appliances.end();
}

AccessProfile AccessProfile::full(const HomeModel& home, const std::string& label) {
  AccessProfile p;
  p.label = label;
  for (const Zone& z : home.zones) p.zones.push_back(z.id);
  for (const OccupantProfile& o : home.occupants) p.occupants.push_back(o.id);
  for (const Appliance& a : home.appliances) p.appliances.push_back(a.id);
  p.slots = SlotSet::all();
  return p;
}

std::vector<Violation> AccessProfile::validate(const HomeModel& home) const {
  std::vector<Violation> v;
  for (int z : zones)
    if (z < 0 || z >= home.num_zones())
      add(v, "access.zones", "unknown zone id " + std::to_string(z));
  for (int o : occupants)
    if (o < 0 || o >= home.num_occupants())
      add(v, "access.occupants", "unknown occupant id " + std::to_string(o));
  for (int d : appliances)
    if (d < 0 || d >= home.num_appliances())
      add(v, "access.appliances", "unknown appliance id " + std::to_string(d));
  return v;
}

}  // namespace hta
