#include "hta/core/trace.hpp"

#include <string>

namespace hta {

void SensorTrace::resize(int64_t slots, const HomeModel& home) {
  num_slots = slots;
  num_zones = home.num_zones();
  num_occupants = home.num_occupants();
  num_appliances = home.num_appliances();
  slots_per_day = home.slots_per_day;
  occupant_zone.assign(slots * num_occupants, kOutsideZone);
  activity.assign(slots * num_occupants, kIdleActivity);
  co2.assign(slots * num_zones, 0.0);
  temp.assign(slots * num_zones, 0.0);
  appliance_on.assign(slots * num_appliances, 0);
  outdoor_temp.assign(slots, 0.0);
  outdoor_co2.assign(slots, 0.0);
}

std::vector<int> occupant_count_from_tracking(const SensorTrace& trace) {
  std::vector<int> counts(trace.num_slots * trace.num_zones, 0);
  for (int64_t t = 0; t < trace.num_slots; ++t)
    for (int o = 0; o < trace.num_occupants; ++o)
      counts[t * trace.num_zones + trace.zone_of(t, o)] += 1;
  return counts;
}

std::vector<Violation> validate_trace(const SensorTrace& trace, const HomeModel& home) {
  std::vector<Violation> v;
  auto add = [&v](std::string field, std::string msg) {
    v.push_back({std::move(field), std::move(msg)});
  };

  if (trace.num_zones != home.num_zones()) add("num_zones", "does not match home");
  if (trace.num_occupants != home.num_occupants())
    add("num_occupants", "does not match home");
  if (trace.num_appliances != home.num_appliances())
    add("num_appliances", "does not match home");
  if (trace.slots_per_day != home.slots_per_day)
    add("slots_per_day", "does not match home");
  if (!v.empty()) return v;

  for (int64_t t = 0; t < trace.num_slots; ++t) {
    for (int o = 0; o < trace.num_occupants; ++o) {
      int z = trace.zone_of(t, o);
      if (z < 0 || z >= trace.num_zones) {
        add("occupant_zone", "slot " + std::to_string(t) + " occupant " +
                                 std::to_string(o) + ": unknown zone " + std::to_string(z));
        return v;
      }
      int a = trace.activity_of(t, o);
      if (a < 0 || a >= home.num_activities()) {
        add("activity", "slot " + std::to_string(t) + " occupant " +
                            std::to_string(o) + ": unknown activity " + std::to_string(a));
        return v;
      }
    }
    for (int z = 1; z < trace.num_zones; ++z) {
      if (!(trace.co2_at(t, z) > 0)) {
        add("co2", "slot " + std::to_string(t) + " zone " + std::to_string(z) +
                       ": co2 must be > 0");
        return v;
      }
    }
  }
  return v;
}

}  // namespace hta
