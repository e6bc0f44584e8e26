#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hta/adm/model.hpp"
#include "hta/attack/schedule.hpp"
#include "hta/core/model.hpp"
#include "hta/core/trace.hpp"

namespace hta::attack {

// Apply an injection vector. Throws ErrorKind::access_violation when an
// entry targets an inaccessible slot/zone/occupant/appliance, and
// ErrorKind::invalid when an entry contradicts the trace (wrong source zone,
// flipping an appliance that is already on).
SensorTrace apply_fdi(const SensorTrace& trace, const AttackVector& vector,
                      const AccessProfile& access, const HomeModel& home);

struct ReplayResult {
  SensorTrace attacked;
  AttackVector vector;
};

// Execute a schedule plus trigger plan against the actual trace. Occupancy
// deltas apply only where the slot, occupant tag, actual zone and scheduled
// zone are all accessible; other slots pass through. CO2/temperature deltas
// are solved from the verification recurrences so the attacked trace stays
// consistent for the surfaces the attacker controls.
ReplayResult realtime_replay(const AttackSchedule& schedule, const TriggerPlan& plan,
                             const SensorTrace& actual, const HomeModel& home,
                             const AccessProfile& access);

struct StealthViolation {
  std::string constraint;  // "eq12".."eq16"
  int64_t slot = 0;
  int occupant = -1;
  int zone = -1;
  double residual = 0;
  std::string detail;
};

struct StealthVerdict {
  bool stealthy = true;
  std::vector<StealthViolation> violations;
};

// Attack constraints over the accessible scope: cluster consistency of the
// attacked occupancy (12), per-slot occupant conservation (13), CO2 and
// temperature recurrence residuals within 1e-6 (14, 15), and appliance flips
// only in actually-unoccupied zones (16).
StealthVerdict verify_stealth(const SensorTrace& original, const SensorTrace& attacked,
                              const HomeModel& home, const adm::AdmModel& model,
                              const AccessProfile& access);

// G under the attacked measurements: simulate and bill.
double attack_cost(const SensorTrace& attacked, const HomeModel& home);

}  // namespace hta::attack
