#pragma once

#include <array>
#include <limits>
#include <cstdint>
#include <vector>

#include "hta/adm/model.hpp"
#include "hta/core/model.hpp"
#include "hta/core/trace.hpp"

namespace hta::attack {

// Scheduling state caps; core types are unbounded, the attack search keeps
// its per-branch state in fixed storage.
constexpr int kMaxZones = 32;
constexpr int kMaxOccupants = 16;

// Attacked stay bookkeeping for one occupant. arrival_observed is false only
// for the carried-in run that extends to the trace start; such a stay never
// forms an arrival event and is unconstrained. Attacker-caused arrivals are
// always constrained. touched records whether the attacked stream ever
// diverged from the actual one.
struct StayState {
  int zone = kOutsideZone;
  int64_t arrival = 0;
  bool arrival_observed = false;
  bool touched = false;
};

struct WorldState {
  int64_t t = 0;        // next slot to assign
  double value = 0;     // accumulated $ since rollout start
  double peak_cum = 0;  // peak-window consumption since the day's first peak slot
  std::array<double, kMaxZones> co2{};      // rolled measurement, valid once diverged
  std::array<uint8_t, kMaxZones> diverged{};  // zone loads left the actual series
  std::array<StayState, kMaxOccupants> stays{};
};

enum class AssignCheck {
  ok,
  blocked_gate,        // slot gated shut; only the actual zone passes through
  blocked_zone,        // zone outside the accessible set
  blocked_max_stay,    // Eq. 19: continuing would exceed the stay cap
  blocked_exit_range,  // Eq. 20: exiting now is not an in-range stay
  blocked_fresh_stay,  // Eq. 19: no completable stay from this arrival
};

const char* to_string(AssignCheck check);

// Forward model of the attacked world: per-slot zone assignments drive the
// controller through forged measurements while the CO2 recurrence, billing
// state and stay constraints evolve. Zone measurements follow the actual
// trace until the zone's loads first diverge, then the recurrence takes
// over. Inaccessible conditioned zones keep their benign airflow. Instances
// are immutable after construction and safe to share across threads.
class World {
 public:
  World(const SensorTrace& actual, const HomeModel& home,
        const adm::AdmModel& model, const AccessProfile& access,
        const std::vector<uint8_t>* appliance_overlay = nullptr);

  const SensorTrace& trace() const { return actual_; }
  const HomeModel& home() const { return home_; }
  const adm::AdmModel& model() const { return model_; }
  const AccessProfile& access() const { return access_; }
  const std::vector<int>& accessible_zones() const { return zones_sorted_; }

  // Carry-in state at t0: actual sensors, actual stays, billing rolled to t0.
  WorldState initial_state(int64_t t0) const;

  StayState actual_stay_state(int64_t t, int occupant) const;

  // Injection gate at (t, o): the attacker needs the slot, the occupant tag
  // and the occupant's actual zone.
  bool gate_open(int64_t t, int occupant) const;

  // Longest duration an attacked stay arriving at `arrival` in `zone` may
  // reach while staying completable: some in-range exit with a feasible
  // landing zone remains ahead, or the stay legally runs into the trace end.
  // -1 when no completable stay exists from this arrival. Computed by
  // backward induction over the trace; access gates are assumed open.
  int stay_cap(int occupant, int zone, int64_t arrival) const {
    return safe_exit_max_[(occupant * home_.num_zones() + zone) * actual_.num_slots +
                          arrival];
  }

  AssignCheck check_assignment(const WorldState& s, int occupant, int zone) const;

  // Feasible zones for the occupant at s.t, ascending id. A closed gate
  // forces the actual zone (empty result when the forced transition from a
  // touched stay is not in range).
  void choices(const WorldState& s, int occupant, std::vector<int>* out) const;

  // Advance one slot. zones[o] is the attacked zone per occupant. Relocated
  // occupants report the allowed activity of the assigned zone maximizing
  // the slot cost (chosen sequentially by ascending occupant id, ties to the
  // lowest activity id) unless activities_in pins them (>= 0). Returns the
  // slot cost added to s.value. No constraint checking happens here.
  double step(WorldState& s, const int* zones, const int* activities_in,
              int* activities_out) const;

  // Whether a finite admissible value bound exists for this home.
  bool bounded() const { return bounded_; }

  // Admissible dollar cap over slots [s.t, to) from the branch state: HVAC
  // caps track each zone's reachable CO2 (it climbs at most E_max/V per slot
  // and pins at the setpoint), occupant placements are maximized over
  // patterns, every slot bills at its rate ceiling, and the battery's
  // certain rate discount is credited back.
  double remaining_bound(const WorldState& s, int64_t to) const;

  // Accessible zones ordered by their static value cap, best first; used to
  // find strong incumbents before the lexicographic tie-break pass.
  const std::vector<int>& zones_by_value() const { return zones_by_value_; }

  int num_occupants() const { return home_.num_occupants(); }
  int num_zones() const { return home_.num_zones(); }
  int64_t num_slots() const { return actual_.num_slots; }

 private:
  const SensorTrace& actual_;
  const HomeModel& home_;
  const adm::AdmModel& model_;
  const AccessProfile& access_;

  std::vector<uint8_t> appliance_on_;    // actual OR overlay, [t * D + d]
  std::vector<uint8_t> overlay_diff_;    // [t * Z + z]: overlay flips in zone
  std::vector<double> bg_hvac_;          // benign per-zone HVAC kWh, [t * Z + z]
  std::vector<double> actual_co2_rate_;  // benign zone loads, [t * Z + z]
  std::vector<double> actual_heat_;      // [t * Z + z]
  std::vector<double> appliance_kwh_;    // [t]
  std::vector<double> benign_peak_cum_;  // [t]
  std::vector<uint8_t> zone_mask_;       // accessible zones
  std::vector<uint8_t> occupant_mask_;
  std::vector<int> zones_sorted_;
  std::vector<int> zones_by_value_;
  std::vector<int> safe_exit_max_;       // [(o * Z + z) * N + t]
  bool bounded_ = false;
  std::vector<double> rate_cap_prefix_;       // [N + 1], sum of rate ceilings
  std::vector<double> dollar_misc_prefix_;    // [N + 1], rate * (bg + appliances)
  std::vector<double> kwh_min_peak_prefix_;   // [N + 1], min consumption on peak slots
  std::vector<double> appl_heat_zone_;        // [t * Z + z], scheduled appliance heat
  std::vector<double> ce_pattern_max_;        // per occupant
  std::vector<double> hr_pattern_max_;
  std::vector<double> zone_coef_;             // kWh per cfm per slot
  std::vector<double> zone_c_ceiling_;        // max reachable attacked CO2
  std::vector<double> zone_climb_;            // max CO2 rise per slot
  std::vector<int> pattern_zones_;            // accessible conditioned zones
  double peak_slot_cap_max_ = 0;
  double oc_max_ = 0;

  void compute_value_bound();
  void compute_safety();
};

}  // namespace hta::attack
