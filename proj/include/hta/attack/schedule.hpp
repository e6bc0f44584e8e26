#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hta/attack/world.hpp"

#include "json.hpp"

namespace hta::attack {

// Per-slot occupant-to-zone/activity assignment over the whole trace.
// scheduled marks slots the attacker injects; unscheduled slots mirror the
// actual trace. Exactly one zone per occupant per slot by construction.
struct AttackSchedule {
  int64_t num_slots = 0;
  int num_occupants = 0;
  std::vector<int16_t> zone;      // [t * O + o]
  std::vector<int16_t> activity;  // [t * O + o]
  std::vector<uint8_t> scheduled; // [t * O + o]

  struct Deadlock {
    int64_t slot;
    int occupant;
  };
  std::vector<Deadlock> deadlocks;

  struct WindowStat {
    int64_t start = 0;
    int length = 0;
    double value = 0;     // window dollars under the schedule
    int64_t leaves = 0;   // complete assignments evaluated
    int64_t steps = 0;    // step() invocations
    int passthrough = 0;  // occupants passed through this window
  };
  std::vector<WindowStat> windows;

  double total_value = 0;  // dollars over the full trace, trigger excluded
  std::string strategy;

  int zone_at(int64_t t, int o) const { return zone[t * num_occupants + o]; }
  int activity_at(int64_t t, int o) const { return activity[t * num_occupants + o]; }
  bool scheduled_at(int64_t t, int o) const { return scheduled[t * num_occupants + o] != 0; }
};

nlohmann::json schedule_to_json(const AttackSchedule& schedule);
// Throws ErrorKind::infeasible_schedule on duplicate (slot, occupant)
// entries (Eq. 18).
AttackSchedule schedule_from_json(const nlohmann::json& j);

// Benign pass-through schedule (zones/activities of the actual trace).
AttackSchedule actual_schedule(const SensorTrace& trace);

struct ScheduleOptions {
  int window_len = 10;               // I, slots per exact window
  int64_t node_budget = 20000000;    // step() calls per window
  bool use_bound = true;             // admissible branch-and-bound pruning
};

struct WindowResult {
  bool feasible = false;
  double value = 0;  // end value (absolute, carried in state)
  std::vector<int> zones;       // [slot_idx * O + o]
  std::vector<int> activities;
  WorldState end_state;
  int64_t leaves = 0;
  int64_t steps = 0;
  int64_t steps_pass1 = 0;  // value-ordered bounding pass
};

// Exact maximizer over all feasible window assignments, explored in
// lexicographic (slot, occupant, zone-id) order; the first optimum found is
// kept, so ties resolve lexicographically. Throws ErrorKind::budget_exceeded
// when step() calls exceed the budget.
WindowResult optimize_window(const World& world, const WorldState& start,
                             int window_len, const std::vector<uint8_t>& passthrough,
                             int64_t node_budget, bool use_bound);

// Value of a raw window assignment with no constraint checking (shared by
// the brute-force oracle in tests).
double evaluate_window_assignment(const World& world, WorldState state,
                                  const std::vector<int>& zones, int window_len,
                                  WorldState* end_state = nullptr,
                                  std::vector<int>* activities_out = nullptr);

// Windowed exact schedule: optimize_window stitched across the trace with
// arrival/CO2/billing state carried over boundaries. Occupants whose window
// has no feasible branch pass through (actual behavior, no injections) for
// that window and are retried at the next one.
AttackSchedule windowed_schedule(const SensorTrace& trace, const HomeModel& home,
                                 const adm::AdmModel& model, const AccessProfile& access,
                                 const ScheduleOptions& options = {});

// One-step lookahead baseline: at each decision point pick the feasible zone
// maximizing the instantaneous slot cost, hold it for maxStay, advance.
// Occupants are scheduled sequentially (earlier schedules fixed). Slots with
// no feasible zone fall back to the actual zone and are recorded.
AttackSchedule greedy_schedule(const SensorTrace& trace, const HomeModel& home,
                               const adm::AdmModel& model, const AccessProfile& access);

// Unconstrained per-slot relocation of every reachable occupant to the
// statically most expensive zone; ignores the detector entirely.
AttackSchedule naive_schedule(const SensorTrace& trace, const HomeModel& home,
                              const AccessProfile& access);

// Validated dollars of a schedule over [from, to). Scheduled slots must pass
// the stay constraints; throws ErrorKind::infeasible_schedule naming the
// violated rule. Unscheduled slots must mirror the actual trace.
double schedule_value(const AttackSchedule& schedule, const World& world,
                      int64_t from, int64_t to);

// Adversarial appliance activations derived from a schedule (one entry per
// slot/zone/appliance). Activation is permitted while the scheduled stay is
// within its minStay threshold and every occupant is actually absent from
// the zone; only accessible, voice-triggerable, currently-off appliances fire.
struct TriggerPlan {
  struct Entry {
    int64_t slot;
    int zone;
    int appliance;
  };
  std::vector<Entry> entries;

  std::vector<uint8_t> overlay(int64_t num_slots, int num_appliances) const;
};

nlohmann::json trigger_plan_to_json(const TriggerPlan& plan);

TriggerPlan trigger_decision(const AttackSchedule& schedule, const SensorTrace& actual,
                             const HomeModel& home, const adm::AdmModel& model,
                             const AccessProfile& access);

// Per-transition explanation: which constraint shaped each scheduled move.
nlohmann::json explain_schedule(const AttackSchedule& schedule, const World& world);

}  // namespace hta::attack
