#include "hta/attack/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hta/control/controller.hpp"
#include "hta/error.hpp"

namespace hta::attack {

nlohmann::json schedule_to_json(const AttackSchedule& s) {
  nlohmann::json j;
  j["num_slots"] = s.num_slots;
  j["num_occupants"] = s.num_occupants;
  j["strategy"] = s.strategy;
  j["total_value"] = s.total_value;
  auto& entries = j["entries"] = nlohmann::json::array();
  for (int64_t t = 0; t < s.num_slots; ++t)
    for (int o = 0; o < s.num_occupants; ++o)
      entries.push_back({{"slot", t},
                         {"occupant", o},
                         {"zone", s.zone_at(t, o)},
                         {"activity", s.activity_at(t, o)},
                         {"scheduled", s.scheduled_at(t, o)}});
  auto& dl = j["deadlocks"] = nlohmann::json::array();
  for (const auto& d : s.deadlocks)
    dl.push_back({{"slot", d.slot}, {"occupant", d.occupant}});
  auto& ws = j["windows"] = nlohmann::json::array();
  for (const auto& w : s.windows)
    ws.push_back({{"start", w.start},
                  {"length", w.length},
                  {"value", w.value},
                  {"leaves", w.leaves},
                  {"steps", w.steps},
                  {"passthrough", w.passthrough}});
  return j;
}

AttackSchedule schedule_from_json(const nlohmann::json& j) {
  AttackSchedule s;
  try {
    s.num_slots = j.at("num_slots").get<int64_t>();
    s.num_occupants = j.at("num_occupants").get<int>();
    s.strategy = j.value("strategy", "");
    s.total_value = j.value("total_value", 0.0);
    s.zone.assign(s.num_slots * s.num_occupants, -1);
    s.activity.assign(s.num_slots * s.num_occupants, 0);
    s.scheduled.assign(s.num_slots * s.num_occupants, 0);
    for (const auto& e : j.at("entries")) {
      int64_t t = e.at("slot").get<int64_t>();
      int o = e.at("occupant").get<int>();
      if (t < 0 || t >= s.num_slots || o < 0 || o >= s.num_occupants)
        throw Error(ErrorKind::parse, "schedule entry out of range");
      int64_t idx = t * s.num_occupants + o;
      if (s.zone[idx] != -1)
        throw Error(ErrorKind::infeasible_schedule,
                    "Eq. 18: occupant " + std::to_string(o) +
                        " assigned two zones at slot " + std::to_string(t));
      s.zone[idx] = static_cast<int16_t>(e.at("zone").get<int>());
      s.activity[idx] = static_cast<int16_t>(e.at("activity").get<int>());
      s.scheduled[idx] = e.value("scheduled", false) ? 1 : 0;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("schedule: ") + e.what());
  }
  for (int64_t i = 0; i < s.num_slots * s.num_occupants; ++i)
    if (s.zone[i] == -1)
      throw Error(ErrorKind::infeasible_schedule,
                  "Eq. 18: missing zone assignment at index " + std::to_string(i));
  return s;
}

AttackSchedule actual_schedule(const SensorTrace& trace) {
  AttackSchedule s;
  s.num_slots = trace.num_slots;
  s.num_occupants = trace.num_occupants;
  s.zone = trace.occupant_zone;
  s.activity = trace.activity;
  s.scheduled.assign(trace.num_slots * trace.num_occupants, 0);
  s.strategy = "benign";
  return s;
}

namespace {

// Window search. With the bound enabled it runs two passes: a best-first
// pass over value-ordered zones to establish the exact optimum under
// admissible pruning, then a lexicographic pass that stops at the first leaf
// reaching that optimum, pinning the (slot, occupant, zone-id) tie-break.
// Without the bound it is a single exhaustive lexicographic sweep.
struct Dfs {
  enum class Mode { lex_exhaustive, value_bound, lex_find };

  const World& world;
  int window_len;
  const std::vector<uint8_t>& passthrough;
  int64_t node_budget;
  int O;

  Mode mode = Mode::lex_exhaustive;
  double target = 0;  // lex_find: stop at the first leaf with this value
  bool done = false;

  std::vector<int> row;
  std::vector<int> path_zones;
  std::vector<int> path_acts;
  std::vector<int> acts_out;

  WindowResult best;
  int64_t steps = 0;
  int64_t leaves = 0;
  int64_t end_slot = 0;

  Dfs(const World& w, int wl, const std::vector<uint8_t>& pt, int64_t budget)
      : world(w), window_len(wl), passthrough(pt), node_budget(budget),
        O(w.num_occupants()) {
    row.resize(O);
    path_zones.assign(static_cast<size_t>(window_len) * O, 0);
    path_acts.assign(static_cast<size_t>(window_len) * O, 0);
    acts_out.resize(O);
    best.value = -std::numeric_limits<double>::infinity();
  }

  void run(const WorldState& start, Mode m, double target_value = 0) {
    mode = m;
    target = target_value;
    done = false;
    end_slot = start.t + window_len;
    if (m != Mode::lex_find) {
      best = WindowResult{};
      best.value = -std::numeric_limits<double>::infinity();
    }
    at_slot(start, 0);
  }

  void at_slot(const WorldState& s, int depth) {
    if (done) return;
    if (depth == window_len) {
      ++leaves;
      if (mode == Mode::lex_find) {
        if (s.value == target) {
          best.feasible = true;
          best.value = s.value;
          best.zones = path_zones;
          best.activities = path_acts;
          best.end_state = s;
          done = true;
        }
        return;
      }
      if (s.value > best.value) {
        best.feasible = true;
        best.value = s.value;
        best.zones = path_zones;
        best.activities = path_acts;
        best.end_state = s;
      }
      return;
    }
    const double remaining = world.remaining_bound(s.t, end_slot, s.peak_cum);
    if (mode == Mode::value_bound && best.feasible && std::isfinite(remaining) &&
        s.value + remaining <= best.value)
      return;
    if (mode == Mode::lex_find && std::isfinite(remaining) &&
        s.value + remaining < target)
      return;
    assign(s, depth, 0);
  }

  void assign(const WorldState& s, int depth, int o) {
    if (done) return;
    if (o == O) {
      if (++steps > node_budget)
        throw Error(ErrorKind::budget_exceeded,
                    "window search exceeded the node budget of " +
                        std::to_string(node_budget));
      WorldState next = s;
      world.step(next, row.data(), nullptr, acts_out.data());
      for (int i = 0; i < O; ++i) {
        path_zones[static_cast<size_t>(depth) * O + i] = row[i];
        path_acts[static_cast<size_t>(depth) * O + i] = acts_out[i];
      }
      at_slot(next, depth + 1);
      return;
    }
    if (passthrough[o]) {
      row[o] = world.trace().zone_of(s.t, o);
      assign(s, depth, o + 1);
      return;
    }
    std::vector<int> cands;
    world.choices(s, o, &cands);
    if (mode == Mode::value_bound) {
      // explore promising zones first for an early strong incumbent
      std::vector<int> ordered;
      ordered.reserve(cands.size());
      for (int z : world.zones_by_value())
        if (std::find(cands.begin(), cands.end(), z) != cands.end())
          ordered.push_back(z);
      for (int z : cands)  // gated-forced zones may sit outside the ranking
        if (std::find(ordered.begin(), ordered.end(), z) == ordered.end())
          ordered.push_back(z);
      cands = std::move(ordered);
    }
    for (int z : cands) {
      row[o] = z;
      assign(s, depth, o + 1);
      if (done) return;
    }
  }
};

}  // namespace

WindowResult optimize_window(const World& world, const WorldState& start,
                             int window_len, const std::vector<uint8_t>& passthrough,
                             int64_t node_budget, bool use_bound) {
  Dfs dfs(world, window_len, passthrough, node_budget);
  if (!use_bound || !world.bounded()) {
    dfs.run(start, Dfs::Mode::lex_exhaustive);
    dfs.best.leaves = dfs.leaves;
    dfs.best.steps = dfs.steps;
    return dfs.best;
  }
  dfs.run(start, Dfs::Mode::value_bound);
  if (!dfs.best.feasible) {
    dfs.best.leaves = dfs.leaves;
    dfs.best.steps = dfs.steps;
    return dfs.best;
  }
  const double value = dfs.best.value;
  const int64_t pass1_leaves = dfs.leaves;
  const int64_t pass1_steps = dfs.steps;
  dfs.run(start, Dfs::Mode::lex_find, value);
  dfs.best.leaves = pass1_leaves;
  dfs.best.steps = dfs.steps;
  dfs.best.steps_pass1 = pass1_steps;
  return dfs.best;
}

double evaluate_window_assignment(const World& world, WorldState state,
                                  const std::vector<int>& zones, int window_len,
                                  WorldState* end_state,
                                  std::vector<int>* activities_out) {
  const int O = world.num_occupants();
  std::vector<int> acts(O);
  if (activities_out) activities_out->clear();
  double start_value = state.value;
  for (int d = 0; d < window_len; ++d) {
    world.step(state, &zones[static_cast<size_t>(d) * O], nullptr, acts.data());
    if (activities_out)
      activities_out->insert(activities_out->end(), acts.begin(), acts.end());
  }
  if (end_state) *end_state = state;
  return state.value - start_value;
}

AttackSchedule windowed_schedule(const SensorTrace& trace, const HomeModel& home,
                                 const adm::AdmModel& model, const AccessProfile& access,
                                 const ScheduleOptions& options) {
  World world(trace, home, model, access);
  AttackSchedule schedule = actual_schedule(trace);
  schedule.strategy = "windowed";
  const int O = home.num_occupants();
  const int64_t N = trace.num_slots;

  WorldState state = world.initial_state(0);
  for (int64_t w = 0; w < N; w += options.window_len) {
    const int wlen = static_cast<int>(std::min<int64_t>(options.window_len, N - w));
    std::vector<uint8_t> passthrough(O, 0);
    WindowResult result;
    while (true) {
      result = optimize_window(world, state, wlen, passthrough,
                               options.node_budget, options.use_bound);
      if (result.feasible) break;
      // No feasible branch: pass occupants through one at a time, untouched
      // ones first so injections already committed stay coherent.
      int pick = -1;
      for (int o = 0; o < O && pick < 0; ++o)
        if (!passthrough[o] && !state.stays[o].touched) pick = o;
      for (int o = 0; o < O && pick < 0; ++o)
        if (!passthrough[o]) pick = o;
      if (pick < 0)
        throw Error(ErrorKind::infeasible_schedule,
                    "window at slot " + std::to_string(w) +
                        " infeasible even with every occupant passed through");
      passthrough[pick] = 1;
    }

    double window_value = result.end_state.value - state.value;
    for (int d = 0; d < wlen; ++d) {
      int64_t t = w + d;
      for (int o = 0; o < O; ++o) {
        int64_t idx = t * O + o;
        schedule.zone[idx] = static_cast<int16_t>(result.zones[static_cast<size_t>(d) * O + o]);
        schedule.activity[idx] =
            static_cast<int16_t>(result.activities[static_cast<size_t>(d) * O + o]);
        schedule.scheduled[idx] = (!passthrough[o] && world.gate_open(t, o)) ? 1 : 0;
      }
    }
    int pt = 0;
    for (uint8_t f : passthrough) pt += f;
    schedule.windows.push_back({w, wlen, window_value, result.leaves, result.steps, pt});
    state = result.end_state;
  }
  schedule.total_value = state.value;
  return schedule;
}

AttackSchedule greedy_schedule(const SensorTrace& trace, const HomeModel& home,
                               const adm::AdmModel& model, const AccessProfile& access) {
  World world(trace, home, model, access);
  AttackSchedule schedule = actual_schedule(trace);
  schedule.strategy = "greedy";
  const int O = home.num_occupants();
  const int64_t N = trace.num_slots;

  std::vector<int> row(O);
  std::vector<int> acts_in(O);
  std::vector<int> acts_out(O);
  std::vector<int> cands;

  double final_value = 0;
  for (int o = 0; o < O; ++o) {
    WorldState state = world.initial_state(0);
    int hold_zone = -1;
    int64_t hold_until = 0;

    for (int64_t t = 0; t < N; ++t) {
      // Other occupants: committed schedule below o, actual above.
      for (int i = 0; i < O; ++i) {
        row[i] = schedule.zone_at(t, i);
        acts_in[i] = i < o ? schedule.activity_at(t, i) : -1;
      }
      acts_in[o] = -1;

      int z;
      if (!world.gate_open(t, o)) {
        z = trace.zone_of(t, o);
        hold_until = t;  // forced slot breaks any hold
      } else if (t < hold_until && hold_zone >= 0 &&
                 world.check_assignment(state, o, hold_zone) == AssignCheck::ok) {
        z = hold_zone;
      } else {
        world.choices(state, o, &cands);
        if (cands.empty()) {
          schedule.deadlocks.push_back({t, o});
          z = trace.zone_of(t, o);
          hold_until = t;
        } else {
          double best_cost = -std::numeric_limits<double>::infinity();
          int best_zone = cands.front();
          for (int cand : cands) {
            WorldState probe = state;
            row[o] = cand;
            double cost = world.step(probe, row.data(), acts_in.data(), nullptr);
            if (cost > best_cost) {
              best_cost = cost;
              best_zone = cand;
            }
          }
          z = best_zone;
          int64_t arrival = z == state.stays[o].zone && state.stays[o].arrival_observed
                                ? state.stays[o].arrival
                                : t;
          int cap = world.stay_cap(o, z, arrival);
          hold_zone = z;
          hold_until = cap >= 1 ? arrival + cap + 1 : t + 1;
        }
      }

      row[o] = z;
      world.step(state, row.data(), acts_in.data(), acts_out.data());
      int64_t idx = t * O + o;
      schedule.zone[idx] = static_cast<int16_t>(z);
      schedule.activity[idx] = static_cast<int16_t>(acts_out[o]);
      schedule.scheduled[idx] = world.gate_open(t, o) ? 1 : 0;
    }
    final_value = state.value;
  }
  schedule.total_value = final_value;
  return schedule;
}

AttackSchedule naive_schedule(const SensorTrace& trace, const HomeModel& home,
                              const AccessProfile& access) {
  AttackSchedule schedule = actual_schedule(trace);
  schedule.strategy = "naive";
  const int O = home.num_occupants();

  // Static zone ranking: steady-state per-slot HVAC cost of one occupant at
  // the zone's costliest activity with CO2 held at the setpoint.
  int target = -1;
  double target_value = -1;
  for (int z : access.zones) {
    if (z == kOutsideZone || z >= home.num_zones()) continue;
    const Zone& zone = home.zones[z];
    double standby_heat = 0;
    for (const Appliance& d : home.appliances)
      if (d.zone == z && d.always_on) standby_heat += d.power_w * d.heat_radiation_factor;
    double best = 0;
    for (int a : zone.allowed_activities) {
      double e = home.co2_rate(0, a);
      double h = home.heat_rate(0, a) + standby_heat;
      double den = home.co2_balance_verbatim
                       ? zone.co2_setpoint_ppm - home.sampling_minutes * 420.0
                       : home.sampling_minutes * (zone.co2_setpoint_ppm - 420.0);
      double qv = den > 1e-9 ? std::max(e * home.sampling_minutes / den, 0.0) : 0.0;
      double qt = h / ((zone.temp_setpoint_f - zone.supply_air_temp_f) *
                       control::kCfmDegFToWatt);
      best = std::max(best, std::max(qv, qt) *
                                (zone.mixed_air_temp_f - zone.supply_air_temp_f));
    }
    if (best > target_value) {
      target_value = best;
      target = z;
    }
  }
  if (target < 0) return schedule;  // no conditioned zone reachable

  const Zone& tz = home.zones[target];
  std::vector<uint8_t> zone_ok(home.num_zones(), 0);
  for (int z : access.zones) zone_ok[z] = 1;

  for (int64_t t = 0; t < trace.num_slots; ++t) {
    if (!access.slot_ok(t)) continue;
    for (int o = 0; o < O; ++o) {
      if (!access.occupant_ok(o)) continue;
      int za = trace.zone_of(t, o);
      if (!zone_ok[za]) continue;
      int64_t idx = t * O + o;
      schedule.scheduled[idx] = 1;
      if (za == target) continue;  // already there, keep actual activity
      schedule.zone[idx] = static_cast<int16_t>(target);
      // Costliest activity of the target zone for this occupant.
      int best_a = kIdleActivity;
      double best_v = -1;
      for (int a : tz.allowed_activities) {
        double v = home.co2_rate(o, a) + home.heat_rate(o, a);
        if (v > best_v) {
          best_v = v;
          best_a = a;
        }
      }
      schedule.activity[idx] = static_cast<int16_t>(best_a);
    }
  }
  return schedule;
}

double schedule_value(const AttackSchedule& schedule, const World& world,
                      int64_t from, int64_t to) {
  if (schedule.num_slots != world.num_slots() ||
      schedule.num_occupants != world.num_occupants())
    throw Error(ErrorKind::invalid, "schedule does not match the trace shape");
  const int O = world.num_occupants();
  WorldState state = world.initial_state(0);
  std::vector<int> row(O);
  std::vector<int> acts(O);
  double from_value = 0;
  for (int64_t t = 0; t < to; ++t) {
    if (t == from) from_value = state.value;
    for (int o = 0; o < O; ++o) {
      row[o] = schedule.zone_at(t, o);
      acts[o] = schedule.activity_at(t, o);
      if (schedule.scheduled_at(t, o) && world.gate_open(t, o)) {
        AssignCheck check = world.check_assignment(state, o, row[o]);
        if (check != AssignCheck::ok)
          throw Error(ErrorKind::infeasible_schedule,
                      "slot " + std::to_string(t) + " occupant " + std::to_string(o) +
                          ": " + to_string(check));
      } else if (row[o] != world.trace().zone_of(t, o)) {
        throw Error(ErrorKind::infeasible_schedule,
                    "slot " + std::to_string(t) + " occupant " + std::to_string(o) +
                        ": unscheduled slot diverges from the actual trace");
      }
    }
    world.step(state, row.data(), acts.data(), nullptr);
  }
  if (from == to) return 0;
  return state.value - from_value;
}

std::vector<uint8_t> TriggerPlan::overlay(int64_t num_slots, int num_appliances) const {
  std::vector<uint8_t> out(num_slots * num_appliances, 0);
  for (const Entry& e : entries) out[e.slot * num_appliances + e.appliance] = 1;
  return out;
}

nlohmann::json trigger_plan_to_json(const TriggerPlan& plan) {
  nlohmann::json j;
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const auto& e : plan.entries)
    entries.push_back({{"slot", e.slot}, {"zone", e.zone}, {"appliance", e.appliance}});
  return j;
}

TriggerPlan trigger_decision(const AttackSchedule& schedule, const SensorTrace& actual,
                             const HomeModel& home, const adm::AdmModel& model,
                             const AccessProfile& access) {
  const int O = schedule.num_occupants;
  const int Z = home.num_zones();
  const int D = home.num_appliances();
  const int64_t N = schedule.num_slots;

  // Candidate activations per Alg.-style gating: within the minStay
  // threshold of a scheduled arrival, zone actually empty, everything
  // accessible, appliance currently off.
  std::set<std::pair<int64_t, int>> seen;
  std::vector<std::vector<std::pair<int, int>>> candidates(N);  // (zone, appliance)
  for (int o = 0; o < O; ++o) {
    int cur_zone = -1;
    int64_t arrival = 0;
    std::optional<int> thresh;
    for (int64_t t = 0; t < N; ++t) {
      int z = schedule.zone_at(t, o);
      if (t == 0 || z != cur_zone) {
        cur_zone = z;
        arrival = t;
        thresh = model.min_stay(t, o, z);
      }
      if (!thresh || t - arrival > *thresh) continue;
      if (z == kOutsideZone || !access.zone_ok(z) || !access.slot_ok(t)) continue;
      if (actual.occupant_count(t, z) != 0) continue;  // someone would notice
      for (const Appliance& d : home.appliances) {
        if (d.zone != z || !d.voice_triggerable) continue;
        if (!access.appliance_ok(d.id)) continue;
        if (actual.appliance_at(t, d.id)) continue;  // activation only
        if (seen.insert({t, d.id}).second) candidates[t].push_back({z, d.id});
      }
    }
  }

  TriggerPlan plan;
  for (int64_t t = 0; t < N; ++t)
    for (const auto& [zone_id, appliance] : candidates[t])
      plan.entries.push_back({t, zone_id, appliance});
  std::sort(plan.entries.begin(), plan.entries.end(), [](const auto& a, const auto& b) {
    return a.slot != b.slot ? a.slot < b.slot : a.appliance < b.appliance;
  });
  (void)Z;
  (void)D;
  return plan;
}

nlohmann::json explain_schedule(const AttackSchedule& schedule, const World& world) {
  nlohmann::json out = nlohmann::json::array();
  const int O = schedule.num_occupants;
  const adm::AdmModel& model = world.model();
  for (int o = 0; o < O; ++o) {
    int64_t arrival = 0;
    for (int64_t t = 1; t < schedule.num_slots; ++t) {
      int prev = schedule.zone_at(t - 1, o);
      int cur = schedule.zone_at(t, o);
      if (cur == prev) continue;
      std::string reason;
      if (!world.gate_open(t, o)) {
        reason = "access gate";
      } else {
        auto cap = model.max_stay(arrival, o, prev);
        if (cap && (t - 1) - arrival >= *cap)
          reason = "maxStay forced exit";
        else
          reason = "in-range exit";
      }
      out.push_back({{"slot", t},
                     {"occupant", o},
                     {"from_zone", prev},
                     {"to_zone", cur},
                     {"stay_duration", (t - 1) - arrival},
                     {"reason", reason}});
      arrival = t;
    }
  }
  return out;
}

}  // namespace hta::attack
