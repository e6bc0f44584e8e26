#include <algorithm>
#include <chrono>
#include <cmath>

#include "hta/error.hpp"
#include "hta/eval/eval.hpp"

namespace hta::eval {

namespace {

// Minimal benign trace: one tracked occupant outside, zones idle at their
// setpoints. Good enough to drive the optimizer; never verified.
SensorTrace flat_trace(const HomeModel& home, int64_t slots) {
  SensorTrace trace;
  trace.resize(slots, home);
  for (int64_t t = 0; t < slots; ++t) {
    for (int z = 1; z < home.num_zones(); ++z) {
      trace.co2[t * home.num_zones() + z] = home.zones[z].co2_setpoint_ppm;
      trace.temp[t * home.num_zones() + z] = home.zones[z].temp_setpoint_f;
    }
    trace.outdoor_co2[t] = 420.0;
    trace.outdoor_temp[t] = 70.0;
    trace.co2[t * home.num_zones() + kOutsideZone] = 420.0;
    trace.temp[t * home.num_zones() + kOutsideZone] = 70.0;
  }
  return trace;
}

// Home with `conditioned` clones of the template zone, parameters perturbed
// so one zone dominates the value ordering.
HomeModel cloned_home(const HomeModel& base, int conditioned) {
  HomeModel home = base;
  const Zone& tmpl = base.zones.at(1);
  home.zones.clear();
  home.zones.push_back(base.zones.at(0));
  home.appliances.clear();
  for (int i = 0; i < conditioned; ++i) {
    Zone z = tmpl;
    z.id = 1 + i;
    z.name = "clone" + std::to_string(i);
    z.volume_ft3 = tmpl.volume_ft3 * (1.0 + 0.03 * i);
    z.mixed_air_temp_f = tmpl.mixed_air_temp_f + 0.5 * i;
    home.zones.push_back(z);
  }
  return home;
}

struct TimedRun {
  double ms = 0;
  int64_t leaves = 0;
  bool censored = false;
};

TimedRun timed_sweep(const HomeModel& home, const SensorTrace& trace,
                     const adm::AdmModel& model, const AccessProfile& access,
                     int window_len, int64_t node_budget, bool use_bound) {
  attack::World world(trace, home, model, access);
  std::vector<uint8_t> passthrough(home.num_occupants(), 0);
  TimedRun run;
  auto start = std::chrono::steady_clock::now();
  attack::WorldState state = world.initial_state(0);
  try {
    for (int64_t w = 0; w < trace.num_slots; w += window_len) {
      int wlen = static_cast<int>(std::min<int64_t>(window_len, trace.num_slots - w));
      attack::WindowResult result = attack::optimize_window(
          world, state, wlen, passthrough, node_budget, use_bound);
      if (!result.feasible)
        throw Error(ErrorKind::infeasible_schedule, "bench window infeasible");
      run.leaves += result.leaves;
      state = result.end_state;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget_exceeded) throw;
    run.censored = true;
  }
  auto end = std::chrono::steady_clock::now();
  run.ms = std::chrono::duration<double, std::milli>(end - start).count();
  return run;
}

BenchPoint measure(const HomeModel& home, const SensorTrace& trace,
                   const adm::AdmModel& model, const AccessProfile& access,
                   const std::string& sweep, int64_t param, int window_len,
                   int repetitions, int64_t node_budget, bool use_bound) {
  BenchPoint point;
  point.sweep = sweep;
  point.param = param;
  timed_sweep(home, trace, model, access, window_len, node_budget, use_bound);  // warmup
  std::vector<double> times;
  for (int r = 0; r < repetitions; ++r) {
    TimedRun run = timed_sweep(home, trace, model, access, window_len, node_budget,
                               use_bound);
    point.nodes = run.leaves;
    point.censored = run.censored;
    times.push_back(run.ms);
  }
  std::sort(times.begin(), times.end());
  point.ms = times[times.size() / 2];
  return point;
}

}  // namespace

adm::AdmModel make_permissive_model(const HomeModel& home, int duration_cap) {
  adm::AdmModel model;
  model.algorithm = adm::ClusterAlgo::dbscan;
  model.slots_per_day = home.slots_per_day;
  model.num_occupants = home.num_occupants();
  model.num_zones = home.num_zones();
  model.duration_ceiling = duration_cap + 1;
  const double spd = home.slots_per_day;
  for (int o = 0; o < home.num_occupants(); ++o) {
    for (int z = 0; z < home.num_zones(); ++z) {
      adm::PairModel pair;
      pair.occupant = o;
      pair.zone = z;
      adm::HullCluster hull;
      hull.occupant = o;
      hull.zone = z;
      hull.degenerate = true;
      hull.vertices = {{-0.5, 0.5},
                       {spd - 0.5, 0.5},
                       {spd - 0.5, duration_cap + 0.5},
                       {-0.5, duration_cap + 0.5}};
      pair.clusters.push_back(std::move(hull));
      model.pairs.push_back(std::move(pair));
    }
  }
  adm::rebuild_stay_tables(model);
  return model;
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
  BenchConfig config;
  try {
    if (j.contains("window_lengths"))
      config.window_lengths = j.at("window_lengths").get<std::vector<int>>();
    if (j.contains("zone_counts"))
      config.zone_counts = j.at("zone_counts").get<std::vector<int>>();
    config.zone_sweep_window = j.value("zone_sweep_window", 4);
    config.repetitions = j.value("repetitions", 5);
    config.slots = j.value("slots", 60);
    config.node_budget = j.value("node_budget", config.node_budget);
    config.duration_cap = j.value("duration_cap", 600);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("bench config: ") + e.what());
  }
  return config;
}

std::vector<BenchPoint> scalability_bench(const HomeModel& home, const BenchConfig& config) {
  std::vector<BenchPoint> points;

  // Window-length sweep: unbounded exact search over 3 accessible zones so
  // leaf counts are exactly 3^I on the permissive model.
  {
    HomeModel h = cloned_home(home, 2);
    h.occupants.resize(1);
    SensorTrace trace = flat_trace(h, config.slots);
    adm::AdmModel model = make_permissive_model(h, config.duration_cap);
    AccessProfile access = AccessProfile::full(h, "bench");
    for (int wl : config.window_lengths)
      points.push_back(measure(h, trace, model, access, "window", wl, wl,
                               config.repetitions, config.node_budget, false));
  }

  // Zone sweep at fixed window: pruning on, one dominant zone.
  for (int zc : config.zone_counts) {
    HomeModel h = cloned_home(home, zc - 1);
    h.occupants.resize(1);
    SensorTrace trace = flat_trace(h, config.slots);
    adm::AdmModel model = make_permissive_model(h, config.duration_cap);
    AccessProfile access = AccessProfile::full(h, "bench");
    points.push_back(measure(h, trace, model, access, "zones", zc,
                             config.zone_sweep_window, config.repetitions,
                             config.node_budget, true));
  }
  return points;
}

io::Report bench_report(const std::vector<BenchPoint>& points) {
  io::Report report;
  report.columns = {"sweep", "param", "ms", "nodes", "censored"};
  for (const BenchPoint& p : points)
    report.rows.push_back({p.sweep, std::to_string(p.param), io::format_number(p.ms),
                           std::to_string(p.nodes), p.censored ? "1" : "0"});
  return report;
}

}  // namespace hta::eval
