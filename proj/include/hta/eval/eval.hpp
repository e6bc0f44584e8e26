#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hta/adm/model.hpp"
#include "hta/attack/schedule.hpp"
#include "hta/core/model.hpp"
#include "hta/io/io.hpp"

namespace hta::eval {

struct ConfusionCounts {
  int64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

struct ConfusionMetrics {
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
};

ConfusionMetrics confusion_metrics(const ConfusionCounts& counts);
// Aligned boolean vectors: predictions vs ground truth.
ConfusionMetrics confusion_metrics(const std::vector<bool>& predicted,
                                   const std::vector<bool>& truth);

// One end-to-end attack evaluation row.
struct ImpactRow {
  uint64_t seed = 0;
  std::string strategy;   // benign | naive | greedy | windowed
  std::string adm;        // dbscan | kmeans | -
  std::string knowledge;  // all | partial | -
  bool trigger = false;
  std::string access;     // profile label
  double total_cost = 0;  // dollars, 6dp
  double benign_cost = 0;
  double uplift_abs = 0;
  double uplift_pct = 0;
  int64_t alarms = 0;
  bool stealthy = true;
};

struct AdmSpec {
  adm::ClusterAlgo algorithm = adm::ClusterAlgo::dbscan;
  adm::Hyperparams params;
};

struct ImpactConfig {
  std::vector<uint64_t> seeds;
  int train_days = 10;
  int eval_days = 1;
  std::vector<std::string> strategies{"naive", "greedy", "windowed"};
  std::vector<AdmSpec> adms;
  std::vector<std::string> knowledge{"all"};  // all | partial
  std::vector<bool> trigger{false, true};
  std::vector<AccessProfile> access_profiles;
  attack::ScheduleOptions schedule;
  int jobs = 1;
};

ImpactConfig impact_config_from_json(const nlohmann::json& j, const HomeModel& home);

// Cross-product of strategies, detectors, attacker knowledge, triggering and
// access profiles; one benign row per seed. Partial knowledge trains the
// attacker's model copy on the first half of the training days while the
// defender keeps them all. Deterministic per (seed, config).
std::vector<ImpactRow> impact_sweep(const HomeModel& home, const io::SynthConfig& synth,
                                    const ImpactConfig& config);

io::Report impact_report(const std::vector<ImpactRow>& rows);

struct BenchPoint {
  std::string sweep;  // "window" | "zones"
  int64_t param = 0;  // window length or zone count
  double ms = 0;      // median wall-clock per window sweep
  int64_t nodes = 0;  // leaves explored
  bool censored = false;  // budget exceeded
};

struct BenchConfig {
  std::vector<int> window_lengths{4, 6, 8, 10};
  std::vector<int> zone_counts{2, 3, 4, 5, 6};
  int zone_sweep_window = 4;
  int repetitions = 5;
  int64_t slots = 60;  // horizon per timed run
  int64_t node_budget = 50000000;
  int duration_cap = 600;  // permissive model stay ceiling
};

BenchConfig bench_config_from_json(const nlohmann::json& j);

// Wall-clock scaling of the window optimizer. The window-length sweep runs
// the unbounded search (node counts are exactly |Z^A|^I on the permissive
// model); the zone sweep keeps pruning on. Zone scaling clones zone 1 with
// perturbed parameters. Median over repetitions, warmup discarded.
std::vector<BenchPoint> scalability_bench(const HomeModel& home, const BenchConfig& config);

io::Report bench_report(const std::vector<BenchPoint>& points);

// Single rectangle hull per (occupant, zone) admitting every arrival and
// durations 1..duration_cap; every choice is feasible everywhere.
adm::AdmModel make_permissive_model(const HomeModel& home, int duration_cap);

}  // namespace hta::eval
