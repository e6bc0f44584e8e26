#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hta/adm/clustering.hpp"
#include "hta/adm/geometry.hpp"
#include "hta/core/trace.hpp"

#include "json.hpp"

namespace hta::adm {

// Maximal presence run of one occupant in one zone with observed arrival and
// exit events; duration = exit - arrival. Runs truncated by either trace
// boundary never fire the corresponding event and are excluded.
struct StayEvent {
  int occupant = 0;
  int zone = 0;
  int64_t arrival = 0;  // global slot of the arrival event
  int64_t exit = 0;     // global slot of the exit event (last present slot)
  int64_t duration = 0;
  int arrival_slot_of_day = 0;
};

std::vector<StayEvent> extract_stay_events(const SensorTrace& trace);

enum class ClusterAlgo { dbscan, kmeans };

std::string to_string(ClusterAlgo algo);
ClusterAlgo cluster_algo_from_string(const std::string& s);

struct Hyperparams {
  double eps = 3.0;   // DBSCAN neighborhood radius, raw slot units
  int min_pts = 30;   // DBSCAN density threshold
  int k = 29;         // K-means cluster count
};

// Trained detector state for one (occupant, zone) pair plus the stay-query
// tables derived from it. Tables materialize the same membership predicate
// the hulls answer, scanned at 1-slot granularity.
struct PairModel {
  int occupant = 0;
  int zone = 0;
  std::vector<HullCluster> clusters;
  int point_count = 0;
  int noise_count = 0;
  int degenerate_count = 0;

  std::vector<int> min_stay_by_sod;  // [slot_of_day], -1 when infeasible
  std::vector<int> max_stay_by_sod;
  std::vector<uint8_t> in_range;     // [sod * (ceiling + 1) + d]

  bool within(double t1, double t2) const {
    for (const HullCluster& c : clusters)
      if (c.contains(t1, t2)) return true;
    return false;
  }
};

struct AdmModel {
  ClusterAlgo algorithm = ClusterAlgo::dbscan;
  Hyperparams params;
  int slots_per_day = 1440;
  int num_occupants = 0;
  int num_zones = 0;
  int64_t duration_ceiling = 1;  // max training duration + 1
  int training_days = 0;
  int64_t training_points = 0;
  std::vector<PairModel> pairs;  // ordered by (occupant, zone)

  const PairModel* pair(int occupant, int zone) const;

  // Hull membership of a feature point for (occupant, zone); false when the
  // pair has no clusters.
  bool within_cluster(double t1, double t2, int occupant, int zone) const;

  // Largest/smallest d >= 1 with (arrival, d) inside some hull; nullopt when
  // no duration is feasible. Arrival may be a global slot.
  std::optional<int> max_stay(int64_t arrival, int occupant, int zone) const;
  std::optional<int> min_stay(int64_t arrival, int occupant, int zone) const;
  bool in_range_stay(int64_t arrival, int occupant, int zone, int64_t duration) const;

  int slot_of_day(int64_t t) const {
    return static_cast<int>(((t % slots_per_day) + slots_per_day) % slots_per_day);
  }
};

// Fit one clustering per (occupant, zone) over (arrival, duration) events and
// linearize every cluster into a convex hull (DBSCAN noise dropped first).
AdmModel train(const std::vector<const SensorTrace*>& traces, ClusterAlgo algorithm,
               const Hyperparams& params);

// Rebuild the stay-query tables from the hulls (after hand-assembling or
// editing a model).
void rebuild_stay_tables(AdmModel& model);

struct ConsistencyResult {
  bool ok = true;
  std::vector<StayEvent> violations;
};

// Every completed stay event of the trace lies inside some hull.
ConsistencyResult consistent(const SensorTrace& trace, const AdmModel& model);

// One alarm per violating stay event.
std::vector<StayEvent> detect(const SensorTrace& trace, const AdmModel& model);

nlohmann::json model_to_json(const AdmModel& model);
AdmModel model_from_json(const nlohmann::json& j);

}  // namespace hta::adm
