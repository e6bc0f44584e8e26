#include "hta/adm/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hta/error.hpp"

namespace hta::adm {

std::vector<StayEvent> extract_stay_events(const SensorTrace& trace) {
  std::vector<StayEvent> events;
  for (int o = 0; o < trace.num_occupants; ++o) {
    int64_t run_start = 0;
    int cur = trace.num_slots > 0 ? trace.zone_of(0, o) : 0;
    for (int64_t t = 1; t <= trace.num_slots; ++t) {
      int z = t < trace.num_slots ? trace.zone_of(t, o) : -1;
      if (z == cur) continue;
      // Run [run_start, t-1] in zone cur ended. Arrival is observed only if
      // the run does not touch the trace start; exit only if it does not
      // touch the trace end.
      if (run_start > 0 && t < trace.num_slots) {
        StayEvent e;
        e.occupant = o;
        e.zone = cur;
        e.arrival = run_start;
        e.exit = t - 1;
        e.duration = e.exit - e.arrival;
        e.arrival_slot_of_day = trace.slot_of_day(run_start);
        events.push_back(e);
      }
      run_start = t;
      cur = z;
    }
  }
  std::sort(events.begin(), events.end(), [](const StayEvent& a, const StayEvent& b) {
    if (a.occupant != b.occupant) return a.occupant < b.occupant;
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return a.zone < b.zone;
  });
  return events;
}

std::string to_string(ClusterAlgo algo) {
  return algo == ClusterAlgo::dbscan ? "dbscan" : "kmeans";
}

ClusterAlgo cluster_algo_from_string(const std::string& s) {
  if (s == "dbscan") return ClusterAlgo::dbscan;
  if (s == "kmeans") return ClusterAlgo::kmeans;
  throw Error(ErrorKind::config, "unknown clustering algorithm: " + s);
}

const PairModel* AdmModel::pair(int occupant, int zone) const {
  for (const PairModel& p : pairs)
    if (p.occupant == occupant && p.zone == zone) return &p;
  return nullptr;
}

bool AdmModel::within_cluster(double t1, double t2, int occupant, int zone) const {
  const PairModel* p = pair(occupant, zone);
  return p && p->within(t1, t2);
}

std::optional<int> AdmModel::max_stay(int64_t arrival, int occupant, int zone) const {
  const PairModel* p = pair(occupant, zone);
  if (!p || p->max_stay_by_sod.empty()) return std::nullopt;
  int v = p->max_stay_by_sod[slot_of_day(arrival)];
  if (v < 0) return std::nullopt;
  return v;
}

std::optional<int> AdmModel::min_stay(int64_t arrival, int occupant, int zone) const {
  const PairModel* p = pair(occupant, zone);
  if (!p || p->min_stay_by_sod.empty()) return std::nullopt;
  int v = p->min_stay_by_sod[slot_of_day(arrival)];
  if (v < 0) return std::nullopt;
  return v;
}

bool AdmModel::in_range_stay(int64_t arrival, int occupant, int zone,
                             int64_t duration) const {
  if (duration < 1 || duration > duration_ceiling) return false;
  const PairModel* p = pair(occupant, zone);
  if (!p || p->in_range.empty()) return false;
  return p->in_range[slot_of_day(arrival) * (duration_ceiling + 1) + duration] != 0;
}

namespace {

// Integer duration interval of one hull on the vertical line t1 = sod.
// Edge constraints are linear in d; bounds are refined with the exact edge
// expression so table entries agree bit-for-bit with the hull predicate.
void hull_duration_interval(const HullCluster& hull, int sod, int64_t ceiling,
                            int64_t* lo_out, int64_t* hi_out) {
  double lo = 1, hi = static_cast<double>(ceiling);
  const size_t n = hull.vertices.size();
  bool empty = false;
  for (size_t i = 0; i < n && !empty; ++i) {
    const Point& a = hull.vertices[i];
    const Point& b = hull.vertices[(i + 1) % n];
    // expression(d) = sod*(b.y-a.y) - d*(b.x-a.x) - (a.x*b.y - a.y*b.x) <= 0
    const double coef = -(b.x - a.x);
    const double rest = sod * (b.y - a.y) - (a.x * b.y - a.y * b.x);
    if (coef == 0) {
      if (rest > 0) empty = true;
    } else if (coef > 0) {
      hi = std::min(hi, std::floor((-rest) / coef));
    } else {
      lo = std::max(lo, std::ceil((-rest) / coef));
    }
  }
  if (empty || lo > hi) {
    *lo_out = 1;
    *hi_out = 0;
    return;
  }
  int64_t ilo = static_cast<int64_t>(lo);
  int64_t ihi = static_cast<int64_t>(hi);
  // Guard the floating divisions with the exact membership predicate.
  while (ilo <= ihi && !hull.contains(sod, static_cast<double>(ilo))) ++ilo;
  while (ihi >= ilo && !hull.contains(sod, static_cast<double>(ihi))) --ihi;
  while (ilo - 1 >= 1 && hull.contains(sod, static_cast<double>(ilo - 1))) --ilo;
  while (ihi + 1 <= ceiling && hull.contains(sod, static_cast<double>(ihi + 1))) ++ihi;
  *lo_out = ilo;
  *hi_out = ihi;
}

void build_stay_tables(PairModel& pair, int slots_per_day, int64_t ceiling) {
  pair.min_stay_by_sod.assign(slots_per_day, -1);
  pair.max_stay_by_sod.assign(slots_per_day, -1);
  pair.in_range.assign(static_cast<size_t>(slots_per_day) * (ceiling + 1), 0);
  for (int sod = 0; sod < slots_per_day; ++sod) {
    int64_t row = static_cast<int64_t>(sod) * (ceiling + 1);
    int mn = -1, mx = -1;
    for (const HullCluster& hull : pair.clusters) {
      int64_t lo, hi;
      hull_duration_interval(hull, sod, ceiling, &lo, &hi);
      for (int64_t d = lo; d <= hi; ++d) pair.in_range[row + d] = 1;
      if (lo <= hi) {
        mn = mn < 0 ? static_cast<int>(lo) : std::min<int>(mn, static_cast<int>(lo));
        mx = std::max<int>(mx, static_cast<int>(hi));
      }
    }
    pair.min_stay_by_sod[sod] = mn;
    pair.max_stay_by_sod[sod] = mx;
  }
}

}  // namespace

void rebuild_stay_tables(AdmModel& model) {
  for (PairModel& pm : model.pairs)
    build_stay_tables(pm, model.slots_per_day, model.duration_ceiling);
}

AdmModel train(const std::vector<const SensorTrace*>& traces, ClusterAlgo algorithm,
               const Hyperparams& params) {
  AdmModel model;
  model.algorithm = algorithm;
  model.params = params;
  if (traces.empty()) throw Error(ErrorKind::config, "train: no traces given");
  model.slots_per_day = traces.front()->slots_per_day;
  model.num_occupants = traces.front()->num_occupants;
  model.num_zones = traces.front()->num_zones;

  std::map<std::pair<int, int>, std::vector<Point>> by_pair;
  int64_t total_slots = 0;
  for (const SensorTrace* trace : traces) {
    total_slots += trace->num_slots;
    for (const StayEvent& e : extract_stay_events(*trace)) {
      by_pair[{e.occupant, e.zone}].push_back(
          {static_cast<double>(e.arrival_slot_of_day), static_cast<double>(e.duration)});
      model.duration_ceiling = std::max(model.duration_ceiling, e.duration + 1);
      model.training_points += 1;
    }
  }
  model.training_days = static_cast<int>(total_slots / model.slots_per_day);

  for (auto& [key, points] : by_pair) {
    PairModel pm;
    pm.occupant = key.first;
    pm.zone = key.second;
    pm.point_count = static_cast<int>(points.size());

    Labeling labeling;
    if (algorithm == ClusterAlgo::dbscan)
      labeling = dbscan_fit(points, params.eps, params.min_pts);
    else
      labeling = kmeans_fit(points, std::min<int>(params.k, static_cast<int>(points.size())));
    pm.noise_count = labeling.noise_count;

    std::map<int, std::vector<Point>> groups;
    for (size_t i = 0; i < points.size(); ++i)
      if (labeling.labels[i] != kNoise) groups[labeling.labels[i]].push_back(points[i]);

    for (auto& [label, member_points] : groups) {
      HullCluster hull;
      hull.occupant = pm.occupant;
      hull.zone = pm.zone;
      hull.point_count = static_cast<int>(member_points.size());
      hull.vertices = hull_or_box(member_points, 0.5, &hull.degenerate);
      if (hull.degenerate) pm.degenerate_count += 1;
      pm.clusters.push_back(std::move(hull));
    }
    std::sort(pm.clusters.begin(), pm.clusters.end(),
              [](const HullCluster& a, const HullCluster& b) {
                return a.vertices.front() < b.vertices.front();
              });
    model.pairs.push_back(std::move(pm));
  }

  for (PairModel& pm : model.pairs)
    build_stay_tables(pm, model.slots_per_day, model.duration_ceiling);
  return model;
}

ConsistencyResult consistent(const SensorTrace& trace, const AdmModel& model) {
  ConsistencyResult result;
  for (const StayEvent& e : extract_stay_events(trace)) {
    if (!model.within_cluster(e.arrival_slot_of_day, static_cast<double>(e.duration),
                              e.occupant, e.zone)) {
      result.ok = false;
      result.violations.push_back(e);
    }
  }
  return result;
}

std::vector<StayEvent> detect(const SensorTrace& trace, const AdmModel& model) {
  return consistent(trace, model).violations;
}

nlohmann::json model_to_json(const AdmModel& model) {
  nlohmann::json j;
  j["algorithm"] = to_string(model.algorithm);
  j["hyperparameters"] = {{"eps", model.params.eps},
                          {"min_pts", model.params.min_pts},
                          {"k", model.params.k}};
  j["slots_per_day"] = model.slots_per_day;
  j["num_occupants"] = model.num_occupants;
  j["num_zones"] = model.num_zones;
  j["duration_ceiling"] = model.duration_ceiling;
  j["training_summary"] = {{"days", model.training_days},
                           {"points", model.training_points}};
  j["pairs"] = nlohmann::json::array();
  for (const PairModel& pm : model.pairs) {
    nlohmann::json jp;
    jp["occupant"] = pm.occupant;
    jp["zone"] = pm.zone;
    jp["point_count"] = pm.point_count;
    jp["noise_count"] = pm.noise_count;
    jp["degenerate_count"] = pm.degenerate_count;
    jp["clusters"] = nlohmann::json::array();
    for (const HullCluster& c : pm.clusters) {
      nlohmann::json jc;
      jc["degenerate"] = c.degenerate;
      jc["point_count"] = c.point_count;
      auto& verts = jc["vertices"] = nlohmann::json::array();
      for (const Point& p : c.vertices) verts.push_back({p.x, p.y});
      jp["clusters"].push_back(std::move(jc));
    }
    j["pairs"].push_back(std::move(jp));
  }
  return j;
}

AdmModel model_from_json(const nlohmann::json& j) {
  AdmModel model;
  model.algorithm = cluster_algo_from_string(j.at("algorithm").get<std::string>());
  const auto& hp = j.at("hyperparameters");
  model.params.eps = hp.at("eps").get<double>();
  model.params.min_pts = hp.at("min_pts").get<int>();
  model.params.k = hp.at("k").get<int>();
  model.slots_per_day = j.at("slots_per_day").get<int>();
  model.num_occupants = j.at("num_occupants").get<int>();
  model.num_zones = j.at("num_zones").get<int>();
  model.duration_ceiling = j.at("duration_ceiling").get<int64_t>();
  model.training_days = j.at("training_summary").at("days").get<int>();
  model.training_points = j.at("training_summary").at("points").get<int64_t>();
  for (const auto& jp : j.at("pairs")) {
    PairModel pm;
    pm.occupant = jp.at("occupant").get<int>();
    pm.zone = jp.at("zone").get<int>();
    pm.point_count = jp.at("point_count").get<int>();
    pm.noise_count = jp.at("noise_count").get<int>();
    pm.degenerate_count = jp.at("degenerate_count").get<int>();
    for (const auto& jc : jp.at("clusters")) {
      HullCluster c;
      c.occupant = pm.occupant;
      c.zone = pm.zone;
      c.degenerate = jc.at("degenerate").get<bool>();
      c.point_count = jc.at("point_count").get<int>();
      for (const auto& v : jc.at("vertices"))
        c.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      pm.clusters.push_back(std::move(c));
    }
    model.pairs.push_back(std::move(pm));
  }
  for (PairModel& pm : model.pairs)
    build_stay_tables(pm, model.slots_per_day, model.duration_ceiling);
  return model;
}

}  // namespace hta::adm
