#include <algorithm>
#include <atomic>
#include <thread>

#include "hta/attack/stealth.hpp"
#include "hta/error.hpp"
#include "hta/eval/eval.hpp"

namespace hta::eval {

namespace {

SensorTrace slice_days(const SensorTrace& trace, const HomeModel& home, int day_begin,
                       int day_end) {
  const int64_t spd = trace.slots_per_day;
  const int64_t b = day_begin * spd, e = day_end * spd;
  SensorTrace out;
  out.resize(e - b, home);
  const int O = trace.num_occupants, Z = trace.num_zones, D = trace.num_appliances;
  std::copy(trace.occupant_zone.begin() + b * O, trace.occupant_zone.begin() + e * O,
            out.occupant_zone.begin());
  std::copy(trace.activity.begin() + b * O, trace.activity.begin() + e * O,
            out.activity.begin());
  std::copy(trace.co2.begin() + b * Z, trace.co2.begin() + e * Z, out.co2.begin());
  std::copy(trace.temp.begin() + b * Z, trace.temp.begin() + e * Z, out.temp.begin());
  std::copy(trace.appliance_on.begin() + b * D, trace.appliance_on.begin() + e * D,
            out.appliance_on.begin());
  std::copy(trace.outdoor_temp.begin() + b, trace.outdoor_temp.begin() + e,
            out.outdoor_temp.begin());
  std::copy(trace.outdoor_co2.begin() + b, trace.outdoor_co2.begin() + e,
            out.outdoor_co2.begin());
  return out;
}

std::string algo_name(const AdmSpec& spec) { return adm::to_string(spec.algorithm); }

std::vector<ImpactRow> run_seed(const HomeModel& home, const io::SynthConfig& synth,
                                const ImpactConfig& config, uint64_t seed) {
  std::vector<ImpactRow> rows;
  io::SynthConfig cfg = synth;
  cfg.seed = seed;
  const int total_days = config.train_days + config.eval_days;
  SensorTrace full = io::synth_trace(home, cfg, total_days);

  // The dataset (everything) trains the defender; "partial" attackers see
  // only the first half of its days.
  SensorTrace dataset = full;
  SensorTrace half = slice_days(full, home, 0, std::max(1, total_days / 2));

  std::vector<SensorTrace> eval_days;
  for (int d = config.train_days; d < total_days; ++d)
    eval_days.push_back(slice_days(full, home, d, d + 1));

  double benign_cost = 0;
  for (const SensorTrace& day : eval_days)
    benign_cost += attack::attack_cost(day, home);
  benign_cost = io::round_money(benign_cost);

  for (const AdmSpec& spec : config.adms) {
    adm::AdmModel defender = adm::train({&dataset}, spec.algorithm, spec.params);
    adm::AdmModel attacker_partial;
    bool have_partial = false;

    if (&spec == &config.adms.front()) {
      ImpactRow benign;
      benign.seed = seed;
      benign.strategy = "benign";
      benign.adm = "-";
      benign.knowledge = "-";
      benign.access = "-";
      benign.total_cost = benign_cost;
      benign.benign_cost = benign_cost;
      for (const SensorTrace& day : eval_days)
        benign.alarms += static_cast<int64_t>(adm::detect(day, defender).size());
      rows.push_back(benign);
    }

    for (const std::string& knowledge : config.knowledge) {
      const adm::AdmModel* attacker = &defender;
      if (knowledge == "partial") {
        if (!have_partial) {
          attacker_partial = adm::train({&half}, spec.algorithm, spec.params);
          have_partial = true;
        }
        attacker = &attacker_partial;
      }

      for (const std::string& strategy : config.strategies) {
        for (bool trig : config.trigger) {
          for (const AccessProfile& access : config.access_profiles) {
            ImpactRow row;
            row.seed = seed;
            row.strategy = strategy;
            row.adm = algo_name(spec);
            row.knowledge = knowledge;
            row.trigger = trig;
            row.access = access.label;
            row.benign_cost = benign_cost;

            double total = 0;
            for (const SensorTrace& day : eval_days) {
              attack::AttackSchedule schedule;
              if (strategy == "naive")
                schedule = attack::naive_schedule(day, home, access);
              else if (strategy == "greedy")
                schedule = attack::greedy_schedule(day, home, *attacker, access);
              else if (strategy == "windowed")
                schedule = attack::windowed_schedule(day, home, *attacker, access,
                                                     config.schedule);
              else
                throw Error(ErrorKind::config, "unknown strategy: " + strategy);

              attack::TriggerPlan plan;
              if (trig)
                plan = attack::trigger_decision(schedule, day, home, *attacker, access);
              attack::ReplayResult replay =
                  attack::realtime_replay(schedule, plan, day, home, access);
              total += attack::attack_cost(replay.attacked, home);
              row.alarms +=
                  static_cast<int64_t>(adm::detect(replay.attacked, defender).size());
              if (strategy != "naive") {
                auto verdict = attack::verify_stealth(day, replay.attacked, home,
                                                      *attacker, access);
                row.stealthy = row.stealthy && verdict.stealthy;
              } else {
                row.stealthy = false;
              }
            }
            row.total_cost = io::round_money(total);
            row.uplift_abs = io::round_money(row.total_cost - benign_cost);
            row.uplift_pct = benign_cost > 0
                                 ? io::round_money(100.0 * (row.total_cost - benign_cost) /
                                                   benign_cost)
                                 : 0.0;
            rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return rows;
}

}  // namespace

ImpactConfig impact_config_from_json(const nlohmann::json& j, const HomeModel& home) {
  ImpactConfig config;
  try {
    config.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    config.train_days = j.value("train_days", 10);
    config.eval_days = j.value("eval_days", 1);
    if (j.contains("strategies"))
      config.strategies = j.at("strategies").get<std::vector<std::string>>();
    config.adms.clear();
    for (const auto& ja : j.at("adms")) {
      AdmSpec spec;
      spec.algorithm = adm::cluster_algo_from_string(ja.at("algorithm").get<std::string>());
      spec.params.eps = ja.value("eps", spec.params.eps);
      spec.params.min_pts = ja.value("min_pts", spec.params.min_pts);
      spec.params.k = ja.value("k", spec.params.k);
      config.adms.push_back(spec);
    }
    if (j.contains("knowledge"))
      config.knowledge = j.at("knowledge").get<std::vector<std::string>>();
    if (j.contains("trigger"))
      config.trigger = j.at("trigger").get<std::vector<bool>>();
    config.access_profiles.clear();
    for (const auto& jp : j.at("access"))
      config.access_profiles.push_back(io::access_from_json(jp, home));
    config.schedule.window_len = j.value("window", 10);
    config.schedule.node_budget = j.value("node_budget", config.schedule.node_budget);
    config.jobs = j.value("jobs", 1);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("impact config: ") + e.what());
  }
  if (config.seeds.empty()) throw Error(ErrorKind::config, "impact config: no seeds");
  if (config.adms.empty()) throw Error(ErrorKind::config, "impact config: no adms");
  if (config.access_profiles.empty())
    throw Error(ErrorKind::config, "impact config: no access profiles");
  return config;
}

std::vector<ImpactRow> impact_sweep(const HomeModel& home, const io::SynthConfig& synth,
                                    const ImpactConfig& config) {
  std::vector<std::vector<ImpactRow>> per_seed(config.seeds.size());
  const int jobs = std::max(1, config.jobs);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= config.seeds.size()) return;
      per_seed[i] = run_seed(home, synth, config, config.seeds[i]);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<ImpactRow> rows;
  for (auto& block : per_seed)
    rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

io::Report impact_report(const std::vector<ImpactRow>& rows) {
  io::Report report;
  report.columns = {"seed",       "strategy",   "adm",        "knowledge",
                    "trigger",    "access",     "total_cost", "benign_cost",
                    "uplift_abs", "uplift_pct", "alarms",     "stealthy"};
  for (const ImpactRow& r : rows) {
    report.rows.push_back({std::to_string(r.seed), r.strategy, r.adm, r.knowledge,
                           r.trigger ? "1" : "0", r.access, io::format_money(r.total_cost),
                           io::format_money(r.benign_cost), io::format_money(r.uplift_abs),
                           io::format_money(r.uplift_pct), std::to_string(r.alarms),
                           r.stealthy ? "1" : "0"});
  }
  return report;
}

}  // namespace hta::eval
