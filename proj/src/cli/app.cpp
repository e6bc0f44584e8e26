#include "hta/cli/app.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

#include "hta/adm/model.hpp"
#include "hta/attack/stealth.hpp"
#include "hta/control/controller.hpp"
#include "hta/error.hpp"
#include "hta/eval/eval.hpp"
#include "hta/io/io.hpp"

namespace hta::cli {

namespace {

namespace fs = std::filesystem;

struct Manifest {
  std::string subcommand;
  std::map<std::string, std::string> inputs;
  uint64_t seed = 0;
  std::string out_dir;
  std::string status = "ok";
  std::string error;
  double wall_ms = 0;
};

void write_manifest(const Manifest& m) {
  if (m.out_dir.empty()) return;
  nlohmann::json j;
  j["subcommand"] = m.subcommand;
  j["inputs"] = m.inputs;
  j["seed"] = m.seed;
  j["out_dir"] = m.out_dir;
  j["version"] = kVersion;
  j["status"] = m.status;
  if (!m.error.empty()) j["error"] = m.error;
  j["wall_ms"] = m.wall_ms;
  std::error_code ec;
  fs::create_directories(m.out_dir, ec);
  try {
    io::atomic_write(fs::path(m.out_dir) / "manifest.json", j.dump(2) + "\n");
  } catch (const Error&) {
    // manifest is best-effort on the failure path
  }
}

int run_with_manifest(Manifest& manifest, const std::function<int()>& body) {
  auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    std::error_code ec;
    if (!manifest.out_dir.empty()) fs::create_directories(manifest.out_dir, ec);
    code = body();
    if (code != 0) manifest.status = "failed";
  } catch (const Error& e) {
    manifest.status = "error";
    manifest.error = e.what();
    std::cerr << "error: " << e.what() << "\n";
    code = e.exit_code();
  } catch (const std::exception& e) {
    manifest.status = "error";
    manifest.error = e.what();
    std::cerr << "error: " << e.what() << "\n";
    code = 1;
  }
  manifest.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  write_manifest(manifest);
  return code;
}

AccessProfile resolve_access(const std::string& spec, const HomeModel& home) {
  if (spec.empty() || spec == "full") return AccessProfile::full(home);
  return io::load_access(spec, home);
}

adm::AdmModel load_model(const std::string& path) {
  return adm::model_from_json(io::load_json(path));
}

io::Report control_log_report(const ControlLog& log) {
  io::Report report;
  report.columns = {"slot", "consumption_kwh", "cumulative_peak_kwh", "slot_cost"};
  for (int64_t t = 0; t < log.num_slots; ++t)
    report.rows.push_back({std::to_string(t), io::format_number(log.consumption_kwh[t]),
                           io::format_number(log.cumulative_peak_kwh[t]),
                           io::format_money(log.slot_cost[t])});
  return report;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"attack analytics for activity-driven smart-home HVAC control"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string home_path, trace_path, out_dir, format = "csv";
  uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--format", format, "report format: csv or json")
      ->envname("HTA_FORMAT");
  app.add_option("--jobs", jobs, "parallel workers for sweeps")->envname("HTA_JOBS");

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "run the controller over a trace");
  sim->add_option("--home", home_path, "home config JSON")->required();
  sim->add_option("--trace", trace_path, "trace CSV")->required();
  sim->add_option("--out", out_dir, "output directory")->required()->envname("HTA_OUT");
  bool sim_verify = false;
  sim->add_flag("--verify", sim_verify, "check physics residuals");

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a synthetic trace");
  std::string synth_cfg_path;
  int synth_days = 1;
  synth->add_option("--home", home_path)->required();
  synth->add_option("--synth-config", synth_cfg_path)->required();
  synth->add_option("--days", synth_days)->required();
  synth->add_option("--seed", seed)->envname("HTA_SEED");
  synth->add_option("--out", out_dir)->required()->envname("HTA_OUT");

  // ---- train-adm ----
  auto* train = app.add_subcommand("train-adm", "fit the anomaly detection model");
  std::vector<std::string> train_traces;
  std::string algorithm = "dbscan";
  double eps = 3.0;
  int min_pts = 30, kk = 29;
  bool do_sweep = false;
  std::vector<double> sweep_eps;
  std::vector<int> sweep_min_pts, sweep_k;
  train->add_option("--home", home_path)->required();
  train->add_option("--trace", train_traces, "training trace CSVs")->required();
  train->add_option("--algorithm", algorithm, "dbscan or kmeans");
  train->add_option("--eps", eps);
  train->add_option("--min-pts", min_pts);
  train->add_option("--k", kk);
  train->add_flag("--sweep", do_sweep, "grid-search hyperparameters");
  train->add_option("--sweep-eps", sweep_eps);
  train->add_option("--sweep-min-pts", sweep_min_pts);
  train->add_option("--sweep-k", sweep_k);
  train->add_option("--out", out_dir)->required()->envname("HTA_OUT");

  // ---- attack ----
  auto* atk = app.add_subcommand("attack", "synthesize and replay an attack");
  std::string model_path, access_spec = "full", strategy = "windowed";
  std::string defender_path;
  int window_len = 10;
  int64_t node_budget = 20000000;
  bool trigger = false, explain = false, no_bound = false;
  atk->add_option("--home", home_path)->required();
  atk->add_option("--trace", trace_path)->required();
  atk->add_option("--model", model_path, "attacker ADM model JSON")->required();
  atk->add_option("--defender-model", defender_path, "defender model (defaults to --model)");
  atk->add_option("--strategy", strategy, "naive, greedy or windowed");
  atk->add_option("--access", access_spec, "access profile JSON or 'full'");
  atk->add_option("--window", window_len, "optimization window length");
  atk->add_option("--node-budget", node_budget);
  atk->add_flag("--trigger", trigger, "enable appliance triggering");
  atk->add_flag("--explain", explain, "dump per-transition constraint notes");
  atk->add_flag("--no-bound", no_bound, "disable branch-and-bound pruning");
  atk->add_option("--seed", seed)->envname("HTA_SEED");
  atk->add_option("--out", out_dir)->required()->envname("HTA_OUT");

  // ---- impact ----
  auto* imp = app.add_subcommand("impact", "attack impact sweep");
  std::string sweep_cfg_path;
  imp->add_option("--home", home_path)->required();
  imp->add_option("--synth-config", synth_cfg_path)->required();
  imp->add_option("--sweep-config", sweep_cfg_path)->required();
  imp->add_option("--out", out_dir)->required()->envname("HTA_OUT");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "window optimizer scalability bench");
  std::string bench_cfg_path;
  bench->add_option("--home", home_path)->required();
  bench->add_option("--bench-config", bench_cfg_path)->required();
  bench->add_option("--out", out_dir)->required()->envname("HTA_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (format != "csv" && format != "json") {
    std::cerr << "error: --format must be csv or json\n";
    return 2;
  }

  Manifest manifest;
  manifest.seed = seed;
  manifest.out_dir = out_dir;

  if (*sim) {
    manifest.subcommand = "simulate";
    manifest.inputs = {{"home", home_path}, {"trace", trace_path}};
    return run_with_manifest(manifest, [&]() {
      HomeModel home = io::load_home(home_path);
      SensorTrace trace = io::load_trace(trace_path, home);
      ControlLog log = control::simulate(trace, home);
      io::write_report(control_log_report(log), fs::path(out_dir) / ("control_log." + format),
                       format);
      nlohmann::json summary;
      summary["total_cost"] = io::round_money(log.total_cost);
      summary["slots"] = log.num_slots;
      if (sim_verify) {
        auto residuals = control::verify_physics(trace, home, 1e-6, nullptr, nullptr, &log);
        summary["residual_checked"] = residuals.checked;
        summary["residual_violations"] = residuals.violations.size();
        summary["max_residual"] = residuals.max_residual;
      }
      io::atomic_write(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
      std::cout << "total_cost=" << io::format_money(log.total_cost) << "\n";
      return 0;
    });
  }

  if (*synth) {
    manifest.subcommand = "synth";
    manifest.inputs = {{"home", home_path}, {"synth_config", synth_cfg_path}};
    return run_with_manifest(manifest, [&]() {
      HomeModel home = io::load_home(home_path);
      io::SynthConfig cfg = io::load_synth_config(synth_cfg_path, home);
      cfg.seed = seed;
      SensorTrace trace = io::synth_trace(home, cfg, synth_days);
      io::write_trace(trace, home, fs::path(out_dir) / "trace.csv");
      std::cout << "slots=" << trace.num_slots << "\n";
      return 0;
    });
  }

  if (*train) {
    manifest.subcommand = "train-adm";
    manifest.inputs = {{"home", home_path}};
    for (size_t i = 0; i < train_traces.size(); ++i)
      manifest.inputs["trace" + std::to_string(i)] = train_traces[i];
    return run_with_manifest(manifest, [&]() {
      HomeModel home = io::load_home(home_path);
      std::vector<SensorTrace> traces;
      std::vector<const SensorTrace*> ptrs;
      for (const auto& p : train_traces) traces.push_back(io::load_trace(p, home));
      for (const auto& t : traces) ptrs.push_back(&t);
      adm::ClusterAlgo algo = adm::cluster_algo_from_string(algorithm);

      if (do_sweep) {
        // Rank hyperparameter candidates by the combined quality order:
        // lower DBI, higher SC, higher CHI.
        struct Candidate {
          adm::Hyperparams params;
          double dbi = 0, sc = 0, chi = 0;
          int scored_pairs = 0;
        };
        std::vector<Candidate> candidates;
        if (algo == adm::ClusterAlgo::dbscan) {
          if (sweep_eps.empty()) sweep_eps = {2, 3, 5, 8};
          if (sweep_min_pts.empty()) sweep_min_pts = {3, 5, 10, 30};
          for (double e : sweep_eps)
            for (int mp : sweep_min_pts)
              candidates.push_back({{e, mp, kk}, 0, 0, 0, 0});
        } else {
          if (sweep_k.empty()) sweep_k = {2, 3, 5, 8, 15, 29};
          for (int kv : sweep_k) candidates.push_back({{eps, min_pts, kv}, 0, 0, 0, 0});
        }
        for (Candidate& c : candidates) {
          adm::AdmModel m = adm::train(ptrs, algo, c.params);
          // pool quality over pairs with enough structure
          std::map<std::pair<int, int>, std::vector<adm::Point>> pts;
          for (const SensorTrace* tr : ptrs)
            for (const auto& e : adm::extract_stay_events(*tr))
              pts[{e.occupant, e.zone}].push_back(
                  {static_cast<double>(e.arrival_slot_of_day),
                   static_cast<double>(e.duration)});
          for (auto& [key, points] : pts) {
            adm::Labeling lab =
                algo == adm::ClusterAlgo::dbscan
                    ? adm::dbscan_fit(points, c.params.eps, c.params.min_pts)
                    : adm::kmeans_fit(points,
                                      std::min<int>(c.params.k,
                                                    static_cast<int>(points.size())));
            try {
              adm::QualityMetrics q = adm::cluster_quality(points, lab.labels);
              c.dbi += q.dbi;
              c.sc += q.sc;
              c.chi += q.chi;
              c.scored_pairs += 1;
            } catch (const Error&) {
              // single-cluster pairs do not contribute
            }
          }
          if (c.scored_pairs > 0) {
            c.dbi /= c.scored_pairs;
            c.sc /= c.scored_pairs;
            c.chi /= c.scored_pairs;
          }
        }
        auto rank_of = [&](auto key) {
          std::vector<int> idx(candidates.size());
          for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
          std::stable_sort(idx.begin(), idx.end(),
                           [&](int a, int b) { return key(candidates[a], candidates[b]); });
          std::vector<int> rank(candidates.size());
          for (size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = static_cast<int>(r);
          return rank;
        };
        auto r_dbi = rank_of([](const Candidate& a, const Candidate& b) { return a.dbi < b.dbi; });
        auto r_sc = rank_of([](const Candidate& a, const Candidate& b) { return a.sc > b.sc; });
        auto r_chi = rank_of([](const Candidate& a, const Candidate& b) { return a.chi > b.chi; });

        io::Report sweep_report;
        sweep_report.columns = {"eps", "min_pts", "k", "dbi", "sc", "chi", "rank"};
        int best = 0, best_rank = 1 << 30;
        for (size_t i = 0; i < candidates.size(); ++i) {
          int combined = r_dbi[i] + r_sc[i] + r_chi[i];
          if (combined < best_rank) {
            best_rank = combined;
            best = static_cast<int>(i);
          }
          const Candidate& c = candidates[i];
          sweep_report.rows.push_back(
              {io::format_number(c.params.eps), std::to_string(c.params.min_pts),
               std::to_string(c.params.k), io::format_number(c.dbi),
               io::format_number(c.sc), io::format_number(c.chi),
               std::to_string(combined)});
        }
        io::write_report(sweep_report, fs::path(out_dir) / ("sweep." + format), format);
        adm::AdmModel model = adm::train(ptrs, algo, candidates[best].params);
        io::atomic_write(fs::path(out_dir) / "model.json",
                         adm::model_to_json(model).dump(2) + "\n");
        std::cout << "best eps=" << candidates[best].params.eps
                  << " min_pts=" << candidates[best].params.min_pts
                  << " k=" << candidates[best].params.k << "\n";
        return 0;
      }

      adm::Hyperparams params{eps, min_pts, kk};
      adm::AdmModel model = adm::train(ptrs, algo, params);
      io::atomic_write(fs::path(out_dir) / "model.json",
                       adm::model_to_json(model).dump(2) + "\n");
      std::cout << "pairs=" << model.pairs.size() << " points=" << model.training_points
                << "\n";
      return 0;
    });
  }

  if (*atk) {
    manifest.subcommand = "attack";
    manifest.inputs = {{"home", home_path},
                       {"trace", trace_path},
                       {"model", model_path},
                       {"access", access_spec}};
    return run_with_manifest(manifest, [&]() {
      HomeModel home = io::load_home(home_path);
      SensorTrace trace = io::load_trace(trace_path, home);
      adm::AdmModel attacker = load_model(model_path);
      adm::AdmModel defender =
          defender_path.empty() ? attacker : load_model(defender_path);
      AccessProfile access = resolve_access(access_spec, home);

      attack::AttackSchedule schedule;
      attack::ScheduleOptions options;
      options.window_len = window_len;
      options.node_budget = node_budget;
      options.use_bound = !no_bound;
      if (strategy == "naive")
        schedule = attack::naive_schedule(trace, home, access);
      else if (strategy == "greedy")
        schedule = attack::greedy_schedule(trace, home, attacker, access);
      else if (strategy == "windowed")
        schedule = attack::windowed_schedule(trace, home, attacker, access, options);
      else
        throw Error(ErrorKind::config, "unknown strategy: " + strategy);

      attack::TriggerPlan plan;
      if (trigger)
        plan = attack::trigger_decision(schedule, trace, home, attacker, access);
      attack::ReplayResult replay =
          attack::realtime_replay(schedule, plan, trace, home, access);

      double benign = attack::attack_cost(trace, home);
      double attacked = attack::attack_cost(replay.attacked, home);
      auto verdict = attack::verify_stealth(trace, replay.attacked, home, attacker, access);
      auto alarms = adm::detect(replay.attacked, defender);

      io::atomic_write(fs::path(out_dir) / "schedule.json",
                       attack::schedule_to_json(schedule).dump(2) + "\n");
      if (trigger)
        io::atomic_write(fs::path(out_dir) / "trigger.json",
                         attack::trigger_plan_to_json(plan).dump(2) + "\n");
      io::write_trace(replay.attacked, home, fs::path(out_dir) / "attacked_trace.csv");
      if (explain) {
        attack::World world(trace, home, attacker, access);
        io::atomic_write(fs::path(out_dir) / "explain.json",
                         attack::explain_schedule(schedule, world).dump(2) + "\n");
      }

      nlohmann::json summary;
      summary["strategy"] = strategy;
      summary["benign_cost"] = io::round_money(benign);
      summary["attack_cost"] = io::round_money(attacked);
      summary["uplift_abs"] = io::round_money(attacked - benign);
      summary["uplift_pct"] =
          benign > 0 ? io::round_money(100.0 * (attacked - benign) / benign) : 0.0;
      summary["alarms"] = alarms.size();
      summary["stealthy"] = verdict.stealthy;
      summary["stealth_violations"] = verdict.violations.size();
      summary["trigger_entries"] = plan.entries.size();
      summary["injected_moves"] = replay.vector.moves.size();
      io::atomic_write(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

      std::cout << "benign=" << io::format_money(benign)
                << " attacked=" << io::format_money(attacked)
                << " alarms=" << alarms.size() << " stealthy=" << verdict.stealthy
                << "\n";
      if (strategy != "naive" && !verdict.stealthy) {
        std::cerr << "stealth verdict not clean: " << verdict.violations.size()
                  << " violations\n";
        return 1;
      }
      return 0;
    });
  }

  if (*imp) {
    manifest.subcommand = "impact";
    manifest.inputs = {{"home", home_path},
                       {"synth_config", synth_cfg_path},
                       {"sweep_config", sweep_cfg_path}};
    return run_with_manifest(manifest, [&]() {
      HomeModel home = io::load_home(home_path);
      io::SynthConfig synth_cfg = io::load_synth_config(synth_cfg_path, home);
      eval::ImpactConfig cfg =
          eval::impact_config_from_json(io::load_json(sweep_cfg_path), home);
      if (jobs > 1) cfg.jobs = jobs;
      auto rows = eval::impact_sweep(home, synth_cfg, cfg);
      io::write_report(eval::impact_report(rows), fs::path(out_dir) / ("impact." + format),
                       format);
      std::cout << "rows=" << rows.size() << "\n";
      return 0;
    });
  }

  if (*bench) {
    manifest.subcommand = "bench";
    manifest.inputs = {{"home", home_path}, {"bench_config", bench_cfg_path}};
    return run_with_manifest(manifest, [&]() {
      HomeModel home = io::load_home(home_path);
      eval::BenchConfig cfg = eval::bench_config_from_json(io::load_json(bench_cfg_path));
      auto points = eval::scalability_bench(home, cfg);
      io::write_report(eval::bench_report(points), fs::path(out_dir) / ("bench." + format),
                       format);
      std::cout << "points=" << points.size() << "\n";
      return 0;
    });
  }

  return 2;
}

}  // namespace hta::cli
