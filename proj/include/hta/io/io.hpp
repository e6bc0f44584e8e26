#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hta/core/model.hpp"
#include "hta/core/trace.hpp"

#include "json.hpp"

namespace hta::io {

// Home configuration, JSON schema documented in docs/config.md.
HomeModel load_home(const std::filesystem::path& path);
HomeModel home_from_json(const nlohmann::json& j);
nlohmann::json home_to_json(const HomeModel& home);

AccessProfile access_from_json(const nlohmann::json& j, const HomeModel& home);
AccessProfile load_access(const std::filesystem::path& path, const HomeModel& home);

// Trace CSV: header row mandatory, one row per (slot, occupant), UTF-8, LF.
// Column order documented in docs/config.md.
SensorTrace load_trace(const std::filesystem::path& path, const HomeModel& home);
void write_trace(const SensorTrace& trace, const HomeModel& home,
                 const std::filesystem::path& path);

// Time-banded first-order transition process over zones with per-zone dwell
// ranges and activity weights. Deterministic for a fixed seed; CO2 and
// temperature series come from forward-simulating the controller physics so
// benign traces verify cleanly.
struct SynthBand {
  int start_slot = 0;  // slot-of-day the band begins at
  // transition[from][to]: weight of moving from zone `from` to zone `to`
  // when a dwell expires inside this band.
  std::vector<std::vector<double>> transition;
};

struct SynthConfig {
  uint64_t seed = 0;
  std::vector<SynthBand> bands;                      // sorted by start_slot
  std::vector<std::pair<int, int>> dwell_range;      // [zone] -> {min,max} slots
  std::vector<std::vector<double>> activity_weights; // [zone][activity]
  std::vector<int> start_zone;                       // [occupant]
  double initial_co2_ppm = 0;      // 0 -> zone setpoint
  double initial_temp_f = 0;       // 0 -> zone temp setpoint
  double outdoor_co2_ppm = 420;
  double outdoor_temp_mean_f = 70;
  double outdoor_temp_swing_f = 12;
  // Appliance activation: appliance d turns on when an occupant in its zone
  // performs linked_activity[d]; -1 keeps it off (always_on appliances stay
  // on regardless).
  std::vector<int> linked_activity;
};

SynthConfig load_synth_config(const std::filesystem::path& path, const HomeModel& home);
SynthConfig synth_config_from_json(const nlohmann::json& j, const HomeModel& home);

SensorTrace synth_trace(const HomeModel& home, const SynthConfig& config, int days);

// Tabular report: one header, one row per record. CSV cells hold either
// text or numbers; dollar figures are rounded to 6 decimals upstream.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // pre-formatted cells
};

std::string format_number(double v);
std::string format_money(double v);
double round_money(double v);

void write_report(const Report& report, const std::filesystem::path& path,
                  const std::string& format);  // "csv" or "json"
Report read_report(const std::filesystem::path& path, const std::string& format);

// Atomic write: temp file in the same directory, then rename.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace hta::io
