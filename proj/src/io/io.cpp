#include "hta/io/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hta/control/controller.hpp"
#include "hta/error.hpp"
#include "hta/rng.hpp"

namespace hta::io {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

nlohmann::json load_json(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorKind::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "rename to " + path.string() + ": " + ec.message());
}

HomeModel home_from_json(const nlohmann::json& j) {
  HomeModel home;
  try {
    home.name = j.value("name", "home");
    home.sampling_minutes = j.value("sampling_minutes", 1);
    home.slots_per_day = j.value("slots_per_day", 1440 / home.sampling_minutes);
    home.co2_balance_verbatim = j.value("co2_balance_verbatim", true);

    for (const auto& jz : j.at("zones")) {
      Zone z;
      z.id = jz.at("id").get<int>();
      z.name = jz.value("name", "zone" + std::to_string(z.id));
      z.volume_ft3 = jz.value("volume_ft3", 0.0);
      z.co2_setpoint_ppm = jz.value("co2_setpoint_ppm", 0.0);
      z.temp_setpoint_f = jz.value("temp_setpoint_f", 0.0);
      z.supply_air_temp_f = jz.value("supply_air_temp_f", 0.0);
      z.mixed_air_temp_f = jz.value("mixed_air_temp_f", 0.0);
      if (jz.contains("allowed_activities"))
        z.allowed_activities = jz.at("allowed_activities").get<std::vector<int>>();
      home.zones.push_back(std::move(z));
    }
    for (const auto& jo : j.at("occupants")) {
      OccupantProfile o;
      o.id = jo.at("id").get<int>();
      o.name = jo.value("name", "occupant" + std::to_string(o.id));
      o.activity_scale = jo.value("activity_scale", 1.0);
      home.occupants.push_back(std::move(o));
    }
    for (const auto& ja : j.at("activities")) {
      ActivityProfile a;
      a.id = ja.at("id").get<int>();
      a.name = ja.value("name", "activity" + std::to_string(a.id));
      a.co2_emission = ja.value("co2_emission", 0.0);
      a.heat_radiation_w = ja.value("heat_radiation_w", 0.0);
      home.activities.push_back(std::move(a));
    }
    if (j.contains("appliances")) {
      for (const auto& jd : j.at("appliances")) {
        Appliance d;
        d.id = jd.at("id").get<int>();
        d.name = jd.value("name", "appliance" + std::to_string(d.id));
        d.zone = jd.at("zone").get<int>();
        d.power_w = jd.value("power_w", 0.0);
        d.heat_radiation_factor = jd.value("heat_radiation_factor", 0.0);
        d.voice_triggerable = jd.value("voice_triggerable", false);
        d.always_on = jd.value("always_on", false);
        home.appliances.push_back(std::move(d));
      }
    }
    const auto& jt = j.at("tariff");
    home.tariff.offpeak_rate = jt.at("offpeak_rate").get<double>();
    home.tariff.peak_rate = jt.at("peak_rate").get<double>();
    home.tariff.battery_kwh = jt.value("battery_kwh", 0.0);
    if (jt.contains("peak_slots")) {
      for (const auto& iv : jt.at("peak_slots"))
        for (int s = iv.at(0).get<int>(); s < iv.at(1).get<int>(); ++s)
          home.tariff.peak_slots.push_back(s);
      std::sort(home.tariff.peak_slots.begin(), home.tariff.peak_slots.end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("home config: ") + e.what());
  }

  auto violations = validate_home(home);
  if (!violations.empty()) {
    std::string msg = "home config failed validation:";
    for (const Violation& v : violations) msg += "\n  " + v.field + ": " + v.message;
    throw Error(ErrorKind::config, msg);
  }
  return home;
}

HomeModel load_home(const std::filesystem::path& path) {
  return home_from_json(load_json(path));
}

nlohmann::json home_to_json(const HomeModel& home) {
  nlohmann::json j;
  j["name"] = home.name;
  j["sampling_minutes"] = home.sampling_minutes;
  j["slots_per_day"] = home.slots_per_day;
  j["co2_balance_verbatim"] = home.co2_balance_verbatim;
  j["zones"] = nlohmann::json::array();
  for (const Zone& z : home.zones)
    j["zones"].push_back({{"id", z.id},
                          {"name", z.name},
                          {"volume_ft3", z.volume_ft3},
                          {"co2_setpoint_ppm", z.co2_setpoint_ppm},
                          {"temp_setpoint_f", z.temp_setpoint_f},
                          {"supply_air_temp_f", z.supply_air_temp_f},
                          {"mixed_air_temp_f", z.mixed_air_temp_f},
                          {"allowed_activities", z.allowed_activities}});
  j["occupants"] = nlohmann::json::array();
  for (const OccupantProfile& o : home.occupants)
    j["occupants"].push_back(
        {{"id", o.id}, {"name", o.name}, {"activity_scale", o.activity_scale}});
  j["activities"] = nlohmann::json::array();
  for (const ActivityProfile& a : home.activities)
    j["activities"].push_back({{"id", a.id},
                               {"name", a.name},
                               {"co2_emission", a.co2_emission},
                               {"heat_radiation_w", a.heat_radiation_w}});
  j["appliances"] = nlohmann::json::array();
  for (const Appliance& d : home.appliances)
    j["appliances"].push_back({{"id", d.id},
                               {"name", d.name},
                               {"zone", d.zone},
                               {"power_w", d.power_w},
                               {"heat_radiation_factor", d.heat_radiation_factor},
                               {"voice_triggerable", d.voice_triggerable},
                               {"always_on", d.always_on}});
  // Re-compress peak slots into intervals.
  nlohmann::json peaks = nlohmann::json::array();
  const auto& ps = home.tariff.peak_slots;
  for (size_t i = 0; i < ps.size();) {
    size_t e = i;
    while (e + 1 < ps.size() && ps[e + 1] == ps[e] + 1) ++e;
    peaks.push_back({ps[i], ps[e] + 1});
    i = e + 1;
  }
  j["tariff"] = {{"offpeak_rate", home.tariff.offpeak_rate},
                 {"peak_rate", home.tariff.peak_rate},
                 {"battery_kwh", home.tariff.battery_kwh},
                 {"peak_slots", peaks}};
  return j;
}

AccessProfile access_from_json(const nlohmann::json& j, const HomeModel& home) {
  AccessProfile p;
  try {
    p.label = j.value("label", "access");
    auto ids = [&](const char* key, int count) -> std::vector<int> {
      if (!j.contains(key)) return {};
      if (j.at(key).is_string() && j.at(key).get<std::string>() == "all") {
        std::vector<int> all(count);
        for (int i = 0; i < count; ++i) all[i] = i;
        return all;
      }
      return j.at(key).get<std::vector<int>>();
    };
    p.zones = ids("zones", home.num_zones());
    p.occupants = ids("occupants", home.num_occupants());
    p.appliances = ids("appliances", home.num_appliances());
    if (!j.contains("slots") ||
        (j.at("slots").is_string() && j.at("slots").get<std::string>() == "all")) {
      p.slots = SlotSet::all();
    } else {
      for (const auto& iv : j.at("slots"))
        p.slots.add(iv.at(0).get<int64_t>(), iv.at(1).get<int64_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("access profile: ") + e.what());
  }
  auto violations = p.validate(home);
  if (!violations.empty())
    throw Error(ErrorKind::config,
                "access profile: " + violations.front().field + ": " +
                    violations.front().message);
  return p;
}

AccessProfile load_access(const std::filesystem::path& path, const HomeModel& home) {
  return access_from_json(load_json(path), home);
}

namespace {

std::vector<std::string> trace_header(const HomeModel& home) {
  std::vector<std::string> cols = {"slot", "occupant", "zone", "activity"};
  for (int z = 1; z < home.num_zones(); ++z) cols.push_back("co2_z" + std::to_string(z));
  for (int z = 1; z < home.num_zones(); ++z) cols.push_back("temp_z" + std::to_string(z));
  for (int d = 0; d < home.num_appliances(); ++d) cols.push_back("app_" + std::to_string(d));
  cols.push_back("outdoor_temp");
  cols.push_back("outdoor_co2");
  return cols;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trace(const SensorTrace& trace, const HomeModel& home,
                 const std::filesystem::path& path) {
  std::string out;
  auto header = trace_header(home);
  for (size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + header[i];
  out += "\n";
  for (int64_t t = 0; t < trace.num_slots; ++t) {
    for (int o = 0; o < trace.num_occupants; ++o) {
      out += std::to_string(t);
      out += ',' + std::to_string(o);
      out += ',' + std::to_string(trace.zone_of(t, o));
      out += ',' + std::to_string(trace.activity_of(t, o));
      for (int z = 1; z < trace.num_zones; ++z)
        out += ',' + full_precision(trace.co2_at(t, z));
      for (int z = 1; z < trace.num_zones; ++z)
        out += ',' + full_precision(trace.temp_at(t, z));
      for (int d = 0; d < trace.num_appliances; ++d)
        out += trace.appliance_at(t, d) ? ",1" : ",0";
      out += ',' + full_precision(trace.outdoor_temp[t]);
      out += ',' + full_precision(trace.outdoor_co2[t]);
      out += '\n';
    }
  }
  atomic_write(path, out);
}

SensorTrace load_trace(const std::filesystem::path& path, const HomeModel& home) {
  std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::parse, path.string() + ": empty trace file");
  auto expected = trace_header(home);
  auto got = split_csv_line(line);
  if (got != expected) {
    std::string want;
    for (size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
    throw Error(ErrorKind::parse,
                path.string() + ": header mismatch; expected: " + want);
  }

  std::vector<std::vector<std::string>> rows;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != expected.size())
      throw Error(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                        ": expected " + std::to_string(expected.size()) +
                                        " cells, got " + std::to_string(cells.size()));
    rows.push_back(std::move(cells));
  }
  if (rows.empty())
    throw Error(ErrorKind::parse, path.string() + ": no data rows");
  const int O = home.num_occupants();
  if (rows.size() % O != 0)
    throw Error(ErrorKind::parse, path.string() + ": row count " +
                                      std::to_string(rows.size()) +
                                      " is not a multiple of occupant count");
  const int64_t slots = static_cast<int64_t>(rows.size()) / O;

  SensorTrace trace;
  trace.resize(slots, home);

  const int Z = home.num_zones();
  const int D = home.num_appliances();
  size_t r = 0;
  for (int64_t t = 0; t < slots; ++t) {
    for (int o = 0; o < O; ++o, ++r) {
      const auto& c = rows[r];
      int64_t slot = std::stoll(c[0]);
      if (slot != t) {
        if (o == 0 && slot > t)
          throw Error(ErrorKind::parse,
                      path.string() + ": missing slot " + std::to_string(t) +
                          " (gap before slot " + std::to_string(slot) + ")");
        throw Error(ErrorKind::parse, path.string() + ": expected slot " +
                                          std::to_string(t) + ", found " +
                                          std::to_string(slot));
      }
      int occ = std::stoi(c[1]);
      if (occ != o)
        throw Error(ErrorKind::parse, path.string() + ": slot " + std::to_string(t) +
                                          ": expected occupant " + std::to_string(o) +
                                          ", found " + std::to_string(occ));
      int zone = std::stoi(c[2]);
      if (zone < 0 || zone >= Z)
        throw Error(ErrorKind::parse, path.string() + ": slot " + std::to_string(t) +
                                          ": unknown zone id " + std::to_string(zone));
      int act = std::stoi(c[3]);
      if (act < 0 || act >= home.num_activities())
        throw Error(ErrorKind::parse, path.string() + ": slot " + std::to_string(t) +
                                          ": unknown activity id " + std::to_string(act));
      trace.occupant_zone[t * O + o] = static_cast<int16_t>(zone);
      trace.activity[t * O + o] = static_cast<int16_t>(act);

      size_t col = 4;
      for (int z = 1; z < Z; ++z) trace.co2[t * Z + z] = std::stod(c[col++]);
      for (int z = 1; z < Z; ++z) trace.temp[t * Z + z] = std::stod(c[col++]);
      for (int d = 0; d < D; ++d) {
        const std::string& cell = c[col++];
        if (cell != "0" && cell != "1")
          throw Error(ErrorKind::parse, path.string() + ": slot " + std::to_string(t) +
                                            ": appliance " + std::to_string(d) +
                                            " status must be 0 or 1");
        trace.appliance_on[t * D + d] = cell == "1";
      }
      trace.outdoor_temp[t] = std::stod(c[col++]);
      trace.outdoor_co2[t] = std::stod(c[col++]);
    }
  }
  for (int64_t t = 0; t < slots; ++t) {
    trace.co2[t * Z + kOutsideZone] = trace.outdoor_co2[t];
    trace.temp[t * Z + kOutsideZone] = trace.outdoor_temp[t];
  }

  auto violations = validate_trace(trace, home);
  if (!violations.empty())
    throw Error(ErrorKind::config, path.string() + ": trace failed validation: " +
                                       violations.front().field + ": " +
                                       violations.front().message);
  return trace;
}

SynthConfig synth_config_from_json(const nlohmann::json& j, const HomeModel& home) {
  SynthConfig cfg;
  try {
    cfg.seed = j.value("seed", 0);
    cfg.initial_co2_ppm = j.value("initial_co2_ppm", 0.0);
    cfg.initial_temp_f = j.value("initial_temp_f", 0.0);
    cfg.outdoor_co2_ppm = j.value("outdoor_co2_ppm", 420.0);
    cfg.outdoor_temp_mean_f = j.value("outdoor_temp_mean_f", 70.0);
    cfg.outdoor_temp_swing_f = j.value("outdoor_temp_swing_f", 12.0);
    for (const auto& jb : j.at("bands")) {
      SynthBand band;
      band.start_slot = jb.at("start_slot").get<int>();
      band.transition = jb.at("transition").get<std::vector<std::vector<double>>>();
      cfg.bands.push_back(std::move(band));
    }
    for (const auto& dr : j.at("dwell_range"))
      cfg.dwell_range.emplace_back(dr.at(0).get<int>(), dr.at(1).get<int>());
    cfg.activity_weights = j.at("activity_weights").get<std::vector<std::vector<double>>>();
    if (j.contains("start_zone"))
      cfg.start_zone = j.at("start_zone").get<std::vector<int>>();
    if (j.contains("linked_activity"))
      cfg.linked_activity = j.at("linked_activity").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("synth config: ") + e.what());
  }

  const int Z = home.num_zones();
  if (cfg.bands.empty()) throw Error(ErrorKind::config, "synth config: no bands");
  for (const auto& band : cfg.bands) {
    if (static_cast<int>(band.transition.size()) != Z)
      throw Error(ErrorKind::config, "synth config: transition matrix must be ZxZ");
    for (const auto& row : band.transition) {
      if (static_cast<int>(row.size()) != Z)
        throw Error(ErrorKind::config, "synth config: transition matrix must be ZxZ");
      double sum = 0;
      for (double w : row) {
        if (w < 0) throw Error(ErrorKind::config, "synth config: negative weight");
        sum += w;
      }
      if (sum <= 0)
        throw Error(ErrorKind::config, "synth config: transition row sums must be positive");
    }
  }
  if (static_cast<int>(cfg.dwell_range.size()) != Z)
    throw Error(ErrorKind::config, "synth config: dwell_range needs one entry per zone");
  for (auto& [lo, hi] : cfg.dwell_range)
    if (lo < 1 || hi < lo)
      throw Error(ErrorKind::config, "synth config: dwell ranges must be positive");
  if (static_cast<int>(cfg.activity_weights.size()) != Z)
    throw Error(ErrorKind::config, "synth config: activity_weights needs one row per zone");
  for (const auto& row : cfg.activity_weights) {
    if (static_cast<int>(row.size()) != home.num_activities())
      throw Error(ErrorKind::config,
                  "synth config: activity weight rows need one entry per activity");
    double sum = 0;
    for (double w : row) {
      if (w < 0) throw Error(ErrorKind::config, "synth config: negative weight");
      sum += w;
    }
    if (sum <= 0)
      throw Error(ErrorKind::config, "synth config: activity weight rows must sum > 0");
  }
  if (!cfg.start_zone.empty() &&
      static_cast<int>(cfg.start_zone.size()) != home.num_occupants())
    throw Error(ErrorKind::config, "synth config: start_zone needs one entry per occupant");
  if (!cfg.linked_activity.empty() &&
      static_cast<int>(cfg.linked_activity.size()) != home.num_appliances())
    throw Error(ErrorKind::config,
                "synth config: linked_activity needs one entry per appliance");
  return cfg;
}

SynthConfig load_synth_config(const std::filesystem::path& path, const HomeModel& home) {
  return synth_config_from_json(load_json(path), home);
}

SensorTrace synth_trace(const HomeModel& home, const SynthConfig& config, int days) {
  const int64_t slots = static_cast<int64_t>(days) * home.slots_per_day;
  SensorTrace trace;
  trace.resize(slots, home);

  auto band_at = [&](int64_t t) -> const SynthBand& {
    int sod = static_cast<int>(t % home.slots_per_day);
    const SynthBand* best = &config.bands.front();
    for (const SynthBand& b : config.bands)
      if (b.start_slot <= sod) best = &b;
    return *best;
  };

  // Occupant movement: dwell in a zone, then jump via the band's stencil.
  for (int o = 0; o < home.num_occupants(); ++o) {
    Rng rng(Rng::derive(config.seed, "occupant" + std::to_string(o)));
    int zone = config.start_zone.empty() ? kOutsideZone : config.start_zone[o];
    int64_t t = 0;
    while (t < slots) {
      const auto& range = config.dwell_range[zone];
      int64_t dwell = rng.uniform_int(range.first, range.second);
      int activity = kIdleActivity;
      const auto& weights = config.activity_weights[zone];
      activity = static_cast<int>(rng.pick_weighted(weights));
      for (int64_t s = t; s < std::min(t + dwell, slots); ++s) {
        trace.occupant_zone[s * home.num_occupants() + o] = static_cast<int16_t>(zone);
        trace.activity[s * home.num_occupants() + o] = static_cast<int16_t>(activity);
      }
      t += dwell;
      if (t >= slots) break;
      zone = static_cast<int>(rng.pick_weighted(band_at(t).transition[zone]));
    }
  }

  // Appliances: standby loads stay on; activity-linked appliances follow the
  // occupants.
  for (int64_t t = 0; t < slots; ++t) {
    for (const Appliance& d : home.appliances) {
      bool on = d.always_on;
      if (!on && !config.linked_activity.empty() && config.linked_activity[d.id] >= 0) {
        for (int o = 0; o < home.num_occupants() && !on; ++o)
          on = trace.zone_of(t, o) == d.zone &&
               trace.activity_of(t, o) == config.linked_activity[d.id];
      }
      trace.appliance_on[t * home.num_appliances() + d.id] = on ? 1 : 0;
    }
  }

  // Outdoor conditions: constant CO2, sinusoidal daily temperature.
  for (int64_t t = 0; t < slots; ++t) {
    int sod = static_cast<int>(t % home.slots_per_day);
    trace.outdoor_co2[t] = config.outdoor_co2_ppm;
    trace.outdoor_temp[t] =
        config.outdoor_temp_mean_f +
        config.outdoor_temp_swing_f *
            std::sin(2.0 * M_PI * (sod - 480.0) / home.slots_per_day);
  }

  // Zone physics, forward from initial conditions. The controller acts on
  // slot t and the slot t+1 measurements follow the verification recurrences.
  const int Z = home.num_zones();
  for (int z = 1; z < Z; ++z) {
    const Zone& zone = home.zones[z];
    trace.co2[0 * Z + z] =
        config.initial_co2_ppm > 0 ? config.initial_co2_ppm : zone.co2_setpoint_ppm;
    trace.temp[0 * Z + z] =
        config.initial_temp_f > 0 ? config.initial_temp_f : zone.temp_setpoint_f;
  }
  trace.co2[0 * Z + kOutsideZone] = trace.outdoor_co2[0];
  trace.temp[0 * Z + kOutsideZone] = trace.outdoor_temp[0];

  for (int64_t t = 1; t < slots; ++t) {
    const int16_t* occ_prev = &trace.occupant_zone[(t - 1) * home.num_occupants()];
    const int16_t* act_prev = &trace.activity[(t - 1) * home.num_occupants()];
    const uint8_t* app_prev = &trace.appliance_on[(t - 1) * home.num_appliances()];
    const int16_t* occ_cur = &trace.occupant_zone[t * home.num_occupants()];
    const int16_t* act_cur = &trace.activity[t * home.num_occupants()];
    const uint8_t* app_cur = &trace.appliance_on[t * home.num_appliances()];
    for (int z = 1; z < Z; ++z) {
      const Zone& zone = home.zones[z];
      control::ZoneLoads prev = control::zone_loads(home, occ_prev, act_prev, app_prev, z);
      AirflowSolution q = control::zone_airflow(home, zone, prev,
                                                trace.co2_at(t - 1, z),
                                                trace.outdoor_co2[t - 1]);
      trace.co2[t * Z + z] = control::co2_next(home, zone, trace.co2_at(t - 1, z), q.q,
                                               prev.co2_rate, trace.outdoor_co2[t - 1]);
      control::ZoneLoads cur = control::zone_loads(home, occ_cur, act_cur, app_cur, z);
      if (q.q <= 0 && cur.heat_w > 0)
        throw Error(ErrorKind::config,
                    "zone " + std::to_string(z) + " has zero airflow at slot " +
                        std::to_string(t - 1) +
                        " but heat gain at the next slot; give the zone a "
                        "standby load so the temperature recurrence is satisfiable");
      trace.temp[t * Z + z] =
          control::temp_next(trace.temp_at(t - 1, z), q.q, cur.heat_w);
    }
    trace.co2[t * Z + kOutsideZone] = trace.outdoor_co2[t];
    trace.temp[t * Z + kOutsideZone] = trace.outdoor_temp[t];
  }
  return trace;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double round_money(double v) { return std::round(v * 1e6) / 1e6; }

std::string format_money(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", round_money(v));
  return buf;
}

void write_report(const Report& report, const std::filesystem::path& path,
                  const std::string& format) {
  if (format == "csv") {
    std::string out;
    for (size_t i = 0; i < report.columns.size(); ++i)
      out += (i ? "," : "") + report.columns[i];
    out += "\n";
    for (const auto& row : report.rows) {
      for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
      out += "\n";
    }
    atomic_write(path, out);
  } else if (format == "json") {
    nlohmann::json j;
    j["columns"] = report.columns;
    j["rows"] = report.rows;
    atomic_write(path, j.dump(2) + "\n");
  } else {
    throw Error(ErrorKind::config, "unknown report format: " + format);
  }
}

Report read_report(const std::filesystem::path& path, const std::string& format) {
  Report report;
  if (format == "csv") {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line))
      throw Error(ErrorKind::parse, path.string() + ": empty report");
    report.columns = split_csv_line(line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      report.rows.push_back(split_csv_line(line));
    }
  } else if (format == "json") {
    nlohmann::json j = load_json(path);
    report.columns = j.at("columns").get<std::vector<std::string>>();
    report.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  } else {
    throw Error(ErrorKind::config, "unknown report format: " + format);
  }
  return report;
}

}  // namespace hta::io
