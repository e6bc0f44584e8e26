#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"

#include "hta/adm/model.hpp"
#include "hta/control/controller.hpp"
#include "hta/error.hpp"
#include "hta/io/io.hpp"

using namespace hta;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() { return fs::path(HTA_SOURCE_DIR) / "data"; }

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "hta_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("bundled home config loads and validates") {
  HomeModel home = io::load_home(data_dir() / "home_4zone.json");
  CHECK(home.num_zones() == 5);  // outside + 4 conditioned
  CHECK(home.num_occupants() == 2);
  CHECK(home.num_appliances() == 13);
  CHECK(validate_home(home).empty());
  CHECK(home.tariff.is_peak(1020));
  CHECK(!home.tariff.is_peak(1260));

  SUBCASE("round-trips through JSON") {
    nlohmann::json j = io::home_to_json(home);
    HomeModel back = io::home_from_json(j);
    CHECK(io::home_to_json(back) == j);
  }
}

TEST_CASE("home config error paths") {
  SUBCASE("empty file is a parse error") {
    fs::path p = temp_file("empty.json");
    std::ofstream(p).close();
    CHECK_THROWS_AS(io::load_home(p), Error);
    try {
      io::load_home(p);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::parse);
    }
  }

  SUBCASE("negative volume is a validation error") {
    nlohmann::json j = io::home_to_json(test::make_test_home());
    j["zones"][1]["volume_ft3"] = -5;
    fs::path p = temp_file("bad_volume.json");
    io::atomic_write(p, j.dump());
    try {
      io::load_home(p);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config);
      CHECK(std::string(e.what()).find("volume") != std::string::npos);
    }
  }

  SUBCASE("missing file is an io error") {
    try {
      io::load_home(temp_file("does_not_exist.json"));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::io);
    }
  }
}

TEST_CASE("trace round-trips identically through CSV") {
  HomeModel home = test::make_test_home();
  io::SynthConfig cfg = test::make_test_synth(home, 5);
  SensorTrace trace = io::synth_trace(home, cfg, 1);

  fs::path p = temp_file("trace_roundtrip.csv");
  io::write_trace(trace, home, p);
  SensorTrace back = io::load_trace(p, home);

  CHECK(back.num_slots == trace.num_slots);
  CHECK(back.occupant_zone == trace.occupant_zone);
  CHECK(back.activity == trace.activity);
  CHECK(back.appliance_on == trace.appliance_on);
  CHECK(back.co2 == trace.co2);
  CHECK(back.temp == trace.temp);
  CHECK(back.outdoor_temp == trace.outdoor_temp);
  CHECK(back.outdoor_co2 == trace.outdoor_co2);

  // the reloaded trace still verifies
  CHECK(control::verify_physics(back, home).violations.empty());
}

TEST_CASE("trace loader reports gaps and bad rows") {
  HomeModel home = test::make_tiny_home();
  io::SynthConfig cfg = test::make_tiny_synth(home, 2);
  SensorTrace trace = io::synth_trace(home, cfg, 1);
  fs::path p = temp_file("trace_gap.csv");
  io::write_trace(trace, home, p);

  SUBCASE("single-occupant day loads with the occupant placed") {
    SensorTrace back = io::load_trace(p, home);
    CHECK(back.num_slots == 1440);
    CHECK(back.zone_of(0, 0) == 1);
  }

  SUBCASE("slot gap is named") {
    std::ifstream in(p);
    std::string line, out;
    int64_t row = -1;
    while (std::getline(in, line)) {
      ++row;
      if (row == 12) continue;  // drop slot 11 (header is row 0)
      out += line + "\n";
    }
    fs::path gap = temp_file("trace_gap2.csv");
    io::atomic_write(gap, out);
    try {
      io::load_trace(gap, home);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("11") != std::string::npos);
    }
  }

  SUBCASE("header mismatch is rejected") {
    io::atomic_write(temp_file("bad_header.csv"), "a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(io::load_trace(temp_file("bad_header.csv"), home), Error);
  }
}

TEST_CASE("two-occupant counts match an independent recount") {
  HomeModel home = test::make_test_home();
  io::SynthConfig cfg = test::make_test_synth(home, 9);
  SensorTrace trace = io::synth_trace(home, cfg, 1);
  fs::path p = temp_file("trace_counts.csv");
  io::write_trace(trace, home, p);
  SensorTrace back = io::load_trace(p, home);

  // recount rows per (slot, zone) straight from the file
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);  // header
  std::map<std::pair<int64_t, int>, int> file_counts;
  while (std::getline(in, line)) {
    auto c1 = line.find(','), c2 = line.find(',', line.find(',') + 1);
    auto c3 = line.find(',', c2 + 1);
    int64_t slot = std::stoll(line.substr(0, c1));
    int zone = std::stoi(line.substr(c2 + 1, c3 - c2 - 1));
    file_counts[{slot, zone}] += 1;
  }
  auto counts = occupant_count_from_tracking(back);
  for (int64_t t = 0; t < back.num_slots; ++t)
    for (int z = 0; z < back.num_zones; ++z) {
      auto it = file_counts.find({t, z});
      int expected = it == file_counts.end() ? 0 : it->second;
      CHECK(counts[t * back.num_zones + z] == expected);
    }
}

TEST_CASE("synthetic generation is seed-deterministic") {
  HomeModel home = test::make_test_home();
  io::SynthConfig cfg = test::make_test_synth(home, 7);

  SensorTrace a = io::synth_trace(home, cfg, 2);
  SensorTrace b = io::synth_trace(home, cfg, 2);
  CHECK(a.occupant_zone == b.occupant_zone);
  CHECK(a.activity == b.activity);
  CHECK(a.co2 == b.co2);
  CHECK(a.temp == b.temp);
  CHECK(a.appliance_on == b.appliance_on);

  SUBCASE("30 days make 43200 slots") {
    HomeModel tiny = test::make_tiny_home();
    io::SynthConfig tc = test::make_tiny_synth(tiny, 7);
    SensorTrace t = io::synth_trace(tiny, tc, 30);
    CHECK(t.num_slots == 43200);
  }

  SUBCASE("disjoint seeds give different stay-event multisets") {
    int differing = 0;
    for (uint64_t s = 0; s < 10; ++s) {
      io::SynthConfig c1 = test::make_test_synth(home, 1000 + s);
      io::SynthConfig c2 = test::make_test_synth(home, 2000 + s);
      auto e1 = adm::extract_stay_events(io::synth_trace(home, c1, 1));
      auto e2 = adm::extract_stay_events(io::synth_trace(home, c2, 1));
      std::multiset<std::tuple<int, int, int64_t, int64_t>> m1, m2;
      for (auto& e : e1) m1.insert({e.occupant, e.zone, e.arrival, e.duration});
      for (auto& e : e2) m2.insert({e.occupant, e.zone, e.arrival, e.duration});
      if (m1 != m2) ++differing;
    }
    CHECK(differing == 10);
  }
}

TEST_CASE("reports round-trip") {
  io::Report report;
  report.columns = {"strategy", "total_cost", "note"};
  report.rows.push_back({"benign", io::format_money(12.3456789), "x"});
  report.rows.push_back({"greedy", io::format_money(14.0000001), "y"});
  report.rows.push_back({"windowed", io::format_money(15.5), "z"});

  SUBCASE("csv") {
    fs::path p = temp_file("report.csv");
    io::write_report(report, p, "csv");
    io::Report back = io::read_report(p, "csv");
    CHECK(back.columns == report.columns);
    REQUIRE(back.rows.size() == report.rows.size());
    for (size_t i = 0; i < report.rows.size(); ++i) {
      CHECK(back.rows[i][0] == report.rows[i][0]);
      CHECK(std::abs(std::stod(back.rows[i][1]) - std::stod(report.rows[i][1])) <= 1e-9);
    }
  }

  SUBCASE("json is exact") {
    fs::path p = temp_file("report.json");
    io::write_report(report, p, "json");
    io::Report back = io::read_report(p, "json");
    CHECK(back.columns == report.columns);
    CHECK(back.rows == report.rows);
  }

  SUBCASE("empty report writes a header-only file") {
    io::Report empty;
    empty.columns = {"a", "b"};
    fs::path p = temp_file("empty_report.csv");
    io::write_report(empty, p, "csv");
    io::Report back = io::read_report(p, "csv");
    CHECK(back.columns == empty.columns);
    CHECK(back.rows.empty());
  }

  SUBCASE("money cells carry 6 decimal places") {
    CHECK(io::format_money(12.3456789) == "12.345679");
    CHECK(io::format_money(2.4) == "2.400000");
  }
}

TEST_CASE("bundled synth config generates verifying traces") {
  HomeModel home = io::load_home(data_dir() / "home_4zone.json");
  io::SynthConfig cfg = io::load_synth_config(data_dir() / "synth_routine.json", home);
  cfg.seed = 42;
  SensorTrace trace = io::synth_trace(home, cfg, 3);
  CHECK(trace.num_slots == 3 * 1440);
  CHECK(validate_trace(trace, home).empty());
  auto report = control::verify_physics(trace, home);
  CHECK(report.violations.empty());
  CHECK(report.max_residual <= 1e-6);
}

TEST_CASE("synth config validation") {
  HomeModel home = test::make_tiny_home();
  io::SynthConfig cfg = test::make_tiny_synth(home);

  SUBCASE("negative weight") {
    nlohmann::json j;
    j["bands"] = {{{"start_slot", 0},
                   {"transition", {{-1.0, 0.5, 0.5}, {0, 1, 0}, {0, 0, 1}}}}};
    j["dwell_range"] = {{10, 20}, {10, 20}, {10, 20}};
    j["activity_weights"] = nlohmann::json::array();
    for (int z = 0; z < 3; ++z) {
      std::vector<double> row(home.num_activities(), 0.0);
      row[0] = 1;
      j["activity_weights"].push_back(row);
    }
    CHECK_THROWS_AS(io::synth_config_from_json(j, home), Error);
  }

  SUBCASE("dwell range must be positive") {
    io::SynthConfig bad = cfg;
    nlohmann::json j;
    j["bands"] = {{{"start_slot", 0},
                   {"transition", {{1.0, 0.0, 0.0}, {0, 1, 0}, {0, 0, 1}}}}};
    j["dwell_range"] = {{0, 0}, {10, 20}, {10, 20}};
    j["activity_weights"] = nlohmann::json::array();
    for (int z = 0; z < 3; ++z) {
      std::vector<double> row(home.num_activities(), 0.0);
      row[0] = 1;
      j["activity_weights"].push_back(row);
    }
    CHECK_THROWS_AS(io::synth_config_from_json(j, home), Error);
  }
}
