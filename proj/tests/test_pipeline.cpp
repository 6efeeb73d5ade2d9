#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "ws/diagnostics.hpp"
#include "ws/pipeline.hpp"

using namespace ws;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

RunConfig zero_state() {
  RunConfig c = RunConfig::defaults();
  c.grid.n = 16;
  c.schrodinger.terms[0].amp = 0.0;
  c.a_plus = {"zero", 0.0, 1.0};
  c.a_dot = {"zero", 0.0, 1.0};
  c.solver.nodes = 16;
  c.solver.mode = "both";
  c.refinement = {{8, 8}, {16, 8}};
  return c;
}

void strip_timings(json& j) {
  if (j.is_object()) {
    j.erase("seconds");
    for (auto& [k, v] : j.items()) strip_timings(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_timings(v);
  }
}

}  // namespace

TEST_CASE("config survives a JSON round trip") {
  json a = to_json(RunConfig::defaults());
  json b = to_json(config_from_json(a));
  CHECK(a == b);
  json z = to_json(zero_state());
  CHECK(to_json(config_from_json(z)) == z);
  CHECK(to_json(config_from_json(json::object())) == a);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS(config_from_json(json{{"gird", {{"n", 16}}}}));
  CHECK_THROWS(config_from_json(json{{"grid", {{"n", 24}}}}));
  CHECK_THROWS(config_from_json(json{{"solver", {{"mode", "sideways"}}}}));
  CHECK_THROWS(config_from_json(json{{"wave", {{"a_plus", {{"profile", "square"}}}}}}));
  CHECK_THROWS(config_from_json(json{{"stage", "everything"}}));
  CHECK_THROWS(config_from_json(json{{"solver", {{"T", 4.0}, {"T_max", 2.0}}}}));
}

TEST_CASE("invalid lambda0 stops before any compute stage") {
  RunConfig c = RunConfig::defaults();
  c.params.lambda0 = 1.39;
  RunReport r = run_pipeline(c);
  int failed = 0;
  for (const auto& row : r.doc["parameters"]["rows"]) failed += row["pass"].get<bool>() ? 0 : 1;
  CHECK(failed == 1);
  CHECK_FALSE(r.doc.contains("spectral"));
  CHECK_FALSE(r.doc.contains("profiles"));
  CHECK(r.any_fail());
  for (const auto& v : r.verdicts) CHECK(v.status == "not_run");
}

TEST_CASE("zero state runs the whole pipeline without a failure") {
  auto t0 = std::chrono::steady_clock::now();
  RunReport r = run_pipeline(zero_state());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 60.0);
  CHECK_FALSE(r.any_fail());
  std::set<int> ids;
  for (const auto& v : r.verdicts) {
    ids.insert(v.id);
    CHECK(v.status != "fail");
    CHECK(v.status != "not_run");
  }
  CHECK(ids == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8});

  const fs::path dir = fs::temp_directory_path() / "ws_zero_report";
  fs::remove_all(dir);
  emit_report(r, dir.string());
  json doc = json::parse(std::ifstream(dir / "report.json"));
  CHECK(doc["schema_version"] == kReportSchemaVersion);
  CHECK(doc["verdicts"].size() == 8);
  CHECK(fs::exists(dir / "summary.txt"));
  for (const auto& [name, tv] : r.series) {
    std::vector<double> t, v;
    read_series_csv((dir / "series" / (name + ".csv")).string(), t, v);
    CHECK(t == tv.first);
    CHECK(v == tv.second);
  }
  fs::remove_all(dir);
}

TEST_CASE("identical configs give identical reports") {
  RunConfig c = RunConfig::defaults();
  c.grid.n = 16;
  c.spectral_grid = {32, 8.0 * fixture::kPi};
  c.wave_grid = {64, 112.0};
  c.wave_window = {5.0, 40.0, 10};
  c.stage = Stage::validate;
  RunReport a = run_pipeline(c), b = run_pipeline(c);
  strip_timings(a.doc);
  strip_timings(b.doc);
  CHECK(a.doc == b.doc);
  CHECK(a.series == b.series);
}

TEST_CASE("empty report still emits valid files") {
  RunReport r;
  const fs::path dir = fs::temp_directory_path() / "ws_empty_report";
  fs::remove_all(dir);
  emit_report(r, dir.string());
  json doc = json::parse(std::ifstream(dir / "report.json"));
  CHECK(doc["verdicts"].empty());
  CHECK(doc["series"].empty());
  fs::remove_all(dir);
}
