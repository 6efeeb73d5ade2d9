#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "ws/asymptotic_state.hpp"
#include "ws/profile_builder.hpp"
#include "ws/solver.hpp"

namespace ws {

inline constexpr int kReportSchemaVersion = 1;

struct GridSpec {
  int n = 32;
  double L = 8.0 * 3.14159265358979323846;
};

struct SeriesWindow {
  double lo = 10.0;
  double hi = 200.0;
  int points = 12;
};

enum class Stage { validate = 1, profiles = 2, solve = 3, reconstruct = 4, full = 5 };
Stage parse_stage(const std::string& s);
std::string stage_name(Stage s);

struct RunConfig {
  GridSpec grid;
  GridSpec spectral_grid{64, 8.0 * 3.14159265358979323846};   // operator checks against the group
  GridSpec wave_grid{256, 448.0};                              // dispersion of the free wave
  double wave_grid_data_scale = 0.5;

  ScatteringParameters params;
  SchrodingerSpec schrodinger;
  WaveComponent a_plus{"dipole_gaussian", 0.5, 1.0};
  WaveComponent a_dot{"laplacian_gaussian", 0.5, 1.0};
  ProfileConfig profiles;
  SolverConfig solver;

  std::vector<double> probes{2.0, 4.0, 8.0, 16.0, 32.0};
  SeriesWindow remainder_window{8.0, 128.0, 12};
  SeriesWindow profile_window{10.0, 200.0, 12};
  SeriesWindow wave_window{10.0, 200.0, 16};
  /// coarser (n, nodes) levels for the residual refinement study; the main run is the finest.
  /// Each level doubles both n and the node count.
  std::vector<std::pair<int, int>> refinement{{8, 16}, {16, 32}};
  double residual_time = 0.0;  // 0 means 4 T
  bool tmax_study = true;
  int tmax_study_grid = 16;    // 0 means the main grid
  double slope_tolerance = 0.15;

  Stage stage = Stage::full;
  std::string out_dir = "run_out";
  unsigned long long seed = 20240601ULL;

  static RunConfig defaults();
};

nlohmann::json to_json(const RunConfig& c);
/// strict: unknown keys and ill-typed values raise
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

struct Verdict {
  int id = 0;
  std::string name;
  std::string status = "not_run";  // pass | fail | not_applicable | not_run
  std::string detail;
};

struct RunReport {
  nlohmann::json doc;
  std::vector<Verdict> verdicts;  // criteria 1..8
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  bool any_fail() const;
};

/// runs every stage up to cfg.stage; progress goes to stderr
RunReport run_pipeline(const RunConfig& cfg);

/// report.json, series/*.csv and summary.txt under dir
void emit_report(const RunReport& r, const std::string& dir);
std::string summary_text(const RunReport& r);

}  // namespace ws
