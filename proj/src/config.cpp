#include <fstream>
#include <set>
#include <stdexcept>

#include "ws/pipeline.hpp"

namespace ws {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json grid_json(const GridSpec& g) { return {{"n", g.n}, {"L", g.L}}; }
GridSpec grid_from(const json& j, GridSpec g, const std::string& where) {
  check_keys(j, {"n", "L"}, where);
  get(j, "n", g.n);
  get(j, "L", g.L);
  if (g.n < 8 || g.n > 256 || (g.n & (g.n - 1)) || !(g.L > 0.0))
    throw std::invalid_argument(where + ": need n a power of two in [8, 256] and L > 0");
  return g;
}

json window_json(const SeriesWindow& w) { return {{"lo", w.lo}, {"hi", w.hi}, {"points", w.points}}; }
SeriesWindow window_from(const json& j, SeriesWindow w, const std::string& where) {
  check_keys(j, {"lo", "hi", "points"}, where);
  get(j, "lo", w.lo);
  get(j, "hi", w.hi);
  get(j, "points", w.points);
  if (!(w.lo > 0.0) || !(w.hi > w.lo) || w.points < 2) throw std::invalid_argument(where + ": bad window");
  return w;
}

json wave_json(const WaveComponent& c) { return {{"profile", c.profile}, {"amp", c.amp}, {"scale", c.scale}}; }
WaveComponent wave_from(const json& j, WaveComponent c, const std::string& where) {
  check_keys(j, {"profile", "amp", "scale"}, where);
  get(j, "profile", c.profile);
  get(j, "amp", c.amp);
  get(j, "scale", c.scale);
  static const std::set<std::string> known{"zero", "gaussian", "dipole_gaussian", "laplacian_gaussian"};
  if (!known.count(c.profile)) throw std::invalid_argument(where + ": unknown profile '" + c.profile + "'");
  return c;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }
cplx cplx_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be a number or [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Stage parse_stage(const std::string& s) {
  if (s == "validate") return Stage::validate;
  if (s == "profiles") return Stage::profiles;
  if (s == "solve") return Stage::solve;
  if (s == "reconstruct") return Stage::reconstruct;
  if (s == "full") return Stage::full;
  throw std::invalid_argument("unknown stage '" + s + "'");
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::validate: return "validate";
    case Stage::profiles: return "profiles";
    case Stage::solve: return "solve";
    case Stage::reconstruct: return "reconstruct";
    case Stage::full: return "full";
  }
  return "full";
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.schrodinger.terms[0].amp = 0.5;
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = grid_json(c.grid);
  j["spectral_grid"] = grid_json(c.spectral_grid);
  j["wave_grid"] = grid_json(c.wave_grid);
  j["wave_grid"]["data_scale"] = c.wave_grid_data_scale;

  const auto& p = c.params;
  j["parameters"] = {{"k", p.k},         {"ell", p.ell},     {"mu", p.mu},       {"lambda0", p.lambda0},
                     {"lambda", p.lambda}, {"beta0", p.beta0}, {"beta", p.beta}, {"kplus", p.kplus},
                     {"eta", p.eta},     {"delta", p.delta}};

  json terms = json::array();
  for (const auto& t : c.schrodinger.terms)
    terms.push_back({{"amp", cplx_json(t.amp)},
                     {"center", json::array({t.center[0], t.center[1], t.center[2]})},
                     {"sigma", t.sigma}});
  j["schrodinger"] = {{"family", c.schrodinger.family},
                      {"terms", terms},
                      {"poly_c1", c.schrodinger.poly_c1},
                      {"poly_c2", c.schrodinger.poly_c2}};
  j["wave"] = {{"a_plus", wave_json(c.a_plus)}, {"a_dot", wave_json(c.a_dot)}};

  const auto& pc = c.profiles;
  j["profiles"] = {{"horizon", pc.horizon},
                   {"steps_per_octave", pc.steps_per_octave},
                   {"store_phases_until", pc.store_phases_until},
                   {"nu_nodes", pc.b1.quad.nodes},
                   {"nu_max", pc.b1.quad.nu_max},
                   {"dilation", pc.b1.method == DilationMethod::spline ? "spline" : "spectral"},
                   {"tail_tolerance", pc.b1.tail_tolerance}};

  const auto& s = c.solver;
  j["solver"] = {{"T", s.T},
                 {"T_max", s.T_max},
                 {"nodes", s.nodes},
                 {"mode", s.mode},
                 {"picard_max_iter", s.picard_max_iter},
                 {"picard_tol", s.picard_tol}};

  j["probes"] = c.probes;
  j["windows"] = {{"remainder", window_json(c.remainder_window)},
                  {"profile", window_json(c.profile_window)},
                  {"wave", window_json(c.wave_window)}};
  json ref = json::array();
  for (auto [n, nodes] : c.refinement) ref.push_back({{"n", n}, {"nodes", nodes}});
  j["refinement"] = ref;
  j["residual_time"] = c.residual_time;
  j["tmax_study"] = {{"enabled", c.tmax_study}, {"grid_n", c.tmax_study_grid}};
  j["slope_tolerance"] = c.slope_tolerance;
  j["stage"] = stage_name(c.stage);
  j["out_dir"] = c.out_dir;
  j["seed"] = c.seed;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c = RunConfig::defaults();
  check_keys(j, {"grid", "spectral_grid", "wave_grid", "parameters", "schrodinger", "wave", "profiles", "solver",
                 "probes", "windows", "refinement", "residual_time", "tmax_study", "slope_tolerance", "stage",
                 "out_dir", "seed"},
             "config");
  if (j.contains("grid")) c.grid = grid_from(j["grid"], c.grid, "grid");
  if (j.contains("spectral_grid")) c.spectral_grid = grid_from(j["spectral_grid"], c.spectral_grid, "spectral_grid");
  if (j.contains("wave_grid")) {
    json w = j["wave_grid"];
    if (w.is_object() && w.contains("data_scale")) {
      c.wave_grid_data_scale = w["data_scale"].get<double>();
      w.erase("data_scale");
    }
    c.wave_grid = grid_from(w, c.wave_grid, "wave_grid");
  }
  if (j.contains("parameters")) {
    const auto& q = j["parameters"];
    check_keys(q, {"k", "ell", "mu", "lambda0", "lambda", "beta0", "beta", "kplus", "eta", "delta"}, "parameters");
    auto& p = c.params;
    get(q, "k", p.k);
    get(q, "ell", p.ell);
    get(q, "mu", p.mu);
    get(q, "lambda0", p.lambda0);
    get(q, "lambda", p.lambda);
    get(q, "beta0", p.beta0);
    get(q, "beta", p.beta);
    get(q, "kplus", p.kplus);
    get(q, "eta", p.eta);
    get(q, "delta", p.delta);
  }
  if (j.contains("schrodinger")) {
    const auto& q = j["schrodinger"];
    check_keys(q, {"family", "terms", "poly_c1", "poly_c2"}, "schrodinger");
    get(q, "family", c.schrodinger.family);
    get(q, "poly_c1", c.schrodinger.poly_c1);
    get(q, "poly_c2", c.schrodinger.poly_c2);
    if (q.contains("terms")) {
      c.schrodinger.terms.clear();
      for (const auto& t : q["terms"]) {
        check_keys(t, {"amp", "center", "sigma"}, "schrodinger.terms");
        GaussianTerm g;
        if (t.contains("amp")) g.amp = cplx_from(t["amp"]);
        if (t.contains("center")) {
          auto v = t["center"].get<std::vector<double>>();
          if (v.size() != 3) throw std::invalid_argument("schrodinger.terms: center needs 3 entries");
          g.center = {v[0], v[1], v[2]};
        }
        get(t, "sigma", g.sigma);
        c.schrodinger.terms.push_back(g);
      }
    }
  }
  if (j.contains("wave")) {
    const auto& q = j["wave"];
    check_keys(q, {"a_plus", "a_dot"}, "wave");
    if (q.contains("a_plus")) c.a_plus = wave_from(q["a_plus"], c.a_plus, "wave.a_plus");
    if (q.contains("a_dot")) c.a_dot = wave_from(q["a_dot"], c.a_dot, "wave.a_dot");
  }
  if (j.contains("profiles")) {
    const auto& q = j["profiles"];
    check_keys(q, {"horizon", "steps_per_octave", "store_phases_until", "nu_nodes", "nu_max", "dilation",
                   "tail_tolerance"},
               "profiles");
    auto& pc = c.profiles;
    get(q, "horizon", pc.horizon);
    get(q, "steps_per_octave", pc.steps_per_octave);
    get(q, "store_phases_until", pc.store_phases_until);
    int nodes = pc.b1.quad.nodes;
    double nu_max = pc.b1.quad.nu_max;
    get(q, "nu_nodes", nodes);
    get(q, "nu_max", nu_max);
    pc.b1.quad = NuQuadrature::make(nodes, nu_max);
    if (q.contains("dilation")) {
      auto m = q["dilation"].get<std::string>();
      if (m == "spline") pc.b1.method = DilationMethod::spline;
      else if (m == "spectral") pc.b1.method = DilationMethod::spectral;
      else throw std::invalid_argument("profiles.dilation must be spline or spectral");
    }
    get(q, "tail_tolerance", pc.b1.tail_tolerance);
  }
  if (j.contains("solver")) {
    const auto& q = j["solver"];
    check_keys(q, {"T", "T_max", "nodes", "mode", "picard_max_iter", "picard_tol"}, "solver");
    auto& s = c.solver;
    get(q, "T", s.T);
    get(q, "T_max", s.T_max);
    get(q, "nodes", s.nodes);
    get(q, "mode", s.mode);
    get(q, "picard_max_iter", s.picard_max_iter);
    get(q, "picard_tol", s.picard_tol);
    if (s.mode != "direct" && s.mode != "picard" && s.mode != "both")
      throw std::invalid_argument("solver.mode must be direct, picard or both");
    if (!(s.T >= 1.0) || !(s.T_max > s.T) || s.nodes < 2)
      throw std::invalid_argument("solver: need 1 <= T < T_max and nodes >= 2");
  }
  if (j.contains("probes")) c.probes = j["probes"].get<std::vector<double>>();
  if (j.contains("windows")) {
    const auto& q = j["windows"];
    check_keys(q, {"remainder", "profile", "wave"}, "windows");
    if (q.contains("remainder")) c.remainder_window = window_from(q["remainder"], c.remainder_window, "windows.remainder");
    if (q.contains("profile")) c.profile_window = window_from(q["profile"], c.profile_window, "windows.profile");
    if (q.contains("wave")) c.wave_window = window_from(q["wave"], c.wave_window, "windows.wave");
  }
  if (j.contains("refinement")) {
    c.refinement.clear();
    for (const auto& r : j["refinement"]) {
      check_keys(r, {"n", "nodes"}, "refinement");
      c.refinement.emplace_back(grid_from({{"n", r.at("n")}}, c.grid, "refinement").n, r.at("nodes").get<int>());
    }
  }
  get(j, "residual_time", c.residual_time);
  if (j.contains("tmax_study")) {
    const auto& q = j["tmax_study"];
    check_keys(q, {"enabled", "grid_n"}, "tmax_study");
    get(q, "enabled", c.tmax_study);
    get(q, "grid_n", c.tmax_study_grid);
  }
  get(j, "slope_tolerance", c.slope_tolerance);
  if (j.contains("stage")) c.stage = parse_stage(j["stage"].get<std::string>());
  get(j, "out_dir", c.out_dir);
  get(j, "seed", c.seed);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config " + path);
  return config_from_json(json::parse(is));
}

}  // namespace ws
