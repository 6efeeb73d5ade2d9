#include "ws/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ws/diagnostics.hpp"
#include "ws/reconstruction.hpp"
#include "ws/wave_sector.hpp"

namespace ws {

using nlohmann::json;

namespace {

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void note(const char* fmt, double secs, const std::string& what) {
  std::fprintf(stderr, fmt, secs, what.c_str());
  std::fflush(stderr);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json fit_json(const FitResult& f) {
  return {{"slope", finite_or_null(f.slope)},
          {"intercept", finite_or_null(f.intercept)},
          {"stderr", finite_or_null(f.stderr_slope)},
          {"points", f.points},
          {"excluded", f.excluded},
          {"span_decades", f.span_decades}};
}

json bound_json(const BoundFit& b) {
  json j = fit_json(b.fit);
  j["target"] = b.target;
  j["tolerance"] = b.tolerance;
  j["vacuous"] = b.vacuous;
  j["pass"] = b.pass;
  if (!b.error.empty()) j["error"] = b.error;
  return j;
}

bool all_zero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

struct Ctx {
  const RunConfig& cfg;
  RunReport& rep;
  double t_start = now();
  double r1_slope = std::nan("");  // criterion 4 R1 slope, the control compares against it

  void series(const std::string& name, const std::vector<double>& t, const std::vector<double>& v) {
    rep.series[name] = {t, v};
  }
  void verdict(int id, const std::string& status, const std::string& detail) {
    auto& v = rep.verdicts[id - 1];
    v.status = status;
    v.detail = detail;
  }
  void stage_done(const std::string& s) { note("[%8.1fs] %s done\n", now() - t_start, s); }
};

// ---------------------------------------------------------------- criterion 1

void spectral_checks(Ctx& c) {
  json j;
  auto g = SpectralGrid::make(c.cfg.grid.n, c.cfg.grid.L);
  std::mt19937_64 rng(c.cfg.seed);
  std::normal_distribution<double> nd;
  ScalarField f(g);
  for (auto& z : f.v) z = {nd(rng), nd(rng)};

  const double fn = l2_norm(f);
  ScalarField back = from_spectrum(g, to_spectrum(f));
  const double roundtrip = l2_norm(back - f) / fn;

  double unit = 0.0;
  for (double tau : {-10.0, -1.0, -0.1, 0.1, 1.0, 10.0})
    unit = std::max(unit, std::abs(l2_norm(schrodinger_group(f, tau)) / fn - 1.0));

  auto gs = SpectralGrid::make(c.cfg.spectral_grid.n, c.cfg.spectral_grid.L);
  ScalarField gauss = ScalarField::from_function(gs, [](double x, double y, double z) {
    return cplx(std::exp(-0.5 * (x * x + y * y + z * z)), 0.0);
  });
  double mdfm = 0.0;
  json mrows = json::array();
  for (double t : {1.0, 2.0}) {
    const double e = l2_norm(mdfm_apply(gauss, t) - schrodinger_group(gauss, t)) / l2_norm(gauss);
    mdfm = std::max(mdfm, e);
    mrows.push_back({{"t", t}, {"rel_diff", e}});
  }
  j["dft_roundtrip"] = roundtrip;
  j["group_unitarity"] = unit;
  j["mdfm_vs_group"] = mrows;
  j["spectral_grid"] = {{"n", gs->n()}, {"L", gs->L()}};
  c.rep.doc["spectral"] = j;

  const bool ok = roundtrip <= 1e-12 && unit <= 1e-12 && mdfm <= 1e-5;
  c.verdict(1, ok ? "pass" : "fail",
            fmt("roundtrip %.2e, unitarity %.2e, mdfm vs group %.2e", roundtrip, unit, mdfm));
}

// ---------------------------------------------------------------- criterion 2

void wave_checks(Ctx& c, const WaveState& w, const GridPtr& g) {
  json j;
  if (w.is_zero()) {
    j["vacuous"] = true;
    c.rep.doc["free_wave"] = j;
    c.verdict(2, "pass", "vacuous: zero wave state");
    return;
  }
  std::vector<double> et, ev;
  for (double t : {1.0, 10.0, 100.0}) {
    auto [a0, a0d] = free_wave_a0(w, t, g);
    et.push_back(t);
    ev.push_back(wave_energy(a0, a0d));
  }
  double drift = 0.0;
  for (double e : ev) drift = std::max(drift, std::abs(e - ev[0]) / ev[0]);
  j["energy"] = {{"t", et}, {"value", ev}, {"max_rel_drift", drift}};

  // dispersion needs a box much larger than the light cone at t = 200
  auto gw = SpectralGrid::make(c.cfg.wave_grid.n, c.cfg.wave_grid.L);
  WaveState wd;
  wd.a_plus = c.cfg.a_plus;
  wd.a_dot = c.cfg.a_dot;
  wd.a_plus.scale *= c.cfg.wave_grid_data_scale;
  wd.a_dot.scale *= c.cfg.wave_grid_data_scale;
  wd.mu = c.cfg.params.mu;
  const auto& ww = c.cfg.wave_window;
  auto ts = log_space(ww.lo, ww.hi, ww.points);
  std::vector<double> inf;
  for (double t : ts) inf.push_back(linf_norm(free_wave_a0(wd, t, gw).first));
  c.series("free_wave_linf", ts, inf);
  BoundFit b = slope_bound(ts, inf, -1.0, 0.1);
  const bool two_sided = b.pass && !b.vacuous && b.fit.slope >= -1.1;
  j["linf_slope"] = bound_json(b);
  j["linf_slope"]["lower_bound"] = -1.1;
  j["wave_grid"] = {{"n", gw->n()}, {"L", gw->L()}, {"data_scale", c.cfg.wave_grid_data_scale}};
  c.rep.doc["free_wave"] = j;

  const bool ok = drift <= 1e-10 && two_sided;
  c.verdict(2, ok ? "pass" : "fail", fmt("energy drift %.2e, linf slope %.3f (target -1 +- 0.1)", drift, b.fit.slope));
}

// ---------------------------------------------------------------- criterion 3

void profile_checks(Ctx& c, const ProfileBuilder& pb) {
  json j;
  const auto& p = c.cfg.params;
  const auto& pw = c.cfg.profile_window;
  auto ts = log_space(pw.lo, pw.hi, pw.points);
  std::vector<double> w1n, s0n, s0_over_log;
  for (double t : ts) {
    w1n.push_back(sobolev_norm(pb.w1_at(t), p.kplus - 1.0));
    s0n.push_back(l2_norm(pb.s0_phi0_at(t).first));
    s0_over_log.push_back(s0n.back() / std::log(t));
  }
  c.series("profile_w1_hk", ts, w1n);
  c.series("profile_s0_l2", ts, s0n);

  // |w1|: -1 up to logarithms, so accept when [plain, log-compensated] meets [-1.1, -0.9]
  bool w1_ok = false;
  json jw;
  if (all_zero(w1n)) {
    w1_ok = true;
    jw["vacuous"] = true;
  } else {
    try {
      FitResult plain = fit_power_law(ts, w1n);
      std::vector<double> comp;
      for (std::size_t i = 0; i < ts.size(); ++i) comp.push_back(w1n[i] / (1.0 + std::log(ts[i])));
      FitResult cf = fit_power_law(ts, comp);
      const double lo = std::min(plain.slope, cf.slope), hi = std::max(plain.slope, cf.slope);
      w1_ok = hi >= -1.1 && lo <= -0.9;
      jw["plain"] = fit_json(plain);
      jw["log_compensated"] = fit_json(cf);
    } catch (const std::exception& e) {
      jw["error"] = e.what();
    }
  }
  jw["pass"] = w1_ok;
  j["w1_hk"] = jw;

  // ||s0|| grows like log t: power slope of ||s0|| / log t and a positive log coefficient
  json js;
  bool s0_ok = false;
  if (all_zero(s0n)) {
    s0_ok = true;
    js["vacuous"] = true;
  } else {
    FitResult ll = fit_log_linear(ts, s0n);
    BoundFit lit = slope_bound(ts, s0n, 0.0, 0.05);
    BoundFit adj = slope_bound(ts, s0_over_log, 0.0, 0.05);
    s0_ok = adj.pass && ll.slope > 0.0;
    js["log_linear"] = fit_json(ll);
    js["literal_power_slope"] = bound_json(lit);
    js["power_slope_over_log"] = bound_json(adj);
  }
  js["pass"] = s0_ok;
  j["s0_l2"] = js;

  // ||h||_inf on [1, hi]: finite, and no growth in the upper half
  auto th = log_space(1.0, pw.hi, 24);
  std::vector<double> hn;
  bool finite = true;
  double early = 0.0, late = 0.0;
  for (double t : th) {
    hn.push_back(linf_norm(from_spectrum(pb.grid(), pb.h_spec(t))));
    finite = finite && std::isfinite(hn.back());
    double& slot = t <= std::sqrt(pw.hi) ? early : late;
    slot = std::max(slot, hn.back());
  }
  c.series("profile_h_linf", th, hn);
  const bool h_ok = finite && late <= early * (1.0 + 1e-9);
  j["h_linf"] = {{"finite", finite}, {"max_early", early}, {"max_late", late}, {"pass", h_ok}};
  c.rep.doc["profiles"]["criteria"] = j;

  const bool ok = w1_ok && s0_ok && h_ok;
  c.verdict(3, ok ? "pass" : "fail",
            std::string("w1 ") + (w1_ok ? "ok" : "off") + ", s0 " + (s0_ok ? "ok" : "off") + ", h " +
                (h_ok ? "ok" : "off"));
}

// ---------------------------------------------------------------- criteria 4 and 8

struct RemainderSeries {
  std::vector<double> t, r1, r1k, gr2, gr2l;
};

RemainderSeries remainder_series(const ProfileBuilder& pb, const std::vector<double>& ts, const RemainderOptions& o,
                                 json* rows) {
  const auto& p = pb.params();
  RemainderSeries s;
  for (double t : ts) {
    RemainderPair r = pb.remainders(t, o);
    s.t.push_back(t);
    s.r1.push_back(l2_norm(r.r1));
    s.r1k.push_back(sobolev_norm(r.r1, p.k, SobolevVariant::homogeneous));
    double a = 0.0, b = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double x = sobolev_norm(r.r2.c[k], 1.0, SobolevVariant::homogeneous);
      const double y = sobolev_norm(r.r2.c[k], p.ell + 1.0, SobolevVariant::homogeneous);
      a += x * x;
      b += y * y;
    }
    s.gr2.push_back(std::sqrt(a));
    s.gr2l.push_back(std::sqrt(b));
    if (rows)
      rows->push_back({{"t", t},
                       {"r1_l2", s.r1.back()},
                       {"r1_hdot_k", s.r1k.back()},
                       {"grad_r2", s.gr2.back()},
                       {"grad_r2_ell", s.gr2l.back()},
                       {"split_mismatch_1", r.split_mismatch_1},
                       {"split_mismatch_2", r.split_mismatch_2},
                       {"b1_tail", r.b1_tail}});
  }
  return s;
}

void remainder_checks(Ctx& c, const ProfileBuilder& pb) {
  json j;
  const auto& p = c.cfg.params;
  const double tol = c.cfg.slope_tolerance;
  const auto& rw = c.cfg.remainder_window;
  auto ts = log_space(rw.lo, rw.hi, rw.points);
  json rows = json::array();
  RemainderSeries s = remainder_series(pb, ts, {}, &rows);
  c.series("remainder_r1_l2", s.t, s.r1);
  c.series("remainder_r1_hdot_k", s.t, s.r1k);
  c.series("remainder_grad_r2", s.t, s.gr2);
  c.series("remainder_grad_r2_ell", s.t, s.gr2l);
  j["rows"] = rows;

  json fits;
  bool ok = true;
  auto add = [&](const std::string& id, const std::vector<double>& v, double target) {
    BoundFit b = slope_bound(s.t, v, target, tol);
    fits[id] = bound_json(b);
    ok = ok && b.pass;
    return b;
  };
  BoundFit b1 = add("r1_l2", s.r1, -(1.0 + p.lambda0));
  add("r1_hdot_k", s.r1k, -(1.0 + p.lambda));
  add("grad_r2_m0", s.gr2, -(1.0 + p.lambda0 - p.beta));
  add("grad_r2_m_ell", s.gr2l, -(1.0 + p.lambda0 - p.beta * (p.ell + 1.0)));
  j["fits"] = fits;
  c.r1_slope = b1.vacuous ? std::nan("") : b1.fit.slope;

  // cancellation: R1 with W against R1 with W1 at every probe
  json cancel = json::array();
  bool cancel_ok = true;
  const bool wave = !pb.wave().is_zero();
  if (wave) {
    RemainderOptions no_w2;
    no_w2.with_w2 = false;
    for (double t : c.cfg.probes) {
      const double a = l2_norm(pb.remainders(t).r1), b = l2_norm(pb.remainders(t, no_w2).r1);
      const bool strict = a < b;
      cancel_ok = cancel_ok && strict;
      cancel.push_back({{"t", t}, {"with_W", a}, {"with_W1", b}, {"ratio", b > 0 ? a / b : 0.0}, {"pass", strict}});
    }
  }
  j["cancellation"] = {{"applicable", wave}, {"rows", cancel}, {"pass", cancel_ok}};
  c.rep.doc["remainders"] = j;

  const bool all = ok && cancel_ok;
  std::string d = fmt("R1 slope %.3f (bound %.3f)", b1.fit.slope, -(1.0 + p.lambda0) + tol);
  d += wave ? (cancel_ok ? ", cancellation at every probe" : ", cancellation fails at some probe")
            : ", cancellation not applicable (zero wave)";
  c.verdict(4, all ? "pass" : "fail", d);
}

void negative_control(Ctx& c, const ProfileBuilder& pb) {
  json j;
  if (pb.wave().is_zero()) {
    c.rep.doc["negative_control"] = {{"skipped", "zero wave state"}};
    c.verdict(8, "not_applicable", "zero wave state");
    return;
  }
  const auto& rw = c.cfg.remainder_window;
  auto ts = log_space(rw.lo, rw.hi, rw.points);
  RemainderOptions o;
  o.with_w2 = false;
  o.b0_all_short = true;
  RemainderSeries s = remainder_series(pb, ts, o, nullptr);
  c.series("control_r1_l2", s.t, s.r1);
  j["series"] = {{"t", s.t}, {"r1_l2", s.r1}};
  bool ok = false;
  std::string d;
  try {
    FitResult f = fit_power_law(s.t, s.r1);
    const double degrade = f.slope - c.r1_slope;
    ok = std::isfinite(degrade) && degrade >= 0.2;
    j["fit"] = fit_json(f);
    j["reference_slope"] = finite_or_null(c.r1_slope);
    j["degradation"] = finite_or_null(degrade);
    d = fmt("control slope %.3f vs %.3f, degradation %.3f (need >= 0.2)", f.slope, c.r1_slope, degrade);
  } catch (const std::exception& e) {
    j["error"] = e.what();
    d = e.what();
  }
  j["pass"] = ok;
  c.rep.doc["negative_control"] = j;
  c.verdict(8, ok ? "pass" : "fail", d);
}

// ---------------------------------------------------------------- criterion 5

json solve_json(const SolveResult& r) {
  return {{"seconds", r.seconds},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"contraction", r.contraction},
          {"min_query_ratio", r.min_query_ratio},
          {"max_curl_ratio", r.max_curl_ratio}};
}

double max_rel_gap(const SolutionHistory& a, const SolutionHistory& b) {
  double gap = 0.0, size = 0.0;
  for (int j = 0; j <= a.intervals(); ++j) {
    AuxState x = a.state(j), y = b.state(j);
    gap = std::max(gap, l2_norm(x.q - y.q));
    size = std::max(size, l2_norm(x.q));
  }
  return size > 0.0 ? gap / size : gap;
}

struct SolveOutcome {
  std::shared_ptr<const SolutionHistory> history;  // used downstream
  bool decay_ok = false;
};

SolveOutcome solve_checks(Ctx& c, const ProfileCache& cache) {
  json j;
  const auto& sc = c.cfg.solver;
  const bool direct = sc.mode != "picard", picard = sc.mode != "direct";
  SolveResult d, pr;
  if (direct) {
    d = integrate_backward(sc, cache);
    j["direct"] = solve_json(d);
    note("[%8.1fs] %s\n", now() - c.t_start, "direct sweep " + fmt("%.1fs", d.seconds));
  }
  if (picard) {
    pr = picard_solve(sc, cache);
    j["picard"] = solve_json(pr);
    note("[%8.1fs] %s\n", now() - c.t_start,
         "picard " + fmt("%.0f iterations, %.1fs", pr.iterations, pr.seconds));
  }
  SolveOutcome out;
  out.history = picard && !direct ? pr.history : d.history;
  const SolutionHistory& h = *out.history;

  DecaySeries ds = decay_series(h, c.cfg.params);
  c.series("solver_q_l2", ds.t, ds.q_l2);
  c.series("solver_q_hdot_k", ds.t, ds.q_hk);
  c.series("solver_grad_sigma", ds.t, ds.grad_sigma_0);
  c.series("solver_grad_sigma_ell", ds.t, ds.grad_sigma_ell);
  json fits = json::array();
  bool decay_ok = true;
  for (const auto& f : decay_report(h, c.cfg.params)) {
    fits.push_back({{"id", f.id},
                    {"slope", finite_or_null(f.slope)},
                    {"target", f.target},
                    {"tolerance", f.tolerance},
                    {"stderr", finite_or_null(f.stderr_slope)},
                    {"vacuous", f.vacuous},
                    {"pass", f.pass}});
    decay_ok = decay_ok && f.pass;
  }
  j["decay"] = fits;
  out.decay_ok = decay_ok;

  const double curl = std::max(direct ? d.max_curl_ratio : 0.0, picard ? pr.max_curl_ratio : 0.0);
  const bool curl_ok = curl <= 1e-7;
  bool contraction_ok = true, agree_ok = true;
  double agree = 0.0;
  if (picard) {
    for (double x : pr.contraction) contraction_ok = contraction_ok && x < 1.0;
    contraction_ok = contraction_ok && pr.converged;
  }
  if (direct && picard) {
    agree = max_rel_gap(*d.history, *pr.history);
    agree_ok = agree <= 1e-5;
    j["agreement"] = agree;
  }
  j["max_curl_ratio"] = curl;

  // T_max study: same log step, T_max halved and doubled
  json tm;
  bool tmax_ok = true;
  if (c.cfg.tmax_study) {
    const int gn = c.cfg.tmax_study_grid > 0 ? c.cfg.tmax_study_grid : c.cfg.grid.n;
    std::unique_ptr<ProfileBuilder> own;
    std::unique_ptr<ProfileCache> own_cache;
    const ProfileCache* pc = &cache;
    if (gn != c.cfg.grid.n) {
      auto g = SpectralGrid::make(gn, c.cfg.grid.L);
      auto ss = build_schrodinger_state(c.cfg.schrodinger, c.cfg.params.kplus, g);
      auto ws = build_wave_state(c.cfg.a_plus, c.cfg.a_dot, c.cfg.params.mu, g);
      own = std::make_unique<ProfileBuilder>(g, ss, ws, c.cfg.params, c.cfg.profiles);
      own_cache = std::make_unique<ProfileCache>(*own, false);
      pc = own_cache.get();
    }
    const double span = std::log(sc.T_max / sc.T);
    std::vector<double> tmaxes{0.5 * sc.T_max, sc.T_max, 2.0 * sc.T_max};
    std::vector<double> qT;
    std::vector<ScalarField> q0;
    for (double tmx : tmaxes) {
      SolverConfig s2 = sc;
      s2.T_max = tmx;
      s2.nodes = std::max(2, static_cast<int>(std::lround(sc.nodes * std::log(tmx / sc.T) / span)));
      std::shared_ptr<const SolutionHistory> hh;
      if (tmx == sc.T_max && gn == c.cfg.grid.n && direct) hh = d.history;
      else hh = integrate_backward(s2, *pc).history;
      q0.push_back(hh->state(0).q);
      qT.push_back(l2_norm(q0.back()));
    }
    const double d1 = l2_norm(q0[1] - q0[0]), d2 = l2_norm(q0[2] - q0[1]);
    const double lam = c.cfg.params.lambda0;
    double expo = std::nan("");
    if (d1 == 0.0 && d2 == 0.0) {
      tm["vacuous"] = true;
    } else {
      expo = std::log2(d1 / d2);
      tmax_ok = std::isfinite(expo) && expo >= lam - c.cfg.slope_tolerance;
    }
    tm["grid_n"] = gn;
    tm["T_max"] = tmaxes;
    tm["q_T_l2"] = qT;
    tm["delta_half_to_full"] = d1;
    tm["delta_full_to_double"] = d2;
    tm["observed_exponent"] = finite_or_null(expo);
    tm["required_exponent"] = lam - c.cfg.slope_tolerance;
    tm["pass"] = tmax_ok;
    note("[%8.1fs] %s\n", now() - c.t_start, "T_max study " + fmt("exponent %.3f", expo));
  }
  j["tmax_study"] = tm;
  c.rep.doc["solver"] = j;

  std::string det = std::string("decay ") + (decay_ok ? "ok" : "off") + fmt(", curl %.1e", curl);
  if (picard) det += std::string(", contraction ") + (contraction_ok ? "< 1" : "not < 1");
  if (direct && picard) det += fmt(", agreement %.1e", agree);
  if (c.cfg.tmax_study) det += std::string(", T_max study ") + (tmax_ok ? "ok" : "off");
  const bool any_fail = !decay_ok || !curl_ok || !contraction_ok || !agree_ok || !tmax_ok;
  if (any_fail) c.verdict(5, "fail", det);
  else if (!(direct && picard) || !c.cfg.tmax_study) c.verdict(5, "not_run", det + "; needs mode both and the T_max study");
  else c.verdict(5, "pass", det);
  return out;
}

// ---------------------------------------------------------------- criterion 6

json residual_json(const ResidualResult& r) {
  return {{"t", r.t},           {"res1", r.res1}, {"res2", r.res2}, {"fd1", r.fd1},
          {"fd2", r.fd2},       {"inconclusive1", r.inconclusive1}, {"inconclusive2", r.inconclusive2}};
}

void reconstruction_checks(Ctx& c, const Reconstruction& rec) {
  json j;
  const auto& sc = c.cfg.solver;
  const double tr = c.cfg.residual_time > 0.0 ? c.cfg.residual_time : 4.0 * sc.T;

  GradientCheck gc = rec.gradient_check();
  c.series("psi_gradient_mismatch", gc.t, gc.mismatch);
  j["gradient_check"] = {{"worst_ratio", gc.worst_ratio},
                         {"literal_worst", gc.literal_worst},
                         {"tail_estimate", gc.tail_estimate},
                         {"pass", gc.pass}};

  // residual refinement: coarse levels rebuilt from scratch, the main run last
  json levels = json::array();
  std::vector<double> r1s, r2s;
  for (auto [n, nodes] : c.cfg.refinement) {
    auto g = SpectralGrid::make(n, c.cfg.grid.L);
    auto s2 = build_schrodinger_state(c.cfg.schrodinger, c.cfg.params.kplus, g);
    auto w2 = build_wave_state(c.cfg.a_plus, c.cfg.a_dot, c.cfg.params.mu, g);
    ProfileBuilder pb(g, s2, w2, c.cfg.params, c.cfg.profiles);
    ProfileCache pc(pb, false);
    SolverConfig s = sc;
    s.nodes = nodes;
    auto h = integrate_backward(s, pc).history;
    Reconstruction r(pb, h);
    ResidualResult rr = r.ws_residual(tr);
    json lj = residual_json(rr);
    lj["n"] = n;
    lj["nodes"] = nodes;
    levels.push_back(lj);
    r1s.push_back(rr.res1);
    r2s.push_back(rr.res2);
    note("[%8.1fs] %s\n", now() - c.t_start, "refinement level " + fmt("n=%.0f nodes=%.0f", n, nodes));
  }
  ResidualResult main = rec.ws_residual(tr);
  json mj = residual_json(main);
  mj["n"] = c.cfg.grid.n;
  mj["nodes"] = sc.nodes;
  levels.push_back(mj);
  r1s.push_back(main.res1);
  r2s.push_back(main.res2);
  auto decreasing = [](const std::vector<double>& v) {
    if (all_zero(v)) return true;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  };
  const bool res_ok = c.cfg.refinement.empty() ? false : decreasing(r1s) && decreasing(r2s);
  j["residuals"] = {{"t", tr}, {"levels", levels}, {"monotone", res_ok}};

  AsymptoticsReport ar = rec.asymptotics(c.cfg.params);
  json rows = json::array();
  for (const auto& r : ar.rows) {
    c.series("asymptotic_" + r.id + "_" + r.comparison, r.t, r.value);
    rows.push_back({{"id", r.id},
                    {"comparison", r.comparison},
                    {"target", r.target},
                    {"tolerance", r.tolerance},
                    {"fit", fit_json(r.fit)},
                    {"informative", r.informative},
                    {"vacuous", r.vacuous},
                    {"pass", r.pass}});
  }
  j["asymptotics"] = {{"rows", rows}, {"identity_max_rel", ar.identity_max_rel}, {"identity_pass", ar.identity_pass}};

  PhysicalSnapshot snap = rec.snapshot(tr);
  j["snapshot"] = {{"t", tr},
                   {"u_l2", l2_norm(snap.u)},
                   {"A_linf", linf_norm(snap.A)},
                   {"psi_linf", linf_norm(snap.psi)},
                   {"A_imag_ratio", imag_ratio(snap.A)}};
  j["seconds"] = rec.seconds();
  c.rep.doc["reconstruction"] = j;

  const bool ok = gc.pass && res_ok && ar.all_pass();
  auto seq = [](const std::vector<double>& v) {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : " -> ") + fmt("%.1e", x);
    return out;
  };
  std::string d = std::string("gradient ") + (gc.pass ? "ok" : "off") + ", residuals " +
                  (c.cfg.refinement.empty() ? std::string("not studied")
                                            : std::string(res_ok ? "decrease" : "do not decrease") + " (res1 " + seq(r1s) +
                                                  "; res2 " + seq(r2s) + ")") +
                  ", asymptotics " + (ar.all_pass() ? "ok" : "off") + fmt(", identity %.1e", ar.identity_max_rel);
  if (c.cfg.refinement.empty() && gc.pass && ar.all_pass()) c.verdict(6, "not_run", d);
  else c.verdict(6, ok ? "pass" : "fail", d);
}

// ---------------------------------------------------------------- criterion 7

void headline_check(Ctx& c, const SchrodingerState& ss, const GridPtr& g) {
  if (ss.trivial) {
    c.verdict(7, "not_applicable", "zero Schrodinger state");
    return;
  }
  const double ratio = unit_sphere_ratio(ss, g);
  c.rep.doc["unit_sphere_ratio"] = ratio;
  std::string worst = "pass";
  for (int id : {4, 5, 6}) {
    const auto& s = c.rep.verdicts[id - 1].status;
    if (s == "fail") worst = "fail";
    else if (s != "pass" && worst == "pass") worst = "not_run";
  }
  std::string d = fmt("sphere ratio %.3f, criteria 4-6 ", ratio) + worst;
  if (!(ratio > 0.1) || worst == "fail") c.verdict(7, "fail", d);
  else c.verdict(7, worst, d);
}

const char* kNames[8] = {"spectral_exactness", "free_wave",      "profile_asymptotics",
                         "remainder_decay",    "auxiliary_solve", "reconstruction",
                         "no_support_condition", "negative_control"};

}  // namespace

bool RunReport::any_fail() const {
  if (doc.contains("stopped")) return true;  // invalid inputs count as failures
  for (const auto& v : verdicts)
    if (v.status == "fail") return true;
  return false;
}

RunReport run_pipeline(const RunConfig& cfg) {
  RunReport rep;
  for (int i = 0; i < 8; ++i) rep.verdicts.push_back({i + 1, kNames[i], "not_run", ""});
  Ctx c{cfg, rep};
  rep.doc["schema_version"] = kReportSchemaVersion;
  rep.doc["config"] = to_json(cfg);

  ParameterReport pr = validate_parameters(cfg.params);
  json prow = json::array();
  for (const auto& r : pr.rows)
    prow.push_back({{"id", r.id}, {"expression", r.expression}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"pass", r.pass}});
  rep.doc["parameters"] = {{"rows", prow}, {"all_pass", pr.all_pass()}, {"failures", pr.failures()}};
  if (!pr.all_pass()) {
    rep.doc["stopped"] = "parameter conditions violated";
    for (auto& v : rep.verdicts) v.detail = "parameter conditions violated";
    return rep;
  }

  auto g = SpectralGrid::make(cfg.grid.n, cfg.grid.L);
  SchrodingerState ss = build_schrodinger_state(cfg.schrodinger, cfg.params.kplus, g);
  WaveState ws = build_wave_state(cfg.a_plus, cfg.a_dot, cfg.params.mu, g);
  StateValidationReport sv = validate_states(ss, ws, cfg.params, g);
  auto rows = [](const std::vector<NormRow>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back({{"id", r.id}, {"value", finite_or_null(r.value)}, {"finite", r.finite}});
    return a;
  };
  rep.doc["states"] = {{"conditions", rows(sv.conditions)},
                       {"moments", rows(sv.moments)},
                       {"envelopes", rows(sv.envelopes)},
                       {"schrodinger_ok", sv.schrodinger_ok},
                       {"all_pass", sv.all_pass()},
                       {"b0", ws.b0},
                       {"wave_zero", ws.is_zero()},
                       {"schrodinger_trivial", ss.trivial}};
  if (!sv.all_pass()) {
    rep.doc["stopped"] = "asymptotic state fails its conditions";
    for (auto& v : rep.verdicts) v.detail = "asymptotic state fails its conditions";
    return rep;
  }

  spectral_checks(c);
  wave_checks(c, ws, g);
  c.stage_done("validate");
  if (cfg.stage == Stage::validate) return rep;

  ProfileBuilder pb(g, ss, ws, cfg.params, cfg.profiles);
  const auto& ti = pb.table_info();
  rep.doc["profiles"]["table"] = {{"nodes", ti.nodes},
                                  {"step", ti.step},
                                  {"horizon", ti.horizon},
                                  {"seconds", ti.seconds},
                                  {"b1_tail_max", ti.b1_tail_max}};
  profile_checks(c, pb);
  remainder_checks(c, pb);
  negative_control(c, pb);
  c.stage_done("profiles");
  if (cfg.stage == Stage::profiles) return rep;

  ProfileCache cache(pb, false);
  SolveOutcome so = solve_checks(c, cache);
  c.stage_done("solve");
  if (cfg.stage == Stage::solve) return rep;

  Reconstruction rec(pb, so.history);
  reconstruction_checks(c, rec);
  c.stage_done("reconstruct");
  if (cfg.stage == Stage::reconstruct) return rep;

  headline_check(c, ss, g);
  rep.doc["seconds"] = now() - c.t_start;
  return rep;
}

std::string summary_text(const RunReport& r) {
  std::ostringstream os;
  for (const auto& v : r.verdicts) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "criterion %d %-22s %-15s", v.id, v.name.c_str(), v.status.c_str());
    os << buf << v.detail << "\n";
  }
  return os.str();
}

void emit_report(const RunReport& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "series");
  json doc = r.doc;
  json v = json::array();
  for (const auto& x : r.verdicts) v.push_back({{"id", x.id}, {"name", x.name}, {"status", x.status}, {"detail", x.detail}});
  doc["verdicts"] = v;
  json idx = json::array();
  for (const auto& [name, tv] : r.series) {
    write_series_csv((fs::path(dir) / "series" / (name + ".csv")).string(), tv.first, tv.second);
    idx.push_back(name);
  }
  doc["series"] = idx;
  std::ofstream((fs::path(dir) / "report.json").string()) << doc.dump(2) << "\n";
  std::ofstream((fs::path(dir) / "summary.txt").string()) << summary_text(r);
}

}  // namespace ws
