#include "ws/solver.hpp"

#include <chrono>
#include <cmath>

#include "ws/quadrature.hpp"

namespace ws {

namespace {

void chirp_k(CVec& s, const SpectralGrid& g, double c) {
  const auto& k2 = g.k2();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= std::polar(1.0, c * k2[i]);
}

CVec spec_of(const ScalarField& f) {
  CVec s = to_spectrum(f);
  dealias_spectrum(s, *f.grid);
  return s;
}

double curl_ratio(const VectorField& s) {
  double gn = 0.0;
  for (int j = 0; j < 3; ++j) {
    double v = sobolev_norm(s.c[j], 1.0, SobolevVariant::homogeneous);
    gn += v * v;
  }
  if (gn == 0.0) return 0.0;
  return l2_norm(curl(s)) / std::sqrt(gn);
}

}  // namespace

// ---------------- history ----------------

SolutionHistory::SolutionHistory(GridPtr g, double T, double T_max, int intervals)
    : g_(std::move(g)), codec_(g_), T_(T), Tmax_(T_max), N_(intervals) {
  if (!(T >= 1.0 && T < T_max)) throw std::invalid_argument("need 1 <= T < T_max");
  if (intervals < 1) throw std::invalid_argument("history needs at least one interval");
  dx_ = std::log(T_max / T) / N_;
  std::vector<cplx> zero(codec_.band_size(), 0.0);
  v_.assign(N_ + 4, zero);
  sig_.assign(N_ + 4, {zero, zero, zero});
  filled_.assign(N_ + 4, false);
  for (int j = N_ + 1; j < N_ + 4; ++j) filled_[j] = true;  // tail model: zero beyond T_max
  lowest_ = N_ + 1;
}

double SolutionHistory::time(int j) const { return j == N_ ? Tmax_ : T_ * std::exp(j * dx_); }

void SolutionHistory::set(int j, const CVec& v_spec, const VectorField& sigma) {
  if (j < 0 || j > N_) throw std::out_of_range("history node out of range");
  v_[j] = codec_.pack(v_spec);
  for (const auto& x : v_[j])
    if (x != cplx(0.0)) q_zero_ = false;
  for (int a = 0; a < 3; ++a) sig_[j][a] = codec_.pack(spec_of(sigma.c[a]));
  filled_[j] = true;
  lowest_ = std::min(lowest_, j);
}

AuxState SolutionHistory::state(int j) const {
  if (!filled_[j]) throw std::logic_error("history node not filled");
  AuxState s;
  s.t = time(j);
  CVec v = codec_.unpack(v_[j]);
  chirp_k(v, *g_, 0.5 / s.t);
  s.q = from_spectrum(g_, std::move(v), Frame::bframe, s.t);
  for (int a = 0; a < 3; ++a) s.sigma.c[a] = real_part(from_spectrum(g_, codec_.unpack(sig_[j][a]), Frame::bframe, s.t));
  return s;
}

std::vector<double> SolutionHistory::stencil(double tau, int& k0, int& count) const {
  const double u = std::log(tau / T_) / dx_;
  if (lowest_ > N_) throw std::logic_error("history is empty");
  if (u < lowest_ - 1.0 - 1e-9) throw std::logic_error("history queried before its filled range");
  const int hi = N_ + 3;
  count = std::min(4, hi - lowest_ + 1);
  k0 = static_cast<int>(std::floor(u)) - 1;
  k0 = std::max(lowest_, std::min(k0, hi - count + 1));
  std::vector<double> xs(count);
  for (int a = 0; a < count; ++a) xs[a] = k0 + a;
  return lagrange_weights(xs, u);
}

CVec SolutionHistory::v_spec_at(double tau) const {
  min_query_ = std::min(min_query_, tau);
  if (tau > Tmax_ * (1.0 + 1e-12)) return CVec(g_->size(), 0.0);
  int k0, count;
  auto w = stencil(tau, k0, count);
  std::vector<cplx> acc(codec_.band_size(), 0.0);
  for (int a = 0; a < count; ++a)
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[a] * v_[k0 + a][i];
  return codec_.unpack(acc);
}

ScalarField SolutionHistory::q_at(double tau) const {
  CVec v = v_spec_at(tau);
  chirp_k(v, *g_, 0.5 / tau);
  return from_spectrum(g_, std::move(v), Frame::bframe, tau);
}

VectorField SolutionHistory::sigma_at(double tau) const {
  min_query_ = std::min(min_query_, tau);
  VectorField s(g_, Frame::bframe, tau);
  if (tau > Tmax_ * (1.0 + 1e-12)) return s;
  int k0, count;
  auto w = stencil(tau, k0, count);
  for (int c = 0; c < 3; ++c) {
    std::vector<cplx> acc(codec_.band_size(), 0.0);
    for (int a = 0; a < count; ++a)
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[a] * sig_[k0 + a][c][i];
    s.c[c] = real_part(from_spectrum(g_, codec_.unpack(acc), Frame::bframe, tau));
  }
  return s;
}

// ---------------- profile cache ----------------

ProfileCache::ProfileCache(const ProfileBuilder& pb, bool zero_remainders)
    : pb_(pb), codec_(pb.grid()), zero_r_(zero_remainders) {}

ProfileCache::Entry ProfileCache::at(double t) const {
  auto it = memo_.find(t);
  if (it == memo_.end()) {
    RemainderPair r = pb_.remainders(t);
    Packed p;
    p.f.push_back(codec_.pack(spec_of(r.W)));
    for (int a = 0; a < 3; ++a) p.f.push_back(codec_.pack(spec_of(r.S.c[a])));
    p.f.push_back(codec_.pack(spec_of(r.b_short)));
    p.f.push_back(codec_.pack(spec_of(r.r1)));
    for (int a = 0; a < 3; ++a) p.f.push_back(codec_.pack(spec_of(r.r2.c[a])));
    it = memo_.emplace(t, std::move(p)).first;
  }
  const GridPtr g = pb_.grid();
  auto un = [&](int i) { return from_spectrum(g, codec_.unpack(it->second.f[i]), Frame::bframe, t); };
  Entry e;
  e.W = un(0);
  for (int a = 0; a < 3; ++a) e.S.c[a] = real_part(un(1 + a));
  e.b_short = real_part(un(4));
  if (zero_r_) {
    e.r1 = ScalarField(g, Frame::bframe, t);
    e.r2 = VectorField(g, Frame::bframe, t);
  } else {
    e.r1 = un(5);
    for (int a = 0; a < 3; ++a) e.r2.c[a] = real_part(un(6 + a));
  }
  return e;
}

// ---------------- right-hand side ----------------

namespace {

struct BTerms {
  ScalarField bs;  // 2 B_S(W,q) + B_S(q,q)
  ScalarField bl;  // 2 B_L(W,q) + B_L(q,q)
};

BTerms b_terms(double t, const ProfileCache& prof, const SolutionHistory& hist) {
  const ProfileBuilder& pb = prof.builder();
  const GridPtr g = pb.grid();
  const double tmax = hist.time(hist.intervals());
  if (hist.q_is_zero()) {
    hist.q_at(t);  // keeps the access log meaningful
    return {ScalarField(g, Frame::bframe, t), ScalarField(g, Frame::bframe, t)};
  }
  auto dens = [&](double tau) {
    ScalarField q = hist.q_at(tau);
    if (tau > tmax * (1.0 + 1e-12)) return std::vector<ScalarField>{ScalarField(g, Frame::bframe, tau)};
    ScalarField W = pb.W_at(tau);
    ScalarField d = 2.0 * real_density(W, q);
    d += real_density(q, q);
    return std::vector<ScalarField>{real_part(d)};
  };
  auto B = b1_spectra(dens, t, g, pb.config().b1);
  CVec L, S;
  split_spectrum(B[0], *g, t, pb.config().beta, &L, &S);
  return {real_part(from_spectrum(g, std::move(S), Frame::bframe, t)),
          real_part(from_spectrum(g, std::move(L), Frame::bframe, t))};
}

// linear in (qn, sn) with coefficients from (qo, so); direct sweep uses qo = qn.
// linearized: the sigma transport is taken in gradient form grad((S + so/2) . sn), which equals
// (S + so).grad(sn) + sn.grad(S) at the fixed point but stays curl-free at every iterate
RhsTerms rhs_core(double t, const ScalarField& qn, const VectorField& sn, const ScalarField& qo,
                  const VectorField& so, const BTerms& bt, const ProfileCache::Entry& E, const SolverConfig& cfg,
                  bool linearized = false) {
  const GridPtr g = qn.grid;
  const double it = 1.0 / t, it2 = it * it;
  const cplx I(0.0, 1.0);
  RhsTerms r;
  CVec lap = to_spectrum(qn);
  const auto& k2 = g->k2();
  for (std::size_t i = 0; i < lap.size(); ++i) lap[i] *= -I * (0.5 * it2) * k2[i];
  r.dq = from_spectrum(g, std::move(lap), Frame::bframe, t);
  if (cfg.free_only) {
    r.dsigma = VectorField(g, Frame::bframe, t);
    return r;
  }
  (void)qo;
  VectorField s_old = E.S + so;
  r.dq += it2 * (transport_q(s_old, qn) + transport_q(so, E.W));
  r.dq += (I * it) * product(E.b_short + bt.bs, qn);
  r.dq += (I * it) * product(bt.bs, E.W);
  r.dq -= E.r1;
  if (linearized)
    r.dsigma = it2 * grad(real_part(dot(E.S + 0.5 * so, sn)));
  else
    r.dsigma = it2 * (advect(s_old, sn) + advect(so, E.S));
  r.dsigma -= it * grad(bt.bl);
  r.dsigma -= E.r2;
  return r;
}

struct Y {
  CVec v;
  VectorField s;
};

void axpy(Y& y, double a, const Y& x) {
  for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += a * x.v[i];
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < y.s.c[c].v.size(); ++i) y.s.c[c].v[i] += a * x.s.c[c].v[i];
}

bool finite(const Y& y) {
  for (const auto& x : y.v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  for (int c = 0; c < 3; ++c)
    for (const auto& x : y.s.c[c].v)
      if (!std::isfinite(x.real())) return false;
  return true;
}

// one backward sweep; old == nullptr means the fully nonlinear direct sweep
std::shared_ptr<SolutionHistory> sweep(const SolverConfig& cfg, const ProfileCache& prof,
                                       const SolutionHistory* old, double& min_ratio) {
  const GridPtr g = prof.builder().grid();
  auto hist = std::make_shared<SolutionHistory>(g, cfg.T, cfg.T_max, cfg.nodes);
  const int N = cfg.nodes;
  const double dx = hist->log_step();
  auto thalf = [&](int m) { return m == 2 * N ? cfg.T_max : cfg.T * std::exp(0.5 * m * dx); };

  Y y{CVec(g->size(), 0.0), VectorField(g, Frame::bframe, cfg.T_max)};
  hist->set(N, y.v, y.s);
  std::map<int, BTerms> bcache;  // Picard: B-terms depend only on the old iterate

  auto f = [&](int m, const Y& st) {
    const double t = thalf(m);
    CVec v = st.v;
    chirp_k(v, *g, 0.5 / t);
    ScalarField q = from_spectrum(g, std::move(v), Frame::bframe, t);
    ProfileCache::Entry E = prof.at(t);
    BTerms bt;
    RhsTerms r;
    if (cfg.free_only) {
      bt = {ScalarField(g, Frame::bframe, t), ScalarField(g, Frame::bframe, t)};
      r = rhs_core(t, q, st.s, q, st.s, bt, E, cfg);
    } else if (old) {
      auto itb = bcache.find(m);
      if (itb == bcache.end()) {
        old->reset_access_log();
        itb = bcache.emplace(m, b_terms(t, prof, *old)).first;
        min_ratio = std::min(min_ratio, old->min_query() / t);
      }
      ScalarField qo = old->q_at(t);
      VectorField so = old->sigma_at(t);
      r = rhs_core(t, q, st.s, qo, so, itb->second, E, cfg, true);
    } else {
      hist->reset_access_log();
      bt = b_terms(t, prof, *hist);
      min_ratio = std::min(min_ratio, hist->min_query() / t);
      r = rhs_core(t, q, st.s, q, st.s, bt, E, cfg);
    }
    Y out{to_spectrum(r.dq), std::move(r.dsigma)};
    chirp_k(out.v, *g, -0.5 / t);  // U(1/t)
    dealias_spectrum(out.v, *g);
    for (auto& x : out.v) x *= t;   // d/d(log t)
    out.s *= t;
    return out;
  };

  for (int j = N - 1; j >= 0; --j) {
    Y k1 = f(2 * j + 2, y);
    Y y2 = y;
    axpy(y2, -0.5 * dx, k1);
    Y k2 = f(2 * j + 1, y2);
    Y y3 = y;
    axpy(y3, -0.5 * dx, k2);
    Y k3 = f(2 * j + 1, y3);
    Y y4 = y;
    axpy(y4, -dx, k3);
    Y k4 = f(2 * j, y4);
    axpy(y, -dx / 6.0, k1);
    axpy(y, -dx / 3.0, k2);
    axpy(y, -dx / 3.0, k3);
    axpy(y, -dx / 6.0, k4);
    if (!finite(y)) throw std::runtime_error("non-finite value in the backward sweep");
    for (int c = 0; c < 3; ++c) y.s.c[c] = real_part(y.s.c[c]);
    hist->set(j, y.v, y.s);
  }
  return hist;
}

double max_curl(const SolutionHistory& h) {
  double m = 0.0;
  for (int j = 0; j <= h.intervals(); ++j) m = std::max(m, curl_ratio(h.state(j).sigma));
  return m;
}

}  // namespace

RhsTerms aux_rhs(const AuxState& st, double t, const ProfileCache& prof, const SolutionHistory& hist,
                 const SolverConfig& cfg) {
  ProfileCache::Entry E = prof.at(t);
  BTerms bt;
  if (cfg.free_only) {
    bt = {ScalarField(st.q.grid, Frame::bframe, t), ScalarField(st.q.grid, Frame::bframe, t)};
  } else {
    bt = b_terms(t, prof, hist);
  }
  return rhs_core(t, st.q, st.sigma, st.q, st.sigma, bt, E, cfg);
}

SolveResult integrate_backward(const SolverConfig& cfg, const ProfileCache& prof) {
  if (cfg.nodes < 1) throw std::invalid_argument("node count must be positive");
  auto t0 = std::chrono::steady_clock::now();
  SolveResult r;
  r.history = sweep(cfg, prof, nullptr, r.min_query_ratio);
  r.iterations = 1;
  r.max_curl_ratio = max_curl(*r.history);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

SolveResult picard_solve(const SolverConfig& cfg, const ProfileCache& prof) {
  auto t0 = std::chrono::steady_clock::now();
  const auto& p = prof.builder().params();
  const GridPtr g = prof.builder().grid();
  SolveResult r;
  auto old = std::make_shared<SolutionHistory>(g, cfg.T, cfg.T_max, cfg.nodes);
  for (int j = 0; j <= cfg.nodes; ++j) old->set(j, CVec(g->size(), 0.0), VectorField(g));
  double prev = -1.0;
  r.converged = false;
  for (int it = 1; it <= cfg.picard_max_iter; ++it) {
    auto next = sweep(cfg, prof, old.get(), r.min_query_ratio);
    double diff = 0.0, size = 0.0;
    for (int j = 0; j <= cfg.nodes; ++j) {
      AuxState a = next->state(j), b = old->state(j);
      const double t = a.t;
      const double wq = std::pow(t, p.lambda0), ws = std::pow(t, p.lambda0 - p.beta);
      diff = std::max(diff, wq * l2_norm(a.q - b.q) + ws * l2_norm(a.sigma - b.sigma));
      size = std::max(size, wq * l2_norm(a.q) + ws * l2_norm(a.sigma));
    }
    if (prev > 0.0) r.contraction.push_back(diff / prev);
    prev = diff;
    old = next;
    r.iterations = it;
    if (diff <= cfg.picard_tol * size || size == 0.0) {
      r.converged = true;
      break;
    }
  }
  r.history = old;
  r.max_curl_ratio = max_curl(*r.history);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

DecaySeries decay_series(const SolutionHistory& h, const ScatteringParameters& p) {
  DecaySeries d;
  for (int j = 0; j <= h.intervals(); ++j) {
    AuxState s = h.state(j);
    d.t.push_back(s.t);
    d.q_l2.push_back(l2_norm(s.q));
    d.q_hk.push_back(sobolev_norm(s.q, p.k, SobolevVariant::homogeneous));
    double g0 = 0.0, gl = 0.0;
    for (int c = 0; c < 3; ++c) {
      double a = sobolev_norm(s.sigma.c[c], 1.0, SobolevVariant::homogeneous);
      double b = sobolev_norm(s.sigma.c[c], p.ell + 1.0, SobolevVariant::homogeneous);
      g0 += a * a;
      gl += b * b;
    }
    d.grad_sigma_0.push_back(std::sqrt(g0));
    d.grad_sigma_ell.push_back(std::sqrt(gl));
    d.sigma_l2.push_back(l2_norm(s.sigma));
  }
  return d;
}

std::vector<DecayFit> decay_report(const SolutionHistory& h, const ScatteringParameters& p) {
  const double T = h.time(0), Tmax = h.time(h.intervals());
  const double lo = 2.0 * T, hi = Tmax / 4.0;
  if (!(hi > lo)) throw std::invalid_argument("decay window [2T, T_max/4] is empty");
  DecaySeries d = decay_series(h, p);
  std::vector<DecayFit> out;
  auto add = [&](const std::string& id, const std::vector<double>& v, double target) {
    std::vector<double> tw, vw;
    window(d.t, v, lo, hi, tw, vw);
    DecayFit f;
    f.id = id;
    f.target = target;
    BoundFit b = slope_bound(tw, vw, target, f.tolerance);
    f.slope = b.fit.slope;
    f.stderr_slope = b.fit.stderr_slope;
    f.vacuous = b.vacuous;
    f.pass = b.pass;
    out.push_back(f);
  };
  add("q_l2", d.q_l2, -p.lambda0);
  add("q_hdot_k", d.q_hk, -p.lambda);
  add("grad_sigma_m0", d.grad_sigma_0, -p.lambda0 + p.beta);
  add("grad_sigma_m_ell", d.grad_sigma_ell, -p.lambda0 + p.beta * (p.ell + 1.0));
  return out;
}

}  // namespace ws
