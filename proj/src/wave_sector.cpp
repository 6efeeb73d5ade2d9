#include "ws/wave_sector.hpp"

#include <cmath>

namespace ws {

double chi(double rho) {
  if (rho <= 1.0) return 1.0;
  if (rho >= 2.0) return 0.0;
  const double a = std::exp(-1.0 / (2.0 - rho));
  const double b = std::exp(-1.0 / (rho - 1.0));
  return a / (a + b);
}

SplitPair split_long_short(const ScalarField& B, double t, double beta) {
  if (!(t >= 1.0)) throw std::domain_error("split requires t >= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("split exponent must lie in (0, 1)");
  const auto& g = *B.grid;
  CVec s = to_spectrum(B), ls(s.size());
  const double scale = std::pow(t, -beta);
  const auto& ka = g.kabs();
  double band = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double rho = ka[i] * scale;
    ls[i] = chi(rho) * s[i];
    s[i] -= ls[i];
    const double e = std::norm(ls[i] + s[i]);
    tot += e;
    if (rho > 1.0 && rho < 2.0) band += e;
  }
  SplitPair p;
  p.long_part = from_spectrum(B.grid, std::move(ls), B.frame, B.t);
  p.short_part = from_spectrum(B.grid, std::move(s), B.frame, B.t);
  p.beta = beta;
  p.t = t;
  p.band_fraction = tot > 0.0 ? band / tot : 0.0;
  return p;
}

std::pair<ScalarField, ScalarField> free_wave_a0(const WaveState& w, double t, GridPtr g) {
  if (!(t >= 0.0)) throw std::domain_error("free wave needs t >= 0");
  CVec a, ad;
  free_wave_spectra(w, g, t, a, ad);
  return {from_spectrum(g, std::move(a), Frame::physical, t), from_spectrum(g, std::move(ad), Frame::physical, t)};
}

double wave_energy(const ScalarField& a0, const ScalarField& a0dot) {
  const double gn = l2_norm(grad(a0)), dn = l2_norm(a0dot);
  return gn * gn + dn * dn;
}

CVec b0_spectrum(const WaveState& w, double t, const GridPtr& g) {
  if (!(t >= 1.0)) throw std::domain_error("B_0 synthesis needs t >= 1");
  const int n = g->n();
  CVec s(g->size());
  const double inv = 1.0 / g->cell_volume();
  const double it = 1.0 / t;
  const auto& par = g->parity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const std::size_t id = g->flat(i, j, l);
        const double k1 = g->k(i), k2 = g->k(j), k3 = g->k(l);
        const double r = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
        const double sinc = r == 0.0 ? 1.0 : std::sin(r) / r;
        const cplx v = std::cos(r) * w.a_plus.hat(k1 * it, k2 * it, k3 * it) +
                       t * sinc * w.a_dot.hat(k1 * it, k2 * it, k3 * it);
        s[id] = it * it * v * par[id] * inv;
      }
  return s;
}

ScalarField b0_synthesize(const WaveState& w, double t, GridPtr g) {
  ScalarField b = from_spectrum(g, b0_spectrum(w, t, g), Frame::bframe, t);
  return b;
}

SplitPair b0_split(const WaveState& w, double t, double beta0, GridPtr g) {
  return split_long_short(b0_synthesize(w, t, g), t, beta0);
}

// ---- B_1 ----

B1Result b1_bilinear(const DensityFn& rho, double t, GridPtr g, const B1Options& opt) {
  const auto& q = opt.quad;
  CVec acc(g->size(), 0.0);
  const auto& ka = g->kabs();
  for (std::size_t a = 0; a < q.nu.size(); ++a) {
    const double nu = q.nu[a];
    ScalarField r = rho(nu * t);
    CVec s = to_spectrum(dilate(r, nu, opt.method));
    const double wgt = q.weight[a] * std::pow(nu, -3.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double k = ka[i];
      const double ker = k == 0.0 ? nu - 1.0 : std::sin((nu - 1.0) * k) / k;
      acc[i] += wgt * ker * s[i];
    }
  }
  dealias_spectrum(acc, *g);
  B1Result out;
  // tail: ||omega K_nu D_0(nu) rho|| <= nu^{3/2} ||rho||, integrated against nu^{-3}
  const double numax = q.nu_max;
  out.tail_bound = 2.0 / std::sqrt(numax) * l2_norm(rho(numax * t));
  out.omega_norm = sobolev_norm_spec(*g, acc, 0.5, SobolevVariant::homogeneous);
  out.b1 = real_part(from_spectrum(g, std::move(acc), Frame::bframe, t));
  if (out.omega_norm > 0.0 && out.tail_bound > opt.tail_tolerance * out.omega_norm)
    throw std::runtime_error("B_1 quadrature tail bound exceeds tolerance");
  return out;
}

std::vector<CVec> b1_spectra(const DensitySetFn& rho, double t, const GridPtr& g, const B1Options& opt,
                             std::vector<double>* tail_bounds) {
  const auto& q = opt.quad;
  const auto& ka = g->kabs();
  std::vector<CVec> acc;
  std::vector<double> ker(g->size());
  for (std::size_t a = 0; a < q.nu.size(); ++a) {
    const double nu = q.nu[a];
    const double wgt = q.weight[a] * std::pow(nu, -3.0);
    for (std::size_t i = 0; i < ker.size(); ++i)
      ker[i] = wgt * (ka[i] == 0.0 ? nu - 1.0 : std::sin((nu - 1.0) * ka[i]) / ka[i]);
    std::vector<ScalarField> rs = rho(nu * t);
    if (acc.empty()) acc.assign(rs.size(), CVec(g->size(), 0.0));
    for (std::size_t d = 0; d < rs.size(); ++d) {
      CVec s = to_spectrum(dilate(rs[d], nu, opt.method));
      for (std::size_t i = 0; i < s.size(); ++i) acc[d][i] += ker[i] * s[i];
    }
  }
  for (auto& s : acc) dealias_spectrum(s, *g);
  if (tail_bounds) {
    std::vector<ScalarField> rs = rho(q.nu_max * t);
    tail_bounds->clear();
    for (const auto& r : rs) tail_bounds->push_back(2.0 / std::sqrt(q.nu_max) * l2_norm(r));
  }
  return acc;
}

// At fixed xi = k / t0: FA(t, xi) = t^2 FB_1(t, t xi) and F(t^{-3} rho(t, ./t))(xi) = F rho(t, t xi). Staying at fixed
// xi keeps the periodic images of the b-frame box out of the time derivative.
WaveResidual duhamel_wave_residual(const DensityFn& rho, double t0, double dt, const GridPtr& g, const NuQuadrature& q) {
  if (!(dt > 0.0 && t0 - 2.0 * dt >= 1.0)) throw std::domain_error("stencil must stay in t >= 1");
  const auto& ka = g->kabs();
  std::vector<CVec> A;
  for (int j = -2; j <= 2; ++j) {
    const double t = t0 + j * dt;
    CVec acc(g->size(), 0.0);
    for (std::size_t a = 0; a < q.nu.size(); ++a) {
      const double nu = q.nu[a];
      const CVec s = scaled_spectrum(rho(nu * t), nu * t / t0);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = t * ka[i] / t0;
        acc[i] += t * t * q.weight[a] * (e == 0.0 ? nu - 1.0 : std::sin((nu - 1.0) * e) / e) * s[i];
      }
    }
    A.push_back(std::move(acc));
  }
  const CVec src = scaled_spectrum(rho(t0), 1.0);
  double n_r = 0.0, n_tt = 0.0, n_lap = 0.0, n_src = 0.0, n_fd = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double xi = ka[i] / t0;
    if (xi == 0.0) continue;
    const cplx att5 = (16.0 * (A[1][i] + A[3][i]) - (A[0][i] + A[4][i]) - 30.0 * A[2][i]) / (12.0 * dt * dt);
    const cplx att3 = (A[1][i] + A[3][i] - 2.0 * A[2][i]) / (dt * dt);
    const cplx lap = xi * xi * A[2][i];
    // one omega^{-1} smoothing
    auto sq = [xi](cplx z) { return std::norm(z / xi); };
    n_r += sq(att5 + lap - src[i]);
    n_tt += sq(att5);
    n_lap += sq(lap);
    n_src += sq(src[i]);
    n_fd += sq(att5 - att3);
  }
  WaveResidual r;
  const double scale = std::sqrt(n_tt) + std::sqrt(n_lap) + std::sqrt(n_src);
  if (scale > 0.0) {
    r.res = std::sqrt(n_r) / scale;
    r.fd = std::sqrt(n_fd) / scale;
  }
  return r;
}

void split_spectrum(const CVec& spec, const SpectralGrid& g, double t, double beta, CVec* long_part,
                    CVec* short_part) {
  const double scale = std::pow(t, -beta);
  const auto& ka = g.kabs();
  if (long_part) long_part->resize(spec.size());
  if (short_part) short_part->resize(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double c = chi(ka[i] * scale);
    if (long_part) (*long_part)[i] = c * spec[i];
    if (short_part) (*short_part)[i] = spec[i] - c * spec[i];
  }
}

B1Result b1_bilinear(const AmplitudeFn& w1, const AmplitudeFn& w2, double t, GridPtr g, const B1Options& opt) {
  DensityFn rho = [&](double tau) {
    ScalarField a = w1(tau), b = w2(tau);
    for (auto& v : a.v) v = std::conj(v);
    return real_part(product(a, b));
  };
  return b1_bilinear(rho, t, std::move(g), opt);
}

// ---- h ----

CVec h_spectrum(const WaveState& w, double t, double beta0, const GridPtr& g) {
  CVec s = b0_spectrum(w, t, g);
  const double scale = std::pow(t, -beta0);
  const auto& ka = g->kabs();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double k = ka[i];
    const double hp = 1.0 - chi(k * scale);
    s[i] = hp == 0.0 ? cplx(0.0) : 2.0 * t * hp / (k * k) * s[i];
  }
  return s;
}

ScalarField h_field(const WaveState& w, double t, double beta0, GridPtr g) {
  return real_part(from_spectrum(g, h_spectrum(w, t, beta0, g), Frame::bframe, t));
}

HDerivative h_time_derivative(const WaveState& w, double t, double beta0, GridPtr g, double rel_step,
                              double tolerance) {
  const double d = rel_step * t;
  if (!(t - 2.0 * d >= 1.0)) throw std::domain_error("h derivative stencil reaches below t = 1");
  auto stencil = [&](double dd) {
    CVec a = h_spectrum(w, t + 2 * dd, beta0, g), b = h_spectrum(w, t + dd, beta0, g);
    CVec c = h_spectrum(w, t - dd, beta0, g), e = h_spectrum(w, t - 2 * dd, beta0, g);
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (-a[i] + 8.0 * b[i] - 8.0 * c[i] + e[i]) / (12.0 * dd);
    return out;
  };
  CVec coarse = stencil(d), fine = stencil(0.5 * d);
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    diff += std::norm(fine[i] - coarse[i]);
    ref += std::norm(fine[i]);
  }
  HDerivative out;
  // error of the fine stencil is about |fine - coarse| / 15
  out.rel_error = ref > 0.0 ? std::sqrt(diff / ref) / 15.0 : 0.0;
  out.dh = real_part(from_spectrum(g, std::move(fine), Frame::bframe, t));
  if (out.rel_error > tolerance) throw std::runtime_error("finite-difference error estimate for d_t h too large");
  return out;
}

ScalarField h_time_derivative_exact(const WaveState& w, double t, double beta0, GridPtr g) {
  const int n = g->n();
  CVec s(g->size());
  const double inv = 1.0 / g->cell_volume();
  const double it = 1.0 / t, sc = std::pow(t, -beta0);
  const auto& par = g->parity();
  auto chi_prime = [](double r) {
    const double e = 1e-6;
    return (chi(r + e) - chi(r - e)) / (2 * e);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const std::size_t id = g->flat(i, j, l);
        const double k1 = g->k(i), k2 = g->k(j), k3 = g->k(l);
        const double r = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
        if (r == 0.0) continue;
        const double rho = r * sc;
        const double hp = 1.0 - chi(rho);
        const double dhp = rho > 1.0 && rho < 2.0 ? chi_prime(rho) * beta0 * rho * it : 0.0;
        const double e1 = k1 * it, e2 = k2 * it, e3 = k3 * it;
        const cplx ap = w.a_plus.hat(e1, e2, e3), ad = w.a_dot.hat(e1, e2, e3);
        auto gp = w.a_plus.grad_hat(e1, e2, e3), gd = w.a_dot.grad_hat(e1, e2, e3);
        // d/dt f(xi/t) = -(xi/t^2) . grad f
        const cplx dap = -(k1 * gp[0] + k2 * gp[1] + k3 * gp[2]) * it * it;
        const cplx dad = -(k1 * gd[0] + k2 * gd[1] + k3 * gd[2]) * it * it;
        const double c = std::cos(r), sinc = std::sin(r) / r;
        // F h = 2 t^{-1} |xi|^{-2} hp [cos ap + t sinc ad]
        const cplx core = c * ap + t * sinc * ad;
        const cplx dcore = c * dap + sinc * ad + t * sinc * dad;
        const cplx v = 2.0 / (r * r) * (-it * it * hp * core + it * dhp * core + it * hp * dcore);
        s[id] = v * par[id] * inv;
      }
  return real_part(from_spectrum(g, std::move(s), Frame::bframe, t));
}

}  // namespace ws
