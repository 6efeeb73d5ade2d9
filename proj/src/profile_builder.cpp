#include "ws/profile_builder.hpp"

#include <chrono>
#include <cmath>
#include <tuple>

#include "ws/quadrature.hpp"

namespace ws {

ScalarField transport_q(const VectorField& s, const ScalarField& w) {
  ScalarField a = dot(s, grad(w));
  a += 0.5 * product(div(s), w);
  return a;
}

ScalarField real_density(const ScalarField& a, const ScalarField& b) {
  ScalarField ca = a;
  for (auto& v : ca.v) v = std::conj(v);
  return real_part(product(ca, b));
}

BandCodec::BandCodec(GridPtr g) : g_(std::move(g)) {
  const auto& m = g_->dealias_mask();
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) index_.push_back(i);
}

std::vector<cplx> BandCodec::pack(const CVec& spec) const {
  std::vector<cplx> b(index_.size());
  for (std::size_t i = 0; i < index_.size(); ++i) b[i] = spec[index_[i]];
  return b;
}

CVec BandCodec::unpack(const std::vector<cplx>& band) const {
  CVec s(g_->size(), 0.0);
  for (std::size_t i = 0; i < index_.size(); ++i) s[index_[i]] = band[i];
  return s;
}

namespace {

using Band = std::vector<cplx>;

void axpy(Band& y, cplx a, const Band& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// multiply a spectrum by exp(i c |xi|^2)
void chirp_k(CVec& s, const SpectralGrid& g, double c) {
  const auto& k2 = g.k2();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= std::polar(1.0, c * k2[i]);
}

ScalarField field(const GridPtr& g, CVec s, double t) { return from_spectrum(g, std::move(s), Frame::bframe, t); }

CVec band_spec(const ScalarField& f) {
  CVec s = to_spectrum(f);
  dealias_spectrum(s, *f.grid);
  return s;
}

ScalarField laplacian_spec_field(const GridPtr& g, CVec s, double t, cplx factor) {
  const auto& k2 = g->k2();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= -k2[i] * factor;
  return field(g, std::move(s), t);
}

double rel(double num, double den) { return den > 0.0 ? num / den : num; }

}  // namespace

ProfileBuilder::ProfileBuilder(GridPtr g, SchrodingerState s, WaveState w, ScatteringParameters p, ProfileConfig cfg)
    : g_(std::move(g)), state_(std::move(s)), wave_(std::move(w)), par_(p), cfg_(std::move(cfg)), codec_(g_) {
  wplus_ = band_spec(state_.sample(g_));
  build_table();
}

CVec ProfileBuilder::w0_spec(double t) const {
  if (!(t >= 1.0)) throw std::domain_error("profiles need t >= 1");
  CVec s = wplus_;
  chirp_k(s, *g_, 0.5 / t);  // U*(1/t)
  return s;
}

CVec ProfileBuilder::interp(const std::vector<Band>& table, double t, std::size_t limit) const {
  const double u = std::log(t) / hstep_;
  if (u > static_cast<double>(limit) + 1e-9) throw std::domain_error("time outside the profile table");
  const int sz = static_cast<int>(limit) + 1;
  int k0 = static_cast<int>(std::floor(u)) - 1;
  k0 = std::max(0, std::min(k0, sz - 4));
  std::vector<double> xs{double(k0), double(k0 + 1), double(k0 + 2), double(k0 + 3)};
  auto w = lagrange_weights(xs, u);
  Band acc(codec_.band_size(), 0.0);
  for (int a = 0; a < 4; ++a) axpy(acc, w[a], table[k0 + a]);
  return codec_.unpack(acc);
}

CVec ProfileBuilder::w1_spec(double t) const {
  if (!(t >= 1.0)) throw std::domain_error("profiles need t >= 1");
  if (std::log(t) / hstep_ >= static_cast<double>(last_)) return CVec(g_->size(), 0.0);
  CVec v = interp(v1_, t, last_);
  chirp_k(v, *g_, 0.5 / t);
  for (auto& x : v) x = -x;
  return v;
}

CVec ProfileBuilder::h_spec(double t) const {
  if (wave_.is_zero()) return CVec(g_->size(), 0.0);
  CVec s = h_spectrum(wave_, t, cfg_.beta0, g_);
  dealias_spectrum(s, *g_);
  return s;
}

ScalarField ProfileBuilder::w0_at(double t) const { return field(g_, w0_spec(t), t); }
ScalarField ProfileBuilder::w1_at(double t) const { return field(g_, w1_spec(t), t); }

ScalarField ProfileBuilder::w2_at(double t) const {
  return product(real_part(field(g_, h_spec(t), t)), w0_at(t));
}

std::pair<VectorField, ScalarField> ProfileBuilder::s0_phi0_at(double t) const {
  ScalarField phi = real_part(field(g_, interp(phi0_, t, phi0_.size() - 1), t));
  return {grad(phi), phi};
}

std::pair<VectorField, ScalarField> ProfileBuilder::s1_phi1_at(double t) const {
  ScalarField phi = real_part(field(g_, interp(phi1_, t, phi1_.size() - 1), t));
  return {grad(phi), phi};
}

ScalarField ProfileBuilder::W_at(double t, bool with_w2) const {
  CVec a = w0_spec(t), b = w1_spec(t);
  ScalarField w0 = field(g_, a, t);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  ScalarField W = field(g_, std::move(a), t);
  if (with_w2 && !wave_.is_zero()) W += product(real_part(field(g_, h_spec(t), t)), w0);
  return W;
}

ProfileSet ProfileBuilder::profiles_at(double t, bool with_w2) const {
  ProfileSet p;
  p.t = t;
  p.w0 = w0_at(t);
  p.w1 = w1_at(t);
  p.h = real_part(field(g_, h_spec(t), t));
  p.w2 = with_w2 ? product(p.h, p.w0) : ScalarField(g_, Frame::bframe, t);
  p.W1 = p.w0 + p.w1;
  p.W = p.W1 + p.w2;
  std::tie(p.s0, p.phi0) = s0_phi0_at(t);
  std::tie(p.s1, p.phi1) = s1_phi1_at(t);
  p.S = p.s0 + p.s1;
  const double winf = linf_norm(p.W), wh = sobolev_norm(p.W, 1.5);
  if (!std::isfinite(winf) || !std::isfinite(wh)) throw std::runtime_error("profile W is not finite");
  return p;
}

ScalarField ProfileBuilder::bl_w0w0(double t) const {
  auto dens = [this](double tau) { ScalarField w = w0_at(tau); return std::vector<ScalarField>{real_density(w, w)}; };
  auto b = b1_spectra(dens, t, g_, cfg_.b1);
  CVec L;
  split_spectrum(b[0], *g_, t, cfg_.beta, &L, nullptr);
  return real_part(field(g_, std::move(L), t));
}

void ProfileBuilder::build_table() {
  auto t0 = std::chrono::steady_clock::now();
  const int spo = std::max(1, cfg_.steps_per_octave);
  const int octaves = static_cast<int>(std::ceil(std::log2(std::max(2.0, cfg_.horizon)) - 1e-12));
  hstep_ = std::log(2.0) / (2.0 * spo);
  last_ = static_cast<std::size_t>(2 * spo * octaves);
  const std::size_t K = last_;
  const double h = 2.0 * hstep_;
  auto tk = [&](std::size_t k) { return std::exp(hstep_ * static_cast<double>(k)); };

  const Band zero(codec_.band_size(), 0.0);
  const bool trivial = state_.trivial;
  double tail_max = 0.0;

  auto BL = [&](const DensitySetFn& dens, double t) {
    std::vector<double> tails;
    auto b = b1_spectra(dens, t, g_, cfg_.b1, &tails);
    CVec L;
    split_spectrum(b[0], *g_, t, cfg_.beta, &L, nullptr);
    double nb = sobolev_norm_spec(*g_, b[0], 0.5, SobolevVariant::homogeneous);
    if (nb > 0.0) tail_max = std::max(tail_max, tails[0] / nb);
    return L;
  };

  // pass 1: phi0 forward from t = 1
  std::vector<Band> f(K + 1, zero);
  if (!trivial) {
    auto dens = [this](double tau) { ScalarField w = w0_at(tau); return std::vector<ScalarField>{real_density(w, w)}; };
    for (std::size_t k = 0; k <= K; ++k) {
      CVec L = BL(dens, tk(k));
      for (auto& x : L) x = -x;
      f[k] = codec_.pack(L);
    }
  }
  phi0_.assign(K + 1, zero);
  for (std::size_t j = 0; j + 2 <= K; j += 2) {
    phi0_[j + 1] = phi0_[j];
    axpy(phi0_[j + 1], h / 24.0 * 5.0, f[j]);
    axpy(phi0_[j + 1], h / 24.0 * 8.0, f[j + 1]);
    axpy(phi0_[j + 1], -h / 24.0, f[j + 2]);
    phi0_[j + 2] = phi0_[j];
    axpy(phi0_[j + 2], h / 6.0, f[j]);
    axpy(phi0_[j + 2], 4.0 * h / 6.0, f[j + 1]);
    axpy(phi0_[j + 2], h / 6.0, f[j + 2]);
  }

  auto s0_at_node = [&](std::size_t k) { return grad(real_part(field(g_, codec_.unpack(phi0_[k]), tk(k)))); };

  // pass 2: interaction-picture w1, backward from the horizon
  if (!trivial) {
    for (std::size_t k = 0; k <= K; ++k) {
      const double t = tk(k);
      CVec q = band_spec(transport_q(s0_at_node(k), w0_at(t)));
      chirp_k(q, *g_, -0.5 / t);  // U(1/t)
      for (auto& x : q) x /= t;
      f[k] = codec_.pack(q);
    }
  } else {
    std::fill(f.begin(), f.end(), zero);
  }
  auto backward = [&](std::vector<Band>& G) {
    G.assign(K + 1, zero);
    for (std::size_t j = K; j >= 2; j -= 2) {
      G[j - 1] = G[j];
      axpy(G[j - 1], -h / 24.0, f[j - 2]);
      axpy(G[j - 1], h / 24.0 * 8.0, f[j - 1]);
      axpy(G[j - 1], h / 24.0 * 5.0, f[j]);
      G[j - 2] = G[j];
      axpy(G[j - 2], h / 6.0, f[j - 2]);
      axpy(G[j - 2], 4.0 * h / 6.0, f[j - 1]);
      axpy(G[j - 2], h / 6.0, f[j]);
    }
  };
  backward(v1_);

  // pass 3: phi1 backward
  if (!trivial) {
    auto dens = [this](double tau) {
      return std::vector<ScalarField>{real_density(w0_at(tau), w1_at(tau))};
    };
    for (std::size_t k = 0; k <= K; ++k) {
      const double t = tk(k);
      VectorField s0 = s0_at_node(k);
      CVec a = band_spec(dot(s0, s0));
      CVec L = BL(dens, t);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = -a[i] / (2.0 * t) + 2.0 * L[i];
      f[k] = codec_.pack(a);
    }
  }
  backward(phi1_);

  std::size_t keep = 0;
  while (keep < K && tk(keep + 1) <= cfg_.store_phases_until * (1.0 + 1e-12)) ++keep;
  keep = std::max<std::size_t>(keep, 3);
  keep = std::min(keep, K);
  phi0_.resize(keep + 1);
  phi1_.resize(keep + 1);

  info_.nodes = static_cast<int>(K + 1);
  info_.step = hstep_;
  info_.horizon = tk(K);
  info_.b1_tail_max = tail_max;
  info_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RemainderPair ProfileBuilder::remainders(double t, const RemainderOptions& opt) const {
  const bool w2on = opt.with_w2 && !wave_.is_zero();
  const GridPtr& g = g_;
  ProfileSet P = profiles_at(t, w2on);
  RemainderPair out;
  out.t = t;

  // all B_1-type terms share one nu loop
  auto dens = [&](double tau) {
    ScalarField w0 = w0_at(tau), w1 = w1_at(tau);
    ScalarField W1 = w0 + w1;
    ScalarField w2 = w2on ? product(real_part(field(g, h_spec(tau), tau)), w0) : ScalarField(g, Frame::bframe, tau);
    ScalarField W = W1 + w2;
    std::vector<ScalarField> d;
    d.push_back(real_density(W, W));
    d.push_back(real_density(W1, W1));
    d.push_back(w2on ? real_density(W + W1, w2) : ScalarField(g, Frame::bframe, tau));
    d.push_back(real_density(w0, w0));
    d.push_back(real_density(w0, w1));
    d.push_back(real_density(w1, w1));
    return d;
  };
  std::vector<double> tails;
  // every density carries a factor of w_+
  std::vector<CVec> B = state_.trivial ? std::vector<CVec>(6, CVec(g->size()))
                                       : b1_spectra(dens, t, g, cfg_.b1, &tails);
  std::vector<ScalarField> BL(B.size()), BS(B.size());
  for (std::size_t i = 0; i < B.size(); ++i) {
    CVec L, S;
    split_spectrum(B[i], *g, t, cfg_.beta, &L, &S);
    BL[i] = real_part(field(g, std::move(L), t));
    BS[i] = real_part(field(g, std::move(S), t));
  }
  const double nb = sobolev_norm_spec(*g, B[0], 0.5, SobolevVariant::homogeneous);
  out.b1_tail = tails.empty() ? 0.0 : rel(tails[0], nb);

  ScalarField B0L(g, Frame::bframe, t), B0S(g, Frame::bframe, t);
  if (!wave_.is_zero()) {
    CVec b0 = b0_spectrum(wave_, t, g);
    dealias_spectrum(b0, *g);
    if (opt.b0_all_short) {
      B0S = real_part(field(g, std::move(b0), t));
    } else {
      CVec L, S;
      split_spectrum(b0, *g, t, cfg_.beta0, &L, &S);
      B0L = real_part(field(g, std::move(L), t));
      B0S = real_part(field(g, std::move(S), t));
    }
  }

  const double it = 1.0 / t, it2 = it * it;
  const cplx I(0.0, 1.0);
  const cplx lapc = I * (0.5 * it2);  // i (2t^2)^{-1}

  // exact time derivatives
  ScalarField dw0 = laplacian_spec_field(g, to_spectrum(P.w0), t, lapc);
  ScalarField q00 = transport_q(P.s0, P.w0);
  ScalarField dw1 = laplacian_spec_field(g, to_spectrum(P.w1), t, lapc) + it2 * q00;
  ScalarField dh(g, Frame::bframe, t);
  ScalarField dW = dw0 + dw1;
  if (w2on) {
    dh = dealias(h_time_derivative_exact(wave_, t, cfg_.beta0, g));
    if (opt.fd_check && t - 0.04 * t >= 1.0) {
      // cross-check only; the cutoff's steep derivatives make the stencil noisy
      HDerivative hd = h_time_derivative(wave_, t, cfg_.beta0, g, 0.01, 1e300);
      out.dh_rel_error = rel(l2_norm(dealias(hd.dh) - dh), l2_norm(dh));
    }
    dW += product(dh, P.w0) + product(P.h, dw0);
  }
  VectorField ds0 = cplx(-it) * grad(BL[3]);
  ScalarField pot1 = (0.5 * it2) * dot(P.s0, P.s0) - (2.0 * it) * BL[4];
  VectorField dS = ds0 + grad(pot1);

  // R1 literal
  ScalarField r1 = dW - laplacian_spec_field(g, to_spectrum(P.W), t, lapc) - it2 * transport_q(P.S, P.W) -
                   (I * it) * (product(B0S, P.W) + product(BS[0], P.W));
  // decomposition
  ScalarField r10 = cplx(-it2) * (transport_q(P.S, P.w1) + transport_q(P.s1, P.w0)) -
                    (I * it) * (product(B0S, P.w1) + product(BS[1], P.W1));
  ScalarField r1nu(g, Frame::bframe, t);
  if (w2on) {
    VectorField gh = grad(P.h), gw0 = grad(P.w0);
    r1nu = cplx(-it2) * transport_q(P.S, P.w2) - (I * it) * product(B0S, P.w2) + product(dh, P.w0) -
           (I * it2) * dot(gh, gw0) - (I * it) * (product(BS[0], P.w2) + product(BS[2], P.W1));
  } else {
    // without w2 the B_0S w_0 term is left uncancelled
    r1nu = cplx(-I * it) * product(B0S, P.w0);
  }

  // R2 literal
  VectorField r2 = dS - it2 * advect(P.S, P.S) + it * grad(B0L) + it * grad(BL[0]);
  VectorField r20 = cplx(-it2) * (advect(P.s0, P.s1) + advect(P.s1, P.s0) + advect(P.s1, P.s1)) + it * grad(BL[5]);
  VectorField r2nu = it * grad(B0L) + it * grad(BL[2]);

  out.split_mismatch_1 = rel(l2_norm(r1 - r10 - r1nu), l2_norm(r1));
  out.split_mismatch_2 = rel(l2_norm(r2 - r20 - r2nu), l2_norm(r2));

  if (opt.fd_check) {
    const double d = 0.01 * t;
    if (t - 2 * d >= 1.0) {
      ScalarField a = W_at(t + 2 * d, w2on), b = W_at(t + d, w2on), c = W_at(t - d, w2on), e = W_at(t - 2 * d, w2on);
      ScalarField fd = (1.0 / (12.0 * d)) * ((8.0 * (b - c)) - (a - e));
      out.fd_rel_diff = rel(l2_norm(fd - dW), l2_norm(dW));
    }
  }

  out.W = P.W;
  out.S = P.S;
  out.b_short = B0S + BS[0];
  out.r1 = std::move(r1);
  out.r10 = std::move(r10);
  out.r1nu = std::move(r1nu);
  out.r2 = std::move(r2);
  out.r20 = std::move(r20);
  out.r2nu = std::move(r2nu);
  return out;
}

}  // namespace ws
