#include "ws/asymptotic_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ws/quadrature.hpp"

namespace ws {

namespace {

constexpr double kPi = 3.14159265358979323846;

ConditionRow row(std::string id, std::string expr, double lhs, double rhs, bool pass) {
  return ConditionRow{std::move(id), std::move(expr), lhs, rhs, pass};
}

// points on the unit sphere (golden spiral)
std::vector<std::array<double, 3>> sphere_points(int count) {
  std::vector<std::array<double, 3>> pts;
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts.push_back({r * std::cos(ga * i), r * std::sin(ga * i), z});
  }
  return pts;
}

}  // namespace

bool ParameterReport::all_pass() const { return failures() == 0; }

int ParameterReport::failures() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ConditionRow& r) { return !r.pass; }));
}

ParameterReport validate_parameters(const ScatteringParameters& p) {
  ParameterReport r;
  auto& v = r.rows;
  v.push_back(row("k_window", "1 < k < 3/2", p.k, 1.5, p.k > 1.0 && p.k < 1.5));
  v.push_back(row("ell_above_k_window", "3/2 < l", p.ell, 1.5, p.ell > 1.5));
  v.push_back(row("mu_window", "-1/4 < mu <= 1/2", p.mu, 0.5, p.mu > -0.25 && p.mu <= 0.5));
  v.push_back(row("lambda_positive", "lambda > 0", p.lambda, 0.0, p.lambda > 0.0));
  v.push_back(row("lambda0_lower", "lambda + k < lambda0", p.lambda + p.k, p.lambda0, p.lambda + p.k < p.lambda0));
  const double up = 7.0 / 6.0 + 2.0 * p.mu / 3.0;
  v.push_back(row("lambda0_upper", "lambda0 < 7/6 + 2 mu/3", p.lambda0, up, p.lambda0 < up));
  v.push_back(row("beta_order", "0 < beta0 <= beta < 2/3", p.beta0, p.beta,
                  p.beta0 > 0.0 && p.beta0 <= p.beta && p.beta < 2.0 / 3.0));
  v.push_back(row("beta_regularity", "beta (l + 1) < lambda0", p.beta * (p.ell + 1.0), p.lambda0,
                  p.beta * (p.ell + 1.0) < p.lambda0));
  v.push_back(row("beta0_low_frequency", "beta0 (1/2 - mu) > lambda0 - 1 - mu", p.beta0 * (0.5 - p.mu),
                  p.lambda0 - 1.0 - p.mu, p.beta0 * (0.5 - p.mu) > p.lambda0 - 1.0 - p.mu));
  v.push_back(row("beta0_high_frequency", "beta0 (mu + 5/2) < 2 + mu - lambda0", p.beta0 * (p.mu + 2.5),
                  2.0 + p.mu - p.lambda0, p.beta0 * (p.mu + 2.5) < 2.0 + p.mu - p.lambda0));
  v.push_back(row("kplus_order", "k+ >= k + 2", p.kplus, p.k + 2.0, p.kplus >= p.k + 2.0));
  v.push_back(row("kplus_beta_lower", "beta (k+ + 1) >= lambda0", p.beta * (p.kplus + 1.0), p.lambda0,
                  p.beta * (p.kplus + 1.0) >= p.lambda0));
  v.push_back(row("kplus_beta_upper", "beta (l + 3 - k+) < 1", p.beta * (p.ell + 3.0 - p.kplus), 1.0,
                  p.beta * (p.ell + 3.0 - p.kplus) < 1.0));
  v.push_back(row("eta_window", "0 < eta < 1 - 3 beta/2", p.eta, 1.0 - 1.5 * p.beta,
                  p.eta > 0.0 && p.eta < 1.0 - 1.5 * p.beta));
  return r;
}

// ---------------- Schrodinger side ----------------

cplx SchrodingerState::value(double y1, double y2, double y3) const {
  cplx acc = 0.0;
  for (const auto& t : spec.terms) {
    double d1 = y1 - t.center[0], d2 = y2 - t.center[1], d3 = y3 - t.center[2];
    acc += t.amp * std::exp(-(d1 * d1 + d2 * d2 + d3 * d3) / (2.0 * t.sigma * t.sigma));
  }
  if (spec.family == "gaussian_poly") acc *= 1.0 + spec.poly_c1 * y1 + spec.poly_c2 * (y1 * y1 + y2 * y2 + y3 * y3);
  return acc;
}

cplx SchrodingerState::transform(double k1, double k2, double k3) const {
  const double kk = k1 * k1 + k2 * k2 + k3 * k3;
  cplx acc = 0.0;
  for (const auto& t : spec.terms) {
    const double s2 = t.sigma * t.sigma;
    cplx g = t.amp * std::pow(2.0 * kPi * s2, 1.5) * std::exp(-0.5 * s2 * kk);
    g *= std::polar(1.0, -(k1 * t.center[0] + k2 * t.center[1] + k3 * t.center[2]));
    if (spec.family == "gaussian_poly") {
      // y1 g -> -i s^2 k1 g ; |y|^2 g -> (3 s^2 - s^4 |k|^2) g   (centred terms only)
      g *= 1.0 + spec.poly_c1 * cplx(0.0, -s2 * k1) + spec.poly_c2 * (3.0 * s2 - s2 * s2 * kk);
    }
    acc += g;
  }
  return acc;
}

ScalarField SchrodingerState::sample(GridPtr g) const {
  return ScalarField::from_function(std::move(g), [this](double a, double b, double c) { return value(a, b, c); });
}

SchrodingerState build_schrodinger_state(const SchrodingerSpec& spec, double kplus, GridPtr g) {
  if (spec.family != "gaussian" && spec.family != "gaussian_poly" && spec.family != "shifted_gaussian_sum")
    throw std::invalid_argument("unknown Schrodinger family '" + spec.family + "'");
  if (spec.terms.empty()) throw std::invalid_argument("Schrodinger family needs at least one Gaussian term");
  if (spec.family != "shifted_gaussian_sum" && spec.terms.size() != 1)
    throw std::invalid_argument("family '" + spec.family + "' takes exactly one term");
  for (const auto& t : spec.terms)
    if (!(t.sigma > 0.0)) throw std::invalid_argument("Gaussian width must be positive");
  if (spec.family == "gaussian_poly")
    for (double c : spec.terms[0].center)
      if (c != 0.0) throw std::invalid_argument("gaussian_poly is centred at the origin");

  SchrodingerState s;
  s.spec = spec;
  s.kplus = kplus;
  s.a_plus = sobolev_norm(s.sample(g), kplus);
  if (!std::isfinite(s.a_plus)) throw std::domain_error("a_+ is not finite");
  s.trivial = s.a_plus == 0.0;
  return s;
}

double unit_sphere_ratio(const SchrodingerState& s, GridPtr g) {
  double mx = linf_norm(s.sample(g));
  if (mx == 0.0) return 0.0;
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& p : sphere_points(400)) mn = std::min(mn, std::abs(s.value(p[0], p[1], p[2])));
  return mn / mx;
}

// ---------------- wave side ----------------

int WaveComponent::zero_order() const {
  if (profile == "zero" || amp == 0.0) return 1000;
  if (profile == "gaussian") return 0;
  if (profile == "dipole_gaussian") return 1;
  if (profile == "laplacian_gaussian") return 2;
  throw std::invalid_argument("unknown wave profile '" + profile + "'");
}

cplx WaveComponent::hat(double k1, double k2, double k3) const {
  if (profile == "zero" || amp == 0.0) return 0.0;
  const double kk = k1 * k1 + k2 * k2 + k3 * k3;
  const double e = amp * std::exp(-kk / (scale * scale));
  if (profile == "gaussian") return e;
  if (profile == "dipole_gaussian") return cplx(0.0, k1 * e);  // i xi_1 e: real in x-space
  if (profile == "laplacian_gaussian") return kk * e;
  throw std::invalid_argument("unknown wave profile '" + profile + "'");
}

std::array<cplx, 3> WaveComponent::grad_hat(double k1, double k2, double k3) const {
  std::array<cplx, 3> out{0.0, 0.0, 0.0};
  if (profile == "zero" || amp == 0.0) return out;
  const double kk = k1 * k1 + k2 * k2 + k3 * k3;
  const double s2 = scale * scale;
  const double e = amp * std::exp(-kk / s2);
  const double k[3] = {k1, k2, k3};
  for (int j = 0; j < 3; ++j) {
    if (profile == "gaussian") {
      out[j] = -2.0 * k[j] / s2 * e;
    } else if (profile == "dipole_gaussian") {
      out[j] = cplx(0.0, ((j == 0 ? 1.0 : 0.0) - 2.0 * k1 * k[j] / s2) * e);
    } else if (profile == "laplacian_gaussian") {
      out[j] = (2.0 * k[j] - 2.0 * kk * k[j] / s2) * e;
    } else {
      throw std::invalid_argument("unknown wave profile '" + profile + "'");
    }
  }
  return out;
}

cplx WaveComponent::value_x(double x1, double x2, double x3) const {
  if (profile == "zero" || amp == 0.0) return 0.0;
  // exp(-|xi|^2/s^2)  <->  (s^2/4pi)^{3/2} exp(-a|x|^2), a = s^2/4
  const double a = 0.25 * scale * scale;
  const double rr = x1 * x1 + x2 * x2 + x3 * x3;
  const double g = amp * std::pow(a / kPi, 1.5) * std::exp(-a * rr);
  if (profile == "gaussian") return g;
  if (profile == "dipole_gaussian") return -2.0 * a * x1 * g;            // d_1 g
  if (profile == "laplacian_gaussian") return (6.0 * a - 4.0 * a * a * rr) * g;  // -Laplacian g
  throw std::invalid_argument("unknown wave profile '" + profile + "'");
}

bool WaveState::is_zero() const { return a_plus.zero_order() >= 1000 && a_dot.zero_order() >= 1000; }

CVec closed_form_spectrum(const GridPtr& g, const std::function<cplx(double, double, double)>& hat) {
  const int n = g->n();
  CVec s(g->size());
  const double inv = 1.0 / g->cell_volume();
  const auto& par = g->parity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        std::size_t id = g->flat(i, j, l);
        s[id] = hat(g->k(i), g->k(j), g->k(l)) * par[id] * inv;
      }
  return s;
}

void free_wave_spectra(const WaveState& w, const GridPtr& g, double t, CVec& a0, CVec& a0dot) {
  const int n = g->n();
  a0.assign(g->size(), 0.0);
  a0dot.assign(g->size(), 0.0);
  const double inv = 1.0 / g->cell_volume();
  const auto& par = g->parity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        std::size_t id = g->flat(i, j, l);
        const double k1 = g->k(i), k2 = g->k(j), k3 = g->k(l);
        const double r = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
        const cplx ap = w.a_plus.hat(k1, k2, k3), ad = w.a_dot.hat(k1, k2, k3);
        const double c = std::cos(r * t), sn = std::sin(r * t);
        const double sinc = r == 0.0 ? t : sn / r;
        a0[id] = (c * ap + sinc * ad) * par[id] * inv;
        a0dot[id] = (-r * sn * ap + c * ad) * par[id] * inv;
      }
}

double measure_b0(const WaveState& w, const GridPtr& g) {
  if (w.is_zero()) return 0.0;
  double b0 = 0.0;
  CVec a0, a0d;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    if (t > 0.25 * g->L()) break;
    free_wave_spectra(w, g, t, a0, a0d);
    for (int m = 0; m < 2; ++m) {
      CVec s = a0;
      if (m == 1) apply_radial(s, *g, [](double r) { return cplx(r); });
      ScalarField f = from_spectrum(g, std::move(s));
      for (double r : {2.0, 4.0, std::numeric_limits<double>::infinity()}) {
        double e = std::isinf(r) ? 1.0 : 1.0 - 2.0 / r;
        b0 = std::max(b0, std::pow(t, e) * lr_norm(f, r));
      }
    }
  }
  return b0;
}

WaveState build_wave_state(const WaveComponent& a_plus, const WaveComponent& a_dot, double mu, GridPtr g,
                           bool enforce_zero_orders) {
  if (!(mu > -1.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (-1, 1)");
  const int zp = a_plus.zero_order(), zd = a_dot.zero_order();
  if (enforce_zero_orders) {
    if (zd < 2) throw std::invalid_argument("Adot_+ profile must vanish to second order at xi = 0");
    if (mu >= 0.0 && zp < 1) throw std::invalid_argument("A_+ profile must vanish at xi = 0 when mu >= 0");
  }
  WaveState w;
  w.a_plus = a_plus;
  w.a_dot = a_dot;
  w.mu = mu;
  w.a_dot_mean_zero = zd >= 1;
  w.a_plus_mean_zero = zp >= 1;
  w.a_dot_first_moment_zero = zd >= 2;
  w.b0 = measure_b0(w, g);
  return w;
}

// ---------------- validation ----------------

double fourier_energy(const std::function<double(double, double, double)>& density2,
                      const std::function<double(double)>& weight, double eps, double rmax) {
  static const Rule seg = gauss_legendre(8, 0.0, 1.0);
  static const Rule ct = gauss_legendre(12, -1.0, 1.0);
  const int nphi = 24;
  auto shell = [&](double r) {
    double acc = 0.0;
    for (std::size_t a = 0; a < ct.x.size(); ++a) {
      const double c = ct.x[a], s = std::sqrt(1.0 - c * c);
      for (int b = 0; b < nphi; ++b) {
        const double ph = 2.0 * kPi * b / nphi;
        acc += ct.w[a] * density2(r * s * std::cos(ph), r * s * std::sin(ph), r * c);
      }
    }
    return acc * 2.0 * kPi / nphi;
  };
  double total = 0.0;
  // log-spaced decades on [eps, 1]
  if (eps < 1.0) {
    double lo = std::log(eps);
    int dec = std::max(1, static_cast<int>(std::ceil(-lo / std::log(10.0))));
    double h = -lo / dec;
    for (int d = 0; d < dec; ++d)
      for (std::size_t q = 0; q < seg.x.size(); ++q) {
        double r = std::exp(lo + h * (d + seg.x[q]));
        total += seg.w[q] * h * r * r * r * weight(r) * shell(r);
      }
  }
  const double start = std::max(1.0, eps);
  const int pieces = std::max(1, static_cast<int>(std::ceil(rmax - start)));
  const double h = (rmax - start) / pieces;
  for (int d = 0; d < pieces; ++d)
    for (std::size_t q = 0; q < seg.x.size(); ++q) {
      double r = start + h * (d + seg.x[q]);
      total += seg.w[q] * h * r * r * weight(r) * shell(r);
    }
  return total / std::pow(2.0 * kPi, 3);
}

bool StateValidationReport::all_pass() const {
  if (!schrodinger_ok) return false;
  for (const auto& r : conditions)
    if (!r.finite) return false;
  for (const auto& r : moments)
    if (!r.finite) return false;
  return true;
}

namespace {

// finiteness under xi-refinement of the small-frequency cutoff
NormRow refined_row(std::string id, const std::function<double(double, double, double)>& d2,
                    const std::function<double(double)>& w, double rmax) {
  double prev = 0.0, cur = 0.0;
  bool ok = true;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    prev = cur;
    cur = fourier_energy(d2, w, eps, rmax);
    if (!std::isfinite(cur)) ok = false;
  }
  ok = ok && std::abs(cur - prev) <= 1e-3 * std::abs(cur) + 1e-300;
  return NormRow{std::move(id), std::sqrt(std::max(cur, 0.0)), ok};
}

NormRow lattice_row(std::string id, double value) { return NormRow{std::move(id), value, std::isfinite(value)}; }

double x_weighted_l1(const GridPtr& g, const WaveComponent& c, double power) {
  double acc = 0.0;
  const int n = g->n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double x1 = g->x(i), x2 = g->x(j), x3 = g->x(l);
        double jap = std::sqrt(1.0 + x1 * x1 + x2 * x2 + x3 * x3);
        acc += std::pow(jap, power) * std::abs(c.value_x(x1, x2, x3));
      }
  return acc * g->cell_volume();
}

// ( int |x f|^p )^{1/p}
double x_times_lp(const GridPtr& g, const WaveComponent& c, double p) {
  double acc = 0.0;
  const int n = g->n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double x1 = g->x(i), x2 = g->x(j), x3 = g->x(l);
        double v = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3) * std::abs(c.value_x(x1, x2, x3));
        acc += std::pow(v, p);
      }
  return std::pow(acc * g->cell_volume(), 1.0 / p);
}

double plain_lp(const GridPtr& g, const WaveComponent& c, double p) {
  return lr_norm(ScalarField::from_function(g, [&](double a, double b, double d) { return c.value_x(a, b, d); }), p);
}

// lattice moment int f dx and |int x f dx|, relative to int |f|
std::pair<double, double> lattice_moments(const GridPtr& g, const WaveComponent& c) {
  cplx m0 = 0.0;
  std::array<cplx, 3> m1{0.0, 0.0, 0.0};
  double mass = 0.0;
  const int n = g->n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double x[3] = {g->x(i), g->x(j), g->x(l)};
        cplx v = c.value_x(x[0], x[1], x[2]);
        m0 += v;
        for (int a = 0; a < 3; ++a) m1[a] += x[a] * v;
        mass += std::abs(v);
      }
  if (mass == 0.0) return {0.0, 0.0};
  double n1 = std::sqrt(std::norm(m1[0]) + std::norm(m1[1]) + std::norm(m1[2]));
  return {std::abs(m0) / mass, n1 / mass};
}

// sum_{i<=j} || <omega>^k d_i d_j f ||_1  or  sum_j || <omega>^k d_j f ||_1
double h1k_norm(const GridPtr& g, const WaveComponent& c, double k, bool second) {
  double acc = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = second ? a : 0; b < (second ? 3 : 1); ++b) {
      CVec s = closed_form_spectrum(g, [&](double k1, double k2, double k3) {
        double kv[3] = {k1, k2, k3};
        double jap = std::pow(1.0 + k1 * k1 + k2 * k2 + k3 * k3, 0.5 * k);
        cplx sym = second ? cplx(-kv[a] * kv[b]) : cplx(0.0, kv[a]);
        return jap * sym * c.hat(k1, k2, k3);
      });
      acc += lr_norm(from_spectrum(g, std::move(s)), 1.0);
    }
  return acc;
}

}  // namespace

StateValidationReport validate_states(const SchrodingerState& s, const WaveState& w, const ScatteringParameters& p,
                                      GridPtr g) {
  StateValidationReport rep;
  rep.schrodinger_ok = std::isfinite(s.a_plus);
  const double k = p.k, mu = w.mu;
  const auto& A = w.a_plus;
  const auto& D = w.a_dot;
  const double rmax = 12.0 * std::max(A.scale, D.scale);

  auto sq = [](const WaveComponent& c) {
    return [&c](double a, double b, double d) { return std::norm(c.hat(a, b, d)); };
  };
  auto gsq = [](const WaveComponent& c) {
    return [&c](double a, double b, double d) {
      auto gr = c.grad_hat(a, b, d);
      return std::norm(gr[0]) + std::norm(gr[1]) + std::norm(gr[2]);
    };
  };
  auto jap = [](double s) { return [s](double r) { return std::pow(1.0 + r * r, s); }; };
  auto hom = [](double s) { return [s](double r) { return std::pow(r, 2.0 * s); }; };

  auto& c = rep.conditions;
  // regularity of the asymptotic wave data
  c.push_back(refined_row("A_plus_in_Hk", sq(A), jap(k), rmax));
  c.push_back(refined_row("omega_inv_A_dot_in_Hk", sq(D),
                          [k](double r) { return std::pow(1.0 + r * r, k) / (r * r); }, rmax));
  c.push_back(lattice_row("hessian_A_plus_in_H1k", h1k_norm(g, A, k, true)));
  c.push_back(lattice_row("grad_A_dot_in_H1k", h1k_norm(g, D, k, false)));
  // plain integrability
  c.push_back(refined_row("A_plus_in_H_k_minus_1", sq(A), jap(k - 1.0), rmax));
  c.push_back(refined_row("A_dot_in_L2", sq(D), jap(0.0), rmax));
  c.push_back(refined_row("x_A_plus_in_H_k_minus_1", gsq(A), jap(k - 1.0), rmax));
  c.push_back(lattice_row("x_A_dot_in_L3/2", x_times_lp(g, D, 1.5)));
  // low-frequency conditions
  c.push_back(refined_row("x_A_plus_in_Hdot_-1/2-mu", gsq(A), hom(-0.5 - mu), rmax));
  c.push_back(refined_row("A_plus_in_Hdot_-3/2-mu", sq(A), hom(-1.5 - mu), rmax));
  c.push_back(refined_row("x_A_dot_in_Hdot_-3/2-mu", gsq(D), hom(-1.5 - mu), rmax));
  c.push_back(refined_row("A_dot_in_Hdot_-5/2-mu", sq(D), hom(-2.5 - mu), rmax));

  // moments: pass on the closed-form zero at xi = 0; lattice value is reported
  auto& m = rep.moments;
  auto closed_zero = [](cplx v) { return std::abs(v) <= 1e-14; };
  auto [d0, d1] = lattice_moments(g, D);
  auto [a0, a1] = lattice_moments(g, A);
  m.push_back(lattice_row("x_A_plus_in_Lp", x_times_lp(g, A, std::max(3.0 / (2.0 + mu), 2.0))));
  m.push_back(NormRow{"A_dot_mean_zero", d0, closed_zero(D.hat(0, 0, 0))});
  m.push_back(lattice_row("weighted_A_dot_in_L1", x_weighted_l1(g, D, 1.0 + mu + p.delta)));
  if (mu >= 0.0) {
    m.push_back(NormRow{"A_plus_mean_zero", a0, closed_zero(A.hat(0, 0, 0))});
    auto gr = D.grad_hat(0, 0, 0);
    m.push_back(NormRow{"x_A_dot_moment_zero", d1, closed_zero(gr[0]) && closed_zero(gr[1]) && closed_zero(gr[2])});
    m.push_back(lattice_row("weighted_A_plus_in_L1", x_weighted_l1(g, A, mu + p.delta)));
  } else {
    const double q = 3.0 / (3.0 + mu);
    m.push_back(lattice_row("A_plus_in_L3/(3+mu)", plain_lp(g, A, q)));
    m.push_back(lattice_row("x_A_dot_in_L3/(3+mu)", x_times_lp(g, D, q)));
  }

  // small-frequency envelopes sup_{|xi|<=1} |xi|^{-nu} |f(xi)|
  const auto dirs = sphere_points(64);
  auto envelope = [&](const std::string& id, const std::function<double(double, double, double)>& mag, double nu) {
    double coarse = 0.0, fine = 0.0;
    for (int e = 0; e <= 60; ++e) {
      double r = std::pow(10.0, -6.0 + 0.1 * e);
      double best = 0.0;
      for (const auto& d : dirs) best = std::max(best, mag(r * d[0], r * d[1], r * d[2]));
      double v = std::pow(r, -nu) * best;
      fine = std::max(fine, v);
      if (r >= 1e-4) coarse = std::max(coarse, v);
    }
    bool ok = std::isfinite(fine) && fine <= 1.5 * coarse + 1e-300;
    rep.envelopes.push_back(NormRow{id + "_nu=" + std::to_string(nu).substr(0, 5), fine, ok});
  };
  auto mag = [](const WaveComponent& cc) {
    return [&cc](double a, double b, double d) { return std::abs(cc.hat(a, b, d)); };
  };
  auto gmag = [](const WaveComponent& cc) {
    return [&cc](double a, double b, double d) {
      auto gr = cc.grad_hat(a, b, d);
      return std::sqrt(std::norm(gr[0]) + std::norm(gr[1]) + std::norm(gr[2]));
    };
  };
  for (double nu : {mu - 1.0, mu, mu + 1.0}) {
    envelope("A_plus", mag(A), nu);
    envelope("A_dot", mag(D), nu);
    envelope("x_A_plus", gmag(A), nu);
    envelope("x_A_dot", gmag(D), nu);
  }
  return rep;
}

}  // namespace ws
