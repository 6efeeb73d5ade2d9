#include "ws/spectral_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace ws {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

std::shared_ptr<const SpectralGrid> SpectralGrid::make(int n, double L) {
  if (!is_pow2(n) || n < 8 || n > 256) throw std::invalid_argument("grid size must be a power of two in [8, 256]");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("box length must be positive");
  return std::shared_ptr<const SpectralGrid>(new SpectralGrid(n, L));
}

SpectralGrid::SpectralGrid(int n, double L) : n_(n), L_(L), N_(static_cast<std::size_t>(n) * n * n) {
  k2_.resize(N_);
  kabs_.resize(N_);
  parity_.resize(N_);
  mask_.resize(N_);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        std::size_t f = flat(i, j, l);
        double a = k(i), b = k(j), c = k(l);
        k2_[f] = a * a + b * b + c * c;
        kabs_[f] = std::sqrt(k2_[f]);
        parity_[f] = ((mode(i) + mode(j) + mode(l)) & 1) ? -1.0 : 1.0;
        mask_[f] = (3 * std::abs(mode(i)) < n && 3 * std::abs(mode(j)) < n && 3 * std::abs(mode(l)) < n) ? 1 : 0;
      }
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto* buf = fftw_alloc_complex(N_);
  plan_fwd_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralGrid::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), p, p);
}

void SpectralGrid::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), p, p);
  const double s = 1.0 / static_cast<double>(N_);
  for (std::size_t i = 0; i < N_; ++i) data[i] *= s;
}

// ---- fields ----

ScalarField::ScalarField(GridPtr g, Frame f, double time) : grid(std::move(g)), v(grid->size()), frame(f), t(time) {}

ScalarField ScalarField::from_function(GridPtr g, const std::function<cplx(double, double, double)>& fn, Frame f,
                                       double time) {
  ScalarField out(g, f, time);
  const int n = g->n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) out.v[g->flat(i, j, l)] = fn(g->x(i), g->x(j), g->x(l));
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
  return *this;
}

ScalarField& ScalarField::operator*=(cplx a) {
  for (auto& x : v) x *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(cplx a, ScalarField b) { return b *= a; }

VectorField::VectorField(GridPtr g, Frame f, double time) {
  for (auto& x : c) x = ScalarField(g, f, time);
}
VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) c[i] += o.c[i];
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
  return *this;
}
VectorField& VectorField::operator*=(cplx a) {
  for (auto& x : c) x *= a;
  return *this;
}
VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(cplx a, VectorField b) { return b *= a; }

CVec to_spectrum(const ScalarField& f) {
  CVec s = f.v;
  f.grid->forward(s.data());
  return s;
}

ScalarField from_spectrum(GridPtr g, CVec spec, Frame f, double time) {
  g->backward(spec.data());
  ScalarField out;
  out.grid = std::move(g);
  out.v = std::move(spec);
  out.frame = f;
  out.t = time;
  return out;
}

// ---- multipliers ----

ScalarField apply_multiplier(const ScalarField& f, const MultiplierSymbol& m) {
  const auto& g = *f.grid;
  CVec s = to_spectrum(f);
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        std::size_t id = g.flat(i, j, l);
        cplx val;
        if (id == 0 && m.zero_value) {
          val = *m.zero_value;
        } else {
          val = m.symbol(g.k(i), g.k(j), g.k(l));
        }
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
          throw std::domain_error("multiplier '" + m.name + "' is not finite on the lattice" +
                                  (id == 0 ? " (no declared value at xi = 0)" : ""));
        s[id] *= val;
      }
  return from_spectrum(f.grid, std::move(s), f.frame, f.t);
}

void apply_radial(CVec& spec, const SpectralGrid& g, const std::function<cplx(double)>& m) {
  const auto& ka = g.kabs();
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= m(ka[i]);
}

ScalarField omega_power(const ScalarField& f, double s, ZeroMode zm) {
  const auto& g = *f.grid;
  CVec sp = to_spectrum(f);
  if (s < 0.0 && zm == ZeroMode::require_negligible) {
    double tot = 0.0;
    for (auto& c : sp) tot += std::norm(c);
    double l2 = std::sqrt(g.parseval() * tot);
    double mean = std::abs(sp[0]) * std::sqrt(g.parseval());
    if (mean > 1e-10 * l2) throw std::domain_error("negative power of omega on a field with non-negligible mean");
  }
  const auto& ka = g.kabs();
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (ka[i] == 0.0) {
      if (s != 0.0) sp[i] = 0.0;
      continue;
    }
    sp[i] *= std::pow(ka[i], s);
  }
  return from_spectrum(f.grid, std::move(sp), f.frame, f.t);
}

namespace {

CVec derivative_spec(const SpectralGrid& g, const CVec& s, int axis) {
  CVec d(s.size());
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        std::size_t id = g.flat(i, j, l);
        double kk = axis == 0 ? g.k(i) : (axis == 1 ? g.k(j) : g.k(l));
        d[id] = cplx(0.0, kk) * s[id];
      }
  return d;
}

}  // namespace

VectorField grad(const ScalarField& f) {
  CVec s = to_spectrum(f);
  VectorField v;
  for (int a = 0; a < 3; ++a) v.c[a] = from_spectrum(f.grid, derivative_spec(*f.grid, s, a), f.frame, f.t);
  return v;
}

ScalarField div(const VectorField& v) {
  const auto& g = *v.c[0].grid;
  CVec acc(g.size());
  for (int a = 0; a < 3; ++a) {
    CVec d = derivative_spec(g, to_spectrum(v.c[a]), a);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += d[i];
  }
  return from_spectrum(v.c[0].grid, std::move(acc), v.c[0].frame, v.c[0].t);
}

VectorField curl(const VectorField& v) {
  const auto& g = *v.c[0].grid;
  std::array<CVec, 3> s;
  for (int a = 0; a < 3; ++a) s[a] = to_spectrum(v.c[a]);
  VectorField out;
  for (int a = 0; a < 3; ++a) {
    int b = (a + 1) % 3, c = (a + 2) % 3;
    CVec d1 = derivative_spec(g, s[c], b);
    CVec d2 = derivative_spec(g, s[b], c);
    for (std::size_t i = 0; i < d1.size(); ++i) d1[i] -= d2[i];
    out.c[a] = from_spectrum(v.c[0].grid, std::move(d1), v.c[0].frame, v.c[0].t);
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  CVec s = to_spectrum(f);
  const auto& k2 = f.grid->k2();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= -k2[i];
  return from_spectrum(f.grid, std::move(s), f.frame, f.t);
}

// ---- dilation ----

namespace {

struct AxisStencil {
  std::vector<int> base;
  std::vector<std::array<double, 4>> w;
};

AxisStencil spline_stencil(int n, double nu) {
  AxisStencil st;
  st.base.resize(n);
  st.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double p = (i - 0.5 * n) / nu + 0.5 * n;
    double fl = std::floor(p);
    double f = p - fl;
    st.base[i] = static_cast<int>(fl) - 1;
    double f2 = f * f, f3 = f2 * f;
    st.w[i] = {(1 - f) * (1 - f) * (1 - f) / 6.0, (3 * f3 - 6 * f2 + 4) / 6.0, (-3 * f3 + 3 * f2 + 3 * f + 1) / 6.0,
               f3 / 6.0};
  }
  return st;
}

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

// separable evaluation of periodic spline coefficients c at dilated positions
void eval_separable(const SpectralGrid& g, const CVec& c, const AxisStencil& st, CVec& out) {
  const int n = g.n();
  CVec t1(c.size()), t2(c.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx* row = &c[g.flat(i, j, 0)];
      cplx* dst = &t1[g.flat(i, j, 0)];
      for (int l = 0; l < n; ++l) {
        const auto& w = st.w[l];
        int b = st.base[l];
        dst[l] = w[0] * row[wrap(b, n)] + w[1] * row[wrap(b + 1, n)] + w[2] * row[wrap(b + 2, n)] +
                 w[3] * row[wrap(b + 3, n)];
      }
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& w = st.w[j];
      int b = st.base[j];
      const cplx* r0 = &t1[g.flat(i, wrap(b, n), 0)];
      const cplx* r1 = &t1[g.flat(i, wrap(b + 1, n), 0)];
      const cplx* r2 = &t1[g.flat(i, wrap(b + 2, n), 0)];
      const cplx* r3 = &t1[g.flat(i, wrap(b + 3, n), 0)];
      cplx* dst = &t2[g.flat(i, j, 0)];
      for (int l = 0; l < n; ++l) dst[l] = w[0] * r0[l] + w[1] * r1[l] + w[2] * r2[l] + w[3] * r3[l];
    }
  out.resize(c.size());
  for (int i = 0; i < n; ++i) {
    const auto& w = st.w[i];
    int b = st.base[i];
    const std::size_t plane = static_cast<std::size_t>(n) * n;
    const cplx* r0 = &t2[wrap(b, n) * plane];
    const cplx* r1 = &t2[wrap(b + 1, n) * plane];
    const cplx* r2 = &t2[wrap(b + 2, n) * plane];
    const cplx* r3 = &t2[wrap(b + 3, n) * plane];
    cplx* dst = &out[i * plane];
    for (std::size_t q = 0; q < plane; ++q) dst[q] = w[0] * r0[q] + w[1] * r1[q] + w[2] * r2[q] + w[3] * r3[q];
  }
}

// dense per-axis matrix application: out[i..] = sum_j M[i][j] in[..j..] along one axis
void apply_axis(const SpectralGrid& g, const std::vector<cplx>& M, CVec& data, int axis) {
  const int n = g.n();
  CVec out(data.size());
  std::vector<cplx> line(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto idx = [&](int q) {
        return axis == 0 ? g.flat(q, a, b) : (axis == 1 ? g.flat(a, q, b) : g.flat(a, b, q));
      };
      for (int q = 0; q < n; ++q) line[q] = data[idx(q)];
      for (int i = 0; i < n; ++i) {
        cplx acc = 0.0;
        const cplx* row = &M[static_cast<std::size_t>(i) * n];
        for (int q = 0; q < n; ++q) acc += row[q] * line[q];
        out[idx(i)] = acc;
      }
    }
  data.swap(out);
}

}  // namespace

void dilate_spectrum(const SpectralGrid& g, const CVec& spec, double nu, CVec& out) {
  if (!(nu >= 1.0)) throw std::domain_error("dilation requires nu >= 1");
  if (nu == 1.0) {
    out = spec;
    g.backward(out.data());
    return;
  }
  const int n = g.n();
  CVec c = spec;
  std::vector<double> pre(n);
  for (int i = 0; i < n; ++i) pre[i] = 3.0 / (2.0 + std::cos(2.0 * M_PI * g.mode(i) / n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) c[g.flat(i, j, l)] *= pre[i] * pre[j] * pre[l];
  g.backward(c.data());
  eval_separable(g, c, spline_stencil(n, nu), out);
}

ScalarField dilate(const ScalarField& f, double nu, DilationMethod m) {
  if (!(nu >= 1.0)) throw std::domain_error("dilation requires nu >= 1");
  if (nu == 1.0) return f;
  const auto& g = *f.grid;
  ScalarField out(f.grid, f.frame, f.t);
  if (m == DilationMethod::spline) {
    dilate_spectrum(g, to_spectrum(f), nu, out.v);
    return out;
  }
  // band-limited evaluation of the trigonometric interpolant at x / nu
  const int n = g.n();
  std::vector<cplx> M(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    double y = g.x(i) / nu - g.x(0);
    for (int q = 0; q < n; ++q) {
      int m = g.mode(q);
      cplx e = (m == -n / 2) ? cplx(std::cos(g.k(q) * y), 0.0) : std::polar(1.0, g.k(q) * y);
      M[static_cast<std::size_t>(i) * n + q] = e / static_cast<double>(n);
    }
  }
  CVec s = to_spectrum(f);
  for (int a = 0; a < 3; ++a) apply_axis(g, M, s, a);
  out.v = std::move(s);
  return out;
}

CVec scaled_spectrum(const ScalarField& f, double s) {
  if (!(s > 0.0)) throw std::domain_error("scale must be positive");
  const auto& g = *f.grid;
  const int n = g.n();
  const double nyq = M_PI / g.dx();
  auto window = [](double r) {  // 1 below 2/3, 0 from 1 on
    if (r <= 2.0 / 3.0) return 1.0;
    if (r >= 1.0) return 0.0;
    const double x = 3.0 * r - 2.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return b / (a + b);
  };
  std::vector<cplx> M(static_cast<std::size_t>(n) * n);
  for (int m = 0; m < n; ++m) {
    const double k = g.k(m);
    const double w = g.mode(m) == -n / 2 ? 0.0 : window(std::abs(s * k) / nyq);
    for (int j = 0; j < n; ++j)
      M[static_cast<std::size_t>(m) * n + j] = w > 0.0 ? w * std::polar(1.0, -k * (s * g.x(j) - g.x(0))) : cplx(0.0);
  }
  CVec out = f.v;
  for (int a = 0; a < 3; ++a) apply_axis(g, M, out, a);
  return out;
}

ScalarField upsample(const ScalarField& f, const GridPtr& fine) {
  const auto& g = *f.grid;
  const int n = g.n(), N = fine->n();
  if (N < n || std::abs(fine->L() - g.L()) > 1e-12 * g.L()) throw std::invalid_argument("upsample needs a finer lattice on the same box");
  const CVec s = to_spectrum(f);
  CVec out(fine->size(), 0.0);
  const double scale = std::pow(static_cast<double>(N) / n, 3);
  auto idx = [N](int m) { return m < 0 ? m + N : m; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int ma = g.mode(a), mb = g.mode(b), mc = g.mode(c);
        if (ma == -n / 2 || mb == -n / 2 || mc == -n / 2) continue;
        out[fine->flat(idx(ma), idx(mb), idx(mc))] = scale * s[g.flat(a, b, c)];
      }
  return from_spectrum(fine, std::move(out), f.frame, f.t);
}

// ---- Schrodinger group ----

ScalarField schrodinger_group(const ScalarField& f, double tau) {
  CVec s = to_spectrum(f);
  const auto& k2 = f.grid->k2();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= std::polar(1.0, -0.5 * tau * k2[i]);
  return from_spectrum(f.grid, std::move(s), f.frame, f.t);
}

ScalarField mdfm_apply(const ScalarField& f, double t) {
  if (!(t >= 1.0)) throw std::domain_error("mdfm_apply requires t >= 1");
  const auto& g = *f.grid;
  const int n = g.n();
  double tot = 0.0, edge = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double m2 = std::norm(f.v[g.flat(i, j, l)]);
        tot += m2;
        double r = std::max({std::abs(g.x(i)), std::abs(g.x(j)), std::abs(g.x(l))});
        if (r >= 0.4 * g.L()) edge += m2;
      }
  if (tot > 0.0 && edge > 1e-8 * tot) throw std::domain_error("field is not localised inside the box");

  auto chirp = [&](const ScalarField& h) {
    ScalarField o = h;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double r2 = g.x(i) * g.x(i) + g.x(j) * g.x(j) + g.x(l) * g.x(l);
          o.v[g.flat(i, j, l)] *= std::polar(1.0, r2 / (2.0 * t));
        }
    return o;
  };
  ScalarField gm = chirp(f);
  // unitary Fourier transform evaluated at xi = x / t, separable per axis
  std::vector<cplx> M(static_cast<std::size_t>(n) * n);
  const double c1 = g.dx() / std::sqrt(2.0 * M_PI);
  // band-limited: the sampled transform is periodic in xi, keep |xi| below the Nyquist frequency only
  const double nyq = M_PI / g.dx();
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < n; ++q)
      M[static_cast<std::size_t>(i) * n + q] =
          std::abs(g.x(i) / t) < nyq ? c1 * std::polar(1.0, -g.x(i) / t * g.x(q)) : cplx(0.0);
  CVec s = gm.v;
  for (int a = 0; a < 3; ++a) apply_axis(g, M, s, a);
  ScalarField out(f.grid, f.frame, f.t);
  const cplx pref = std::pow(t, -1.5) * std::polar(1.0, -0.75 * M_PI);  // (i t)^{-3/2}
  for (std::size_t i = 0; i < s.size(); ++i) out.v[i] = pref * s[i];
  return chirp(out);
}

// ---- norms ----

double sobolev_norm_spec(const SpectralGrid& g, const CVec& s, double k, SobolevVariant v) {
  const auto& k2 = g.k2();
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double w;
    if (v == SobolevVariant::inhomogeneous) {
      w = std::pow(1.0 + k2[i], k);
    } else {
      if (k2[i] == 0.0) continue;
      w = std::pow(k2[i], k);
    }
    acc += w * std::norm(s[i]);
  }
  return std::sqrt(g.parseval() * acc);
}

double sobolev_norm(const ScalarField& f, double k, SobolevVariant v) {
  return sobolev_norm_spec(*f.grid, to_spectrum(f), k, v);
}

double lr_norm(const ScalarField& f, double r) {
  if (!(r >= 1.0)) throw std::domain_error("Lebesgue exponent must be >= 1");
  if (std::isinf(r)) return linf_norm(f);
  double acc = 0.0;
  for (const auto& x : f.v) acc += std::pow(std::abs(x), r);
  return std::pow(acc * f.grid->cell_volume(), 1.0 / r);
}

double l2_norm(const ScalarField& f) {
  double acc = 0.0;
  for (const auto& x : f.v) acc += std::norm(x);
  return std::sqrt(acc * f.grid->cell_volume());
}

double linf_norm(const ScalarField& f) {
  double m = 0.0;
  for (const auto& x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double l2_norm(const VectorField& v) {
  double a = 0.0;
  for (const auto& c : v.c) {
    double n = l2_norm(c);
    a += n * n;
  }
  return std::sqrt(a);
}

double galilei_norm(const ScalarField& g, double k) { return sobolev_norm(g, k, SobolevVariant::inhomogeneous); }

// ---- products ----

void dealias_spectrum(CVec& spec, const SpectralGrid& g) {
  const auto& m = g.dealias_mask();
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (!m[i]) spec[i] = 0.0;
}

ScalarField dealias(const ScalarField& f) {
  CVec s = to_spectrum(f);
  dealias_spectrum(s, *f.grid);
  return from_spectrum(f.grid, std::move(s), f.frame, f.t);
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField p(a.grid, a.frame, a.t);
  for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] = a.v[i] * b.v[i];
  return dealias(p);
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  ScalarField p(a.c[0].grid, a.c[0].frame, a.c[0].t);
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] += a.c[k].v[i] * b.c[k].v[i];
  return dealias(p);
}

VectorField advect(const VectorField& a, const VectorField& b) {
  VectorField out;
  for (int k = 0; k < 3; ++k) {
    VectorField gb = grad(b.c[k]);
    ScalarField p(a.c[0].grid, a.c[0].frame, a.c[0].t);
    for (int j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] += a.c[j].v[i] * gb.c[j].v[i];
    out.c[k] = dealias(p);
  }
  return out;
}

double imag_ratio(const ScalarField& f) {
  double mi = 0.0, ma = 0.0;
  for (const auto& x : f.v) {
    mi = std::max(mi, std::abs(x.imag()));
    ma = std::max(ma, std::abs(x));
  }
  return ma > 0.0 ? mi / ma : 0.0;
}

ScalarField real_part(const ScalarField& f) {
  ScalarField o = f;
  for (auto& x : o.v) x = x.real();
  return o;
}

}  // namespace ws
