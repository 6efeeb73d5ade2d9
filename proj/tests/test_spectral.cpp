#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ws/spectral_core.hpp"

using namespace ws;

namespace {
ScalarField random_field(GridPtr g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ScalarField f(g);
  for (auto& z : f.v) z = {nd(rng), nd(rng)};
  return f;
}
ScalarField gaussian(GridPtr g) {
  return ScalarField::from_function(g, [](double x, double y, double z) {
    return cplx(std::exp(-0.5 * (x * x + y * y + z * z)), 0.0);
  });
}
}  // namespace

TEST_CASE("dft of a constant on the 8^3 lattice is a single raw coefficient") {
  auto g = SpectralGrid::make(8, 2.0 * fixture::kPi);
  ScalarField one = ScalarField::from_function(g, [](double, double, double) { return cplx(1.0); });
  CVec s = to_spectrum(one);
  CHECK(std::abs(s[0] - cplx(512.0)) < 1e-12);
  double rest = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) rest += std::abs(s[i]);
  CHECK(rest < 1e-11);
}

TEST_CASE("single Fourier mode lands on its index") {
  auto g = SpectralGrid::make(8, 2.0 * fixture::kPi);  // dk = 1
  ScalarField f = ScalarField::from_function(g, [](double x, double, double) { return std::polar(1.0, 2.0 * x); });
  CVec s = to_spectrum(f);
  // e^{2ix} sampled from x = -pi picks up (-1)^2 = 1
  CHECK(std::abs(s[g->flat(2, 0, 0)] - cplx(512.0)) < 1e-10);
}

TEST_CASE("round trip of a random field") {
  auto g = fixture::grid16();
  ScalarField f = random_field(g, 7);
  CHECK(l2_norm(from_spectrum(g, to_spectrum(f)) - f) / l2_norm(f) < 1e-12);
}

TEST_CASE("Gaussian L2 norm against pi^{3/4}") {
  // trapezoid error ~ exp(-pi^2 / dx^2), negligible at dx = pi/8
  auto g = SpectralGrid::make(64, 8.0 * fixture::kPi);
  CHECK(std::abs(l2_norm(gaussian(g)) - std::pow(fixture::kPi, 0.75)) < 1e-12);
}

TEST_CASE("Schrodinger group: unitary and a group") {
  auto g = fixture::grid16();
  ScalarField f = random_field(g, 11);
  const double n0 = l2_norm(f);
  for (double tau : {-10.0, -3.3, -0.5, 0.0, 0.25, 1.0, 7.0}) CHECK(std::abs(l2_norm(schrodinger_group(f, tau)) / n0 - 1.0) < 1e-12);
  CHECK(l2_norm(schrodinger_group(f, 0.0) - f) / n0 < 1e-14);
  ScalarField a = schrodinger_group(schrodinger_group(f, 0.7), 1.1);
  CHECK(l2_norm(a - schrodinger_group(f, 1.8)) / n0 < 1e-12);
  CHECK(l2_norm(schrodinger_group(schrodinger_group(f, 2.0), -2.0) - f) / n0 < 1e-12);
}

TEST_CASE("free evolution of a Gaussian matches the closed form") {
  auto g = SpectralGrid::make(64, 8.0 * fixture::kPi);
  const double tau = 1.0;
  ScalarField u = schrodinger_group(gaussian(g), tau);
  // e^{i tau Delta/2} e^{-|x|^2/2} = (1 + i tau)^{-3/2} e^{-|x|^2 / (2 (1 + i tau))}
  const cplx a = 1.0 + cplx(0.0, tau);
  ScalarField ex = ScalarField::from_function(g, [&](double x, double y, double z) {
    return std::pow(a, -1.5) * std::exp(-(x * x + y * y + z * z) / (2.0 * a));
  });
  CHECK(l2_norm(u - ex) / l2_norm(ex) < 1e-10);
}

TEST_CASE("MDFM factorisation against the multiplier form, refining") {
  double prev = 1e300;
  for (int n : {32, 64}) {
    auto g = SpectralGrid::make(n, 8.0 * fixture::kPi);
    ScalarField f = gaussian(g);
    double worst = 0.0;
    for (double t : {1.0, 2.0}) {
      ScalarField m = mdfm_apply(f, t);
      worst = std::max(worst, l2_norm(m - schrodinger_group(f, t)) / l2_norm(f));
      CHECK(std::abs(l2_norm(m) / l2_norm(f) - 1.0) < 1e-3);
    }
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev <= 1e-5);
}

TEST_CASE("MDFM rejects early times and unlocalised data") {
  auto g = fixture::grid16();
  CHECK_THROWS(mdfm_apply(gaussian(g), 0.5));
  ScalarField flat = ScalarField::from_function(g, [](double, double, double) { return cplx(1.0); });
  CHECK_THROWS(mdfm_apply(flat, 2.0));
}

TEST_CASE("dealiasing is a projection") {
  auto g = fixture::grid16();
  ScalarField f = random_field(g, 3);
  ScalarField d = dealias(f);
  CHECK(l2_norm(dealias(d) - d) < 1e-12 * l2_norm(d));
  CHECK(l2_norm(d) < l2_norm(f));
}

TEST_CASE("vector calculus identities") {
  auto g = fixture::grid16();
  ScalarField f = dealias(random_field(g, 5));
  CHECK(l2_norm(curl(grad(f))) < 1e-12 * l2_norm(grad(f)));
  CHECK(l2_norm(div(grad(f)) - laplacian(f)) < 1e-12 * l2_norm(laplacian(f)));
}

TEST_CASE("omega powers compose on mean-free data") {
  auto g = fixture::grid16();
  CVec s = to_spectrum(dealias(random_field(g, 9)));
  s[0] = 0.0;
  ScalarField f = from_spectrum(g, s);
  ScalarField back = omega_power(omega_power(f, 1.5), -1.5);
  CHECK(l2_norm(back - f) < 1e-12 * l2_norm(f));
  CHECK(std::abs(sobolev_norm(f, 1.0, SobolevVariant::homogeneous) - l2_norm(grad(f))) < 1e-12 * l2_norm(grad(f)));
}

TEST_CASE("dilation: both methods converge to the exact rescaling") {
  auto shape = [](double nu) {
    return [nu](double x, double y, double z) {
      x /= nu, y /= nu, z /= nu;
      return cplx(std::exp(-0.5 * (x * x + y * y + z * z)) * (1.0 + 0.3 * x), 0.0);
    };
  };
  double prev_spline = 1e300;
  for (int n : {16, 32}) {
    auto g = SpectralGrid::make(n, 8.0 * fixture::kPi);
    ScalarField f = ScalarField::from_function(g, shape(1.0));
    CHECK(l2_norm(dilate(f, 1.0) - f) == 0.0);
    double worst_spline = 0.0;
    for (double nu : {1.3, 2.0, 5.0}) {
      ScalarField ex = ScalarField::from_function(g, shape(nu));
      worst_spline = std::max(worst_spline, l2_norm(dilate(f, nu, DilationMethod::spline) - ex) / l2_norm(ex));
      if (n == 32) CHECK(l2_norm(dilate(f, nu, DilationMethod::spectral) - ex) / l2_norm(ex) < 1e-3);
    }
    CHECK(worst_spline < prev_spline);
    prev_spline = worst_spline;
  }
  CHECK(prev_spline < 1e-2);
}

TEST_CASE("upsampling keeps the coarse samples and the L2 norm") {
  auto g = fixture::grid16();
  auto fine = SpectralGrid::make(32, g->L());
  ScalarField f = dealias(random_field(g, 13));
  ScalarField u = upsample(f, fine);
  double worst = 0.0;
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b)
      for (int c = 0; c < 16; ++c)
        worst = std::max(worst, std::abs(u.v[fine->flat(2 * a, 2 * b, 2 * c)] - f.v[g->flat(a, b, c)]));
  CHECK(worst < 1e-12);
  CHECK(l2_norm(u) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  CHECK_THROWS(upsample(f, SpectralGrid::make(32, 2.0 * g->L())));
}

TEST_CASE("scaled spectrum: identity at s = 1 on the band, Gaussian transform elsewhere") {
  auto g = SpectralGrid::make(32, 8.0 * fixture::kPi);
  ScalarField f = dealias(random_field(g, 17));
  CVec a = scaled_spectrum(f, 1.0), b = to_spectrum(f);
  double d = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a[i] - b[i]), nb += std::norm(b[i]);
  CHECK(std::sqrt(d / nb) < 1e-12);

  // lattice sum of e^{-|x|^2/2} at wavenumber s k: (2 pi)^{3/2} e^{-s^2 |k|^2 / 2} / dx^3, times the x_0 phase
  ScalarField gs = gaussian(g);
  const double s = 1.5, x0 = g->x(0), dx3 = std::pow(g->dx(), 3);
  CVec sp = scaled_spectrum(gs, s);
  double worst = 0.0;
  int checked = 0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      for (int l = 0; l < 32; ++l) {
        const double ks[] = {g->k(i), g->k(j), g->k(l)};
        if (std::max({std::abs(ks[0]), std::abs(ks[1]), std::abs(ks[2])}) * s > (2.0 / 3.0) * fixture::kPi / g->dx()) continue;
        const double k2 = ks[0] * ks[0] + ks[1] * ks[1] + ks[2] * ks[2];
        const cplx want = std::pow(2.0 * fixture::kPi, 1.5) / dx3 * std::exp(-0.5 * s * s * k2) *
                          std::polar(1.0, (ks[0] + ks[1] + ks[2]) * x0);
        worst = std::max(worst, std::abs(sp[g->flat(i, j, l)] - want) / (std::pow(2.0 * fixture::kPi, 1.5) / dx3));
        ++checked;
      }
  CHECK(checked > 1000);
  CHECK(worst < 1e-6);  // first lattice image of the band edge 2.67 sits at 5.33, e^{-5.33^2/2} = 7e-7
}
