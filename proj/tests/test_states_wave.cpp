#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "ws/asymptotic_state.hpp"
#include "ws/wave_sector.hpp"

using namespace ws;

TEST_CASE("default parameters satisfy every condition") {
  ParameterReport r = validate_parameters(ScatteringParameters{});
  CHECK(r.all_pass());
  CHECK(r.failures() == 0);
  CHECK(r.rows.size() >= 12);
}

TEST_CASE("lambda0 = 1.39 breaks exactly the lower lambda0 bound") {
  ScatteringParameters p;
  p.lambda0 = 1.39;
  ParameterReport r = validate_parameters(p);
  CHECK(r.failures() == 1);
  for (const auto& row : r.rows)
    if (!row.pass) CHECK(row.id == "lambda0_lower");
}

TEST_CASE("default asymptotic state is admissible and covers the unit sphere") {
  ScatteringParameters p;
  auto g = fixture::grid16();
  auto s = build_schrodinger_state(fixture::default_spec(), p.kplus, g);
  auto w = build_wave_state({"dipole_gaussian", 0.5, 1.0}, {"laplacian_gaussian", 0.5, 1.0}, p.mu, g);
  CHECK_FALSE(s.trivial);
  CHECK_FALSE(w.is_zero());
  CHECK(validate_states(s, w, p, g).all_pass());
  CHECK(unit_sphere_ratio(s, g) > 0.1);
}

TEST_CASE("zero data give the trivial state") {
  ScatteringParameters p;
  auto g = fixture::grid16();
  SchrodingerSpec z;
  z.terms[0].amp = 0.0;
  CHECK(build_schrodinger_state(z, p.kplus, g).trivial);
  CHECK(build_wave_state({"zero", 0.0, 1.0}, {"zero", 0.0, 1.0}, p.mu, g).is_zero());
}

TEST_CASE("closed-form Gaussian transform against the lattice sum") {
  ScatteringParameters p;
  auto g = SpectralGrid::make(64, 8.0 * fixture::kPi);
  auto s = build_schrodinger_state(fixture::default_spec(), p.kplus, g);
  // int e^{-ik.y} w(y) dy by the trapezoid rule, spectrally accurate at dx = pi/8
  for (double k1 : {0.0, 0.7, 1.9}) {
    cplx acc = 0.0;
    for (int i = 0; i < g->n(); ++i)
      for (int j = 0; j < g->n(); ++j)
        for (int l = 0; l < g->n(); ++l)
          acc += std::polar(1.0, -k1 * g->x(i)) * s.value(g->x(i), g->x(j), g->x(l));
    acc *= g->cell_volume();
    CHECK(std::abs(acc - s.transform(k1, 0.0, 0.0)) < 1e-10 * std::abs(s.transform(0.0, 0.0, 0.0)));
  }
}

TEST_CASE("free wave energy is conserved") {
  ScatteringParameters p;
  auto g = fixture::grid16();
  auto w = build_wave_state({"dipole_gaussian", 0.5, 1.0}, {"laplacian_gaussian", 0.5, 1.0}, p.mu, g);
  auto [a, ad] = free_wave_a0(w, 1.0, g);
  const double e0 = wave_energy(a, ad);
  CHECK(e0 > 0.0);
  for (double t : {3.0, 10.0, 100.0}) {
    auto [b, bd] = free_wave_a0(w, t, g);
    CHECK(std::abs(wave_energy(b, bd) - e0) < 1e-10 * e0);
  }
}

TEST_CASE("cutoff chi is a smooth step") {
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(1.0) == 1.0);
  CHECK(chi(2.0) == 0.0);
  CHECK(chi(5.0) == 0.0);
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.01) {
    CHECK(chi(r) <= prev + 1e-15);
    CHECK(chi(r) >= 0.0);
    prev = chi(r);
  }
}

TEST_CASE("long and short parts add back up") {
  ScatteringParameters p;
  auto g = fixture::grid16();
  auto w = build_wave_state({"dipole_gaussian", 0.5, 1.0}, {"laplacian_gaussian", 0.5, 1.0}, p.mu, g);
  for (double t : {1.0, 8.0, 64.0}) {
    ScalarField b = b0_synthesize(w, t, g);
    SplitPair sp = split_long_short(b, t, p.beta0);
    CHECK(l2_norm(sp.long_part + sp.short_part - b) <= 1e-13 * l2_norm(b));
    SplitPair direct = b0_split(w, t, p.beta0, g);
    CHECK(l2_norm(direct.short_part - sp.short_part) <= 1e-10 * l2_norm(b));
  }
}

TEST_CASE("time derivative of h: closed form against finite differences") {
  ScatteringParameters p;
  auto g = fixture::grid16();
  auto w = build_wave_state({"dipole_gaussian", 0.5, 1.0}, {"laplacian_gaussian", 0.5, 1.0}, p.mu, g);
  for (double t : {4.0, 16.0}) {
    ScalarField ex = h_time_derivative_exact(w, t, p.beta0, g);
    HDerivative fd = h_time_derivative(w, t, p.beta0, g, 0.002, 1e300);
    CHECK(l2_norm(fd.dh - ex) <= 1e-4 * l2_norm(ex));
  }
}

TEST_CASE("Duhamel profile of a slowly widening Gaussian source solves the wave equation") {
  // rho(tau, y) = exp(-|y|^2 / 2 s^2), s = 2 (1 + 1/tau); the residual is stencil-limited once the band holds rho
  auto residual = [](int n) {
    auto g = SpectralGrid::make(n, 8.0 * fixture::kPi);
    DensityFn rho = [g](double tau) {
      const double s = 2.0 * (1.0 + 1.0 / tau);
      return ScalarField::from_function(g, [s](double x, double y, double z) {
        return cplx(std::exp(-(x * x + y * y + z * z) / (2.0 * s * s)), 0.0);
      });
    };
    return duhamel_wave_residual(rho, 8.0, 0.04, g, NuQuadrature::make(24, 32.0));
  };
  WaveResidual coarse = residual(16), fine = residual(32);
  CHECK(fine.res < 1e-5);
  CHECK(coarse.res > 100.0 * fine.res);
  CHECK(fine.fd < 1e-5);
  CHECK_THROWS(duhamel_wave_residual([](double) -> ScalarField { throw std::logic_error("unused"); }, 1.05, 0.04,
                                     fixture::grid16(), NuQuadrature::make(4, 2.0)));
}
