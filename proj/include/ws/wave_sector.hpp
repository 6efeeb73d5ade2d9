#pragma once

#include <functional>
#include <utility>

#include "ws/asymptotic_state.hpp"
#include "ws/quadrature.hpp"
#include "ws/spectral_core.hpp"

namespace ws {

/// radial smooth step: 1 on [0,1], 0 on [2,inf)
double chi(double rho);

struct SplitPair {
  ScalarField long_part;
  ScalarField short_part;
  double beta = 0.0;
  double t = 1.0;
  /// share of ||B||^2 sitting in the transition band t^beta < |xi| < 2 t^beta
  double band_fraction = 0.0;
};

SplitPair split_long_short(const ScalarField& B, double t, double beta);

/// A_0(t) and d_t A_0(t), physical frame
std::pair<ScalarField, ScalarField> free_wave_a0(const WaveState& w, double t, GridPtr g);
double wave_energy(const ScalarField& a0, const ScalarField& a0dot);

/// raw FFT coefficients of B_0(t) in the b-frame
CVec b0_spectrum(const WaveState& w, double t, const GridPtr& g);
ScalarField b0_synthesize(const WaveState& w, double t, GridPtr g);
/// B_0 split at scale t^beta0, straight from the closed form
SplitPair b0_split(const WaveState& w, double t, double beta0, GridPtr g);

/// real density tau -> rho(tau) in the b-frame, already dealiased
using DensityFn = std::function<ScalarField(double)>;

struct B1Result {
  ScalarField b1;
  double tail_bound = 0.0;    // bound on ||omega (tail)||_2
  double omega_norm = 0.0;    // ||omega B1||_2
};

struct B1Options {
  NuQuadrature quad = NuQuadrature::make(24, 32.0);
  DilationMethod method = DilationMethod::spline;
  /// tail_bound / omega_norm above this raises
  double tail_tolerance = 1.0;
};

B1Result b1_bilinear(const DensityFn& rho, double t, GridPtr g, const B1Options& opt = {});

/// rho(tau) = Re(conj(w1) w2)(tau)
using AmplitudeFn = std::function<ScalarField(double)>;
B1Result b1_bilinear(const AmplitudeFn& w1, const AmplitudeFn& w2, double t, GridPtr g, const B1Options& opt = {});

/// several densities through one nu loop; returns band-projected B_1 spectra (raw FFT coefficients)
using DensitySetFn = std::function<std::vector<ScalarField>(double)>;
std::vector<CVec> b1_spectra(const DensitySetFn& rho, double t, const GridPtr& g, const B1Options& opt,
                             std::vector<double>* tail_bounds = nullptr);

/// H^{-1}-strength residual of d_tt A - Delta A = t^{-3} rho(t, x/t) for A = t^{-1} B_1(t, x/t), evaluated at the
/// fixed physical wavenumbers k / t0 with a 5-point stencil of step dt; fd compares with the 3-point stencil.
/// Both are relative to the sum of the three term norms.
struct WaveResidual {
  double res = 0.0;
  double fd = 0.0;
};
WaveResidual duhamel_wave_residual(const DensityFn& rho, double t0, double dt, const GridPtr& g, const NuQuadrature& q);

/// long and short parts of a spectrum at scale t^beta
void split_spectrum(const CVec& spec, const SpectralGrid& g, double t, double beta, CVec* long_part,
                    CVec* short_part);

/// h = -2 t Delta^{-1} B_0S
CVec h_spectrum(const WaveState& w, double t, double beta0, const GridPtr& g);
ScalarField h_field(const WaveState& w, double t, double beta0, GridPtr g);

struct HDerivative {
  ScalarField dh;
  double rel_error = 0.0;
};

/// 4th-order central difference with a step-halving error estimate
HDerivative h_time_derivative(const WaveState& w, double t, double beta0, GridPtr g, double rel_step = 0.01,
                              double tolerance = 1e-4);
/// same quantity from differentiating the closed form
ScalarField h_time_derivative_exact(const WaveState& w, double t, double beta0, GridPtr g);

}  // namespace ws
