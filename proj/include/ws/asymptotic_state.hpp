#pragma once

#include <array>
#include <string>
#include <vector>

#include "ws/spectral_core.hpp"

namespace ws {

struct ScatteringParameters {
  double k = 1.25;
  double ell = 1.75;
  double mu = 0.5;
  double lambda0 = 1.45;
  double lambda = 0.15;
  double beta0 = 1.0 / 3.0;
  double beta = 1.0 / 3.0;
  double kplus = 3.5;
  double eta = 0.25;
  double delta = 0.05;
};

struct ConditionRow {
  std::string id;
  std::string expression;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct ParameterReport {
  std::vector<ConditionRow> rows;
  bool all_pass() const;
  int failures() const;
};

ParameterReport validate_parameters(const ScatteringParameters& p);

// ---- Schrodinger asymptotic data w_+ = F u_+ ----

struct GaussianTerm {
  cplx amp = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double sigma = 1.0;
};

struct SchrodingerSpec {
  std::string family = "gaussian";  // gaussian | gaussian_poly | shifted_gaussian_sum
  std::vector<GaussianTerm> terms{GaussianTerm{}};
  double poly_c1 = 0.0;  // gaussian_poly: (1 + c1 y1 + c2 |y|^2) g(y)
  double poly_c2 = 0.0;
};

struct SchrodingerState {
  SchrodingerSpec spec;
  double kplus = 3.5;
  double a_plus = 0.0;
  bool trivial = false;

  /// w_+(y) in the rescaled frame
  cplx value(double y1, double y2, double y3) const;
  /// closed-form transform  int e^{-i k.y} w_+(y) dy
  cplx transform(double k1, double k2, double k3) const;
  ScalarField sample(GridPtr g) const;
};

SchrodingerState build_schrodinger_state(const SchrodingerSpec& spec, double kplus, GridPtr g);

/// min over the unit sphere of |w_+| divided by max over the lattice
double unit_sphere_ratio(const SchrodingerState& s, GridPtr g);

// ---- wave asymptotic data (A_+, Adot_+), given on the Fourier side ----

struct WaveComponent {
  std::string profile = "zero";  // zero | gaussian | dipole_gaussian | laplacian_gaussian
  double amp = 0.0;
  double scale = 1.0;  // exp(-|xi|^2 / scale^2)

  int zero_order() const;
  cplx hat(double k1, double k2, double k3) const;
  /// d/dxi_j of hat
  std::array<cplx, 3> grad_hat(double k1, double k2, double k3) const;
  /// inverse transform in closed form
  cplx value_x(double x1, double x2, double x3) const;
};

struct WaveState {
  WaveComponent a_plus;
  WaveComponent a_dot;
  double mu = 0.5;
  bool a_dot_mean_zero = false;
  bool a_plus_mean_zero = false;
  bool a_dot_first_moment_zero = false;
  double b0 = 0.0;
  bool is_zero() const;
};

/// lattice samples of a closed-form Fourier profile as raw FFT coefficients of the x-space field
CVec closed_form_spectrum(const GridPtr& g, const std::function<cplx(double, double, double)>& hat);

WaveState build_wave_state(const WaveComponent& a_plus, const WaveComponent& a_dot, double mu, GridPtr g,
                           bool enforce_zero_orders = true);

/// free wave A_0(t) and its time derivative from closed forms (raw FFT coefficients)
void free_wave_spectra(const WaveState& w, const GridPtr& g, double t, CVec& a0, CVec& a0dot);

double measure_b0(const WaveState& w, const GridPtr& g);

struct NormRow {
  std::string id;
  double value = 0.0;
  bool finite = false;
};

struct StateValidationReport {
  std::vector<NormRow> conditions;
  std::vector<NormRow> moments;
  std::vector<NormRow> envelopes;
  bool schrodinger_ok = false;
  bool all_pass() const;
};

StateValidationReport validate_states(const SchrodingerState& s, const WaveState& w, const ScatteringParameters& p,
                                      GridPtr g);

/// radial-angular quadrature of (2 pi)^-3 int weight(|xi|) |F(xi)|^2 dxi with |xi| >= eps
double fourier_energy(const std::function<double(double, double, double)>& density2,
                      const std::function<double(double)>& weight, double eps, double rmax);

}  // namespace ws
