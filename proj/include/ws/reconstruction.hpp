#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ws/fit.hpp"
#include "ws/profile_builder.hpp"
#include "ws/solver.hpp"

namespace ws {

struct PhysicalSnapshot {
  double t = 1.0;
  ScalarField u;    // physical frame
  ScalarField A;    // physical frame, real
  ScalarField phi;  // b-frame, phi0 + phi1 + psi
  ScalarField psi;  // b-frame
};

/// grad psi against sigma on the history nodes
struct GradientCheck {
  std::vector<double> t, mismatch, budget, sigma_norm, grad_psi_norm, literal_mismatch;
  double worst_ratio = 0.0;     // max of mismatch / (1e-4 ||sigma|| + budget)
  double literal_worst = 0.0;   // max of literal mismatch / ||sigma||
  double tail_estimate = 0.0;   // size of the integrand beyond T_max, times T_max
  bool pass = false;
};

struct ResidualResult {
  double t = 0.0;
  double res1 = 0.0, res2 = 0.0;  // relative to the size of the terms
  double fd1 = 0.0, fd2 = 0.0;    // finite-difference error estimates, same scale
  bool inconclusive1 = false, inconclusive2 = false;
};

struct AsymptoticRow {
  std::string id;
  std::string comparison;  // "W" or "W1"
  std::vector<double> t, value;
  double target = 0.0;
  FitResult fit;
  double tolerance = 0.15;
  bool informative = false;
  bool vacuous = false;
  bool pass = false;
};

struct AsymptoticsReport {
  std::vector<AsymptoticRow> rows;
  double identity_max_rel = 0.0;  // two evaluation paths of the J-weighted norm
  bool identity_pass = false;
  bool all_pass() const;
};

/// Phase, physical fields and comparison norms rebuilt from a solved history.
class Reconstruction {
 public:
  Reconstruction(const ProfileBuilder& pb, std::shared_ptr<const SolutionHistory> h);

  const SolutionHistory& history() const { return *h_; }
  const ProfileBuilder& builder() const { return pb_; }

  /// psi on [T, T_max]; literal = without the B_0L and w2 terms
  ScalarField psi_at(double t, bool literal = false) const;
  ScalarField phi_profile_at(double t) const;  // phi0 + phi1
  ScalarField phi_at(double t) const;          // phi0 + phi1 + psi
  ScalarField w_at(double t) const;            // W + q

  /// u(x) = (it)^{-3/2} e^{i|x|^2/2t} e^{-i phi(x/t)} w(x/t) on the fixed lattice
  ScalarField u_at(double t) const;
  /// b-frame B0 + B1(|w|^2)
  ScalarField b_total(double t, const B1Options& opt) const;
  /// physical A = t^{-1} B(t, x/t)
  ScalarField a_at(double t) const;
  ScalarField a_at(double t, const B1Options& opt) const;
  PhysicalSnapshot snapshot(double t) const;

  GradientCheck gradient_check() const;
  ResidualResult ws_residual(double t) const;
  AsymptoticsReport asymptotics(const ScatteringParameters& p) const;

  double seconds() const { return seconds_; }

 private:
  ScalarField interp_nodes(const std::vector<std::vector<cplx>>& tab, double t) const;
  ScalarField field(const std::vector<cplx>& band, double t) const;

  const ProfileBuilder& pb_;
  std::shared_ptr<const SolutionHistory> h_;
  BandCodec codec_;
  std::vector<std::vector<cplx>> psi_, psi_lit_, psi_coarse_, b2w_, b2w1_;
  std::vector<bool> coarse_ok_;
  double tail_ = 0.0;
  double seconds_ = 0.0;
};

}  // namespace ws
