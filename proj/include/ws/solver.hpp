#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ws/fit.hpp"
#include "ws/profile_builder.hpp"

namespace ws {

struct AuxState {
  ScalarField q;
  VectorField sigma;
  double t = 1.0;
};

struct SolverConfig {
  double T = 2.0;
  double T_max = 128.0;
  int nodes = 64;
  std::string mode = "both";  // direct | picard | both
  int picard_max_iter = 12;
  double picard_tol = 1e-6;     // relative to the weighted size of the iterate
  /// replace R1, R2 by zero (profiles taken as an exact solution)
  bool zero_remainders = false;
  /// keep only the Laplacian term (integrating-factor check)
  bool free_only = false;
};

/// (v, sigma) on log-uniform nodes in [T, T_max]; q = U*(1/t) v; zero beyond T_max.
class SolutionHistory {
 public:
  SolutionHistory(GridPtr g, double T, double T_max, int intervals);

  int intervals() const { return N_; }
  double time(int j) const;
  double log_step() const { return dx_; }
  GridPtr grid() const { return g_; }

  void set(int j, const CVec& v_spec, const VectorField& sigma);
  bool filled(int j) const { return filled_[j]; }
  int lowest_filled() const { return lowest_; }
  /// true while every stored q vanishes
  bool q_is_zero() const { return q_zero_; }

  /// exact snapshot at a node
  AuxState state(int j) const;
  ScalarField q_at(double tau) const;
  VectorField sigma_at(double tau) const;
  CVec v_spec_at(double tau) const;

  double min_query() const { return min_query_; }
  void reset_access_log() const { min_query_ = 1e300; }

 private:
  std::vector<double> stencil(double tau, int& k0, int& count) const;

  GridPtr g_;
  BandCodec codec_;
  double T_, Tmax_, dx_;
  int N_;
  std::vector<std::vector<cplx>> v_;
  std::vector<std::array<std::vector<cplx>, 3>> sig_;
  std::vector<bool> filled_;
  int lowest_;
  bool q_zero_ = true;
  mutable double min_query_ = 1e300;
};

/// Profile quantities the solver needs at one time, memoised by time key.
class ProfileCache {
 public:
  ProfileCache(const ProfileBuilder& pb, bool zero_remainders);
  struct Entry {
    ScalarField W;
    VectorField S;
    ScalarField b_short;
    ScalarField r1;
    VectorField r2;
  };
  Entry at(double t) const;
  const ProfileBuilder& builder() const { return pb_; }

 private:
  const ProfileBuilder& pb_;
  BandCodec codec_;
  bool zero_r_;
  struct Packed {
    std::vector<std::vector<cplx>> f;  // W, phi-free S components, b_short, r1, r2 x3
  };
  mutable std::map<double, Packed> memo_;
};

struct RhsTerms {
  ScalarField dq;
  VectorField dsigma;
};

/// right-hand side of the difference system at time t; (q, sigma) at later times from the history
RhsTerms aux_rhs(const AuxState& st, double t, const ProfileCache& prof, const SolutionHistory& hist,
                 const SolverConfig& cfg);

struct SolveResult {
  std::shared_ptr<SolutionHistory> history;
  std::vector<double> contraction;  // Picard only
  int iterations = 0;
  bool converged = true;
  double seconds = 0.0;
  double min_query_ratio = 1.0;  // min over steps of (earliest queried time / current time)
  double max_curl_ratio = 0.0;
};

SolveResult integrate_backward(const SolverConfig& cfg, const ProfileCache& prof);
SolveResult picard_solve(const SolverConfig& cfg, const ProfileCache& prof);

struct DecaySeries {
  std::vector<double> t, q_l2, q_hk, grad_sigma_0, grad_sigma_ell, sigma_l2;
};

DecaySeries decay_series(const SolutionHistory& h, const ScatteringParameters& p);

struct DecayFit {
  std::string id;
  double slope = 0.0;
  double target = 0.0;  // pass when slope <= target + tolerance
  double tolerance = 0.15;
  double stderr_slope = 0.0;
  bool vacuous = false;
  bool pass = false;
};

std::vector<DecayFit> decay_report(const SolutionHistory& h, const ScatteringParameters& p);

}  // namespace ws
