#pragma once

#include <memory>
#include <vector>

#include "ws/asymptotic_state.hpp"
#include "ws/spectral_core.hpp"
#include "ws/wave_sector.hpp"

namespace ws {

/// Q(s, w) = s . grad w + (div s) w / 2, band-projected
ScalarField transport_q(const VectorField& s, const ScalarField& w);
/// Re(conj(a) b), band-projected
ScalarField real_density(const ScalarField& a, const ScalarField& b);

/// Stores band-limited spectra compactly (only the modes kept by the 2/3 rule).
class BandCodec {
 public:
  explicit BandCodec(GridPtr g);
  std::vector<cplx> pack(const CVec& spec) const;
  CVec unpack(const std::vector<cplx>& band) const;
  std::size_t band_size() const { return index_.size(); }

 private:
  GridPtr g_;
  std::vector<std::size_t> index_;
};

struct ProfileConfig {
  /// fixed upper limit replacing infinity in every profile integral
  double horizon = 8192.0;
  int steps_per_octave = 8;
  /// phases are kept for t up to this value
  double store_phases_until = 512.0;
  B1Options b1;
  double beta0 = 1.0 / 3.0;
  double beta = 1.0 / 3.0;
};

struct ProfileSet {
  double t = 1.0;
  ScalarField w0, w1, w2, W1, W;
  VectorField s0, s1, S;
  ScalarField phi0, phi1;
  ScalarField h;
};

struct TimeTableInfo {
  int nodes = 0;
  double step = 0.0;  // in log t, between stored entries
  double horizon = 0.0;
  double seconds = 0.0;
  double b1_tail_max = 0.0;  // largest recorded B_1 tail bound relative to the field
};

struct RemainderOptions {
  bool with_w2 = true;
  /// whole B_0 in the amplitude equation, nothing in the phase
  bool b0_all_short = false;
  /// compare the exact time derivative of W against finite differences of the profiles
  bool fd_check = false;
};

struct RemainderPair {
  double t = 1.0;
  ScalarField r1, r10, r1nu;
  VectorField r2, r20, r2nu;
  double split_mismatch_1 = 0.0;  // ||R1 - R10 - R1nu|| / ||R1||
  double split_mismatch_2 = 0.0;
  double fd_rel_diff = -1.0;      // filled when fd_check
  double dh_rel_error = 0.0;     // finite differences of h against the closed form (fd_check)
  double b1_tail = 0.0;
  // fields the solver reuses
  ScalarField W;
  VectorField S;
  ScalarField b_short;  // B_0S + B_S(W, W)
};

class ProfileBuilder {
 public:
  ProfileBuilder(GridPtr g, SchrodingerState s, WaveState w, ScatteringParameters p, ProfileConfig cfg = {});

  const TimeTableInfo& table_info() const { return info_; }
  GridPtr grid() const { return g_; }
  const WaveState& wave() const { return wave_; }
  const ProfileConfig& config() const { return cfg_; }
  const ScatteringParameters& params() const { return par_; }
  const SchrodingerState& schrodinger() const { return state_; }

  /// raw spectra of the individual profiles
  CVec w0_spec(double t) const;
  CVec w1_spec(double t) const;
  CVec h_spec(double t) const;

  ScalarField w0_at(double t) const;
  std::pair<VectorField, ScalarField> s0_phi0_at(double t) const;
  ScalarField w1_at(double t) const;
  std::pair<VectorField, ScalarField> s1_phi1_at(double t) const;
  ScalarField w2_at(double t) const;
  ProfileSet profiles_at(double t, bool with_w2 = true) const;
  /// W alone (cheaper than the full set)
  ScalarField W_at(double t, bool with_w2 = true) const;

  RemainderPair remainders(double t, const RemainderOptions& opt = {}) const;
  ScalarField remainder_r1(double t, const RemainderOptions& opt = {}) const { return remainders(t, opt).r1; }
  VectorField remainder_r2(double t, const RemainderOptions& opt = {}) const { return remainders(t, opt).r2; }

  /// B_L(w0, w0) at t (used by the phase integrals); exposed for tests
  ScalarField bl_w0w0(double t) const;

 private:
  void build_table();
  CVec interp(const std::vector<std::vector<cplx>>& table, double t, std::size_t limit) const;

  GridPtr g_;
  SchrodingerState state_;
  WaveState wave_;
  ScatteringParameters par_;
  ProfileConfig cfg_;
  BandCodec codec_;
  CVec wplus_;  // band-projected spectrum of w_+
  double hstep_ = 0.0;
  std::size_t last_ = 0;  // index of the horizon node
  std::vector<std::vector<cplx>> phi0_, phi1_, v1_;
  TimeTableInfo info_;
};

}  // namespace ws
