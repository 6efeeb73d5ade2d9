#pragma once

#include <memory>

#include "ws/profile_builder.hpp"

namespace fixture {

inline constexpr double kPi = 3.14159265358979323846;

/// n = 16 lattice on the default box, shared so the profile table is built once per binary
inline ws::GridPtr grid16() {
  static ws::GridPtr g = ws::SpectralGrid::make(16, 8.0 * kPi);
  return g;
}

inline ws::SchrodingerSpec default_spec() {
  ws::SchrodingerSpec s;
  s.terms[0].amp = 0.5;
  return s;
}

inline const ws::ProfileBuilder& builder16() {
  static std::unique_ptr<ws::ProfileBuilder> pb = [] {
    ws::ScatteringParameters p;
    auto g = grid16();
    auto s = ws::build_schrodinger_state(default_spec(), p.kplus, g);
    auto w = ws::build_wave_state({"dipole_gaussian", 0.5, 1.0}, {"laplacian_gaussian", 0.5, 1.0}, p.mu, g);
    return std::make_unique<ws::ProfileBuilder>(g, s, w, p);
  }();
  return *pb;
}

}  // namespace fixture
