#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "ws/profile_builder.hpp"
#include "ws/wave_sector.hpp"

using namespace ws;

TEST_CASE("w0 is a unitary image of w_+ and converges to it") {
  const auto& pb = fixture::builder16();
  ScalarField wp = pb.schrodinger().sample(pb.grid());
  double prev = 1e300;
  for (double t : {2.0, 8.0, 32.0, 128.0}) {
    ScalarField w0 = pb.w0_at(t);
    CHECK(std::abs(l2_norm(w0) - l2_norm(dealias(wp))) < 1e-10 * l2_norm(wp));
    const double d = l2_norm(w0 - dealias(wp));
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("profile table covers the requested horizon") {
  const auto& ti = fixture::builder16().table_info();
  CHECK(ti.nodes > 0);
  CHECK(ti.horizon == doctest::Approx(8192.0));
  CHECK(ti.b1_tail_max < 1.0);
}

TEST_CASE("remainder splits into its two parts") {
  const auto& pb = fixture::builder16();
  for (double t : {4.0, 16.0}) {
    RemainderPair r = pb.remainders(t);
    CHECK(r.split_mismatch_1 < 1e-9);
    CHECK(r.split_mismatch_2 < 1e-9);
    CHECK(std::isfinite(l2_norm(r.r1)));
  }
}

TEST_CASE("remainder decays along the probe times") {
  const auto& pb = fixture::builder16();
  double prev = 1e300;
  for (double t : {4.0, 8.0, 16.0, 32.0}) {
    const double r = l2_norm(pb.remainders(t).r1);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("Laplacian of h cancels the short wave potential exactly") {
  const auto& pb = fixture::builder16();
  for (double t : {2.0, 4.0}) {
    ScalarField h = h_field(pb.wave(), t, pb.config().beta0, pb.grid());
    ScalarField b0s = b0_split(pb.wave(), t, pb.config().beta0, pb.grid()).short_part;
    CHECK(l2_norm(b0s) > 0.0);
    // compared on the dealiased band the solver works in; unpaired Nyquist modes spoil the real part
    CHECK(l2_norm(dealias(laplacian(h) + (2.0 * t) * b0s)) <= 1e-12 * l2_norm(dealias(2.0 * t * b0s)));
  }
}

TEST_CASE("w2 vanishes once the lattice band no longer reaches t^beta0") {
  const auto& pb = fixture::builder16();
  CHECK(l2_norm(pb.w2_at(2.0)) > 0.0);
  CHECK(l2_norm(pb.w2_at(64.0)) == 0.0);
}

TEST_CASE("W is the sum of its parts") {
  const auto& pb = fixture::builder16();
  ProfileSet P = pb.profiles_at(8.0);
  CHECK(l2_norm(P.W - (P.w0 + P.w1 + P.w2)) <= 1e-13 * l2_norm(P.W));
  CHECK(l2_norm(pb.W_at(8.0) - P.W) <= 1e-13 * l2_norm(P.W));
  CHECK(l2_norm(pb.W_at(8.0, false) - P.W1) <= 1e-13 * l2_norm(P.W1));
}

TEST_CASE("remainders of the zero state vanish") {
  ScatteringParameters p;
  auto g = fixture::grid16();
  SchrodingerSpec z;
  z.terms[0].amp = 0.0;
  auto s = build_schrodinger_state(z, p.kplus, g);
  auto w = build_wave_state({"zero", 0.0, 1.0}, {"zero", 0.0, 1.0}, p.mu, g);
  ProfileBuilder pb(g, s, w, p);
  RemainderPair r = pb.remainders(8.0);
  CHECK(l2_norm(r.r1) == 0.0);
  CHECK(l2_norm(r.r2) == 0.0);
}
