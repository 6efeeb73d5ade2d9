#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "ws/solver.hpp"

using namespace ws;

namespace {
const ProfileCache& cache16() {
  static ProfileCache c(fixture::builder16(), false);
  return c;
}
SolverConfig short_run() {
  SolverConfig c;
  c.T_max = 32.0;
  c.nodes = 8;
  return c;
}
}  // namespace

TEST_CASE("exact profiles give the zero solution") {
  ProfileCache exact(fixture::builder16(), true);
  SolverConfig c = short_run();
  c.zero_remainders = true;
  SolveResult r = integrate_backward(c, exact);
  for (int j = 0; j <= c.nodes; ++j) {
    AuxState s = r.history->state(j);
    CHECK(l2_norm(s.q) == 0.0);
    CHECK(l2_norm(s.sigma) == 0.0);
  }
}

TEST_CASE("history interpolation reproduces nodes and vanishes past T_max") {
  SolveResult r = integrate_backward(short_run(), cache16());
  const auto& h = *r.history;
  for (int j : {0, 3, 8}) {
    AuxState s = h.state(j);
    CHECK(l2_norm(h.q_at(h.time(j)) - s.q) <= 1e-12 * (l2_norm(s.q) + 1e-300));
  }
  CHECK(l2_norm(h.q_at(40.0)) == 0.0);
  CHECK(l2_norm(h.state(h.intervals()).q) == 0.0);
  CHECK_THROWS(h.q_at(0.5));
}

TEST_CASE("backward sweep only looks at later times and keeps sigma a gradient") {
  SolveResult r = integrate_backward(short_run(), cache16());
  CHECK(r.min_query_ratio >= 1.0 - 1e-12);
  CHECK(r.max_curl_ratio <= 1e-7);
  const double q0 = l2_norm(r.history->state(0).q);
  CHECK(std::isfinite(q0));
  CHECK(q0 > 0.0);
}

TEST_CASE("Picard iteration contracts, keeps sigma a gradient, and its gap to the direct sweep shrinks with the step") {
  double prev = 1e300;
  for (int nodes : {8, 16}) {
    SolverConfig c = short_run();
    c.nodes = nodes;
    SolveResult d = integrate_backward(c, cache16());
    SolveResult p = picard_solve(c, cache16());
    CHECK(p.converged);
    for (double x : p.contraction) CHECK(x < 1.0);
    CHECK(p.max_curl_ratio <= 1e-7);
    MESSAGE("picard curl " << p.max_curl_ratio);
    double gap = 0.0, size = 0.0;
    for (int j = 0; j <= c.nodes; ++j) {
      gap = std::max(gap, l2_norm(d.history->state(j).q - p.history->state(j).q));
      size = std::max(size, l2_norm(d.history->state(j).q));
    }
    MESSAGE("nodes " << nodes << ": relative gap " << gap / size);
    CHECK(gap / size < prev / 4.0);
    prev = gap / size;
  }
}

TEST_CASE("solution decays from T toward T_max") {
  SolveResult r = integrate_backward(short_run(), cache16());
  DecaySeries d = decay_series(*r.history, fixture::builder16().params());
  for (std::size_t i = 1; i + 1 < d.t.size(); ++i) CHECK(d.q_l2[i] < d.q_l2[i - 1]);
}
