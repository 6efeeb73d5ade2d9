#pragma once

#include <vector>

namespace ws {

struct Rule {
  std::vector<double> x, w;
};

/// Gauss-Legendre nodes and weights mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

/// Lagrange weights at x for the given abscissae.
std::vector<double> lagrange_weights(const std::vector<double>& xs, double x);

/// Quadrature on log(nu) in [0, log(nu_max)] for integrals over nu in [1, nu_max].
struct NuQuadrature {
  int nodes = 24;
  double nu_max = 32.0;
  std::vector<double> nu;      // node positions
  std::vector<double> weight;  // d(nu) weights including the Jacobian nu
  static NuQuadrature make(int nodes, double nu_max);
};

}  // namespace ws
