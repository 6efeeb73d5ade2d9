#include "ws/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ws {

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[n - 1 - i] = 0.5 * (a + b) + 0.5 * (b - a) * z;
    r.w[n - 1 - i] = (b - a) / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

std::vector<double> lagrange_weights(const std::vector<double>& xs, double x) {
  std::vector<double> w(xs.size(), 1.0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (i != j) w[i] *= (x - xs[j]) / (xs[i] - xs[j]);
  return w;
}

NuQuadrature NuQuadrature::make(int nodes, double nu_max) {
  if (!(nu_max > 1.0)) throw std::invalid_argument("nu_max must exceed 1");
  NuQuadrature q;
  q.nodes = nodes;
  q.nu_max = nu_max;
  Rule r = gauss_legendre(nodes, 0.0, std::log(nu_max));
  for (int i = 0; i < nodes; ++i) {
    double nu = std::exp(r.x[i]);
    q.nu.push_back(nu);
    q.weight.push_back(r.w[i] * nu);
  }
  return q;
}

}  // namespace ws
