#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ws/quadrature.hpp"

namespace ws {

struct DilationIntegral {
  double value = 0.0;  // quadrature on [1, nu_max] plus the modelled tail
  double tail = 0.0;   // contribution beyond nu_max
};

/// I_m f(t) = int_1^inf nu^{-m-3/2} f(nu t) d nu, on the log-nu rule used for B_1.
/// Beyond nu_max f is continued as a power law with the declared decay exponent;
/// throws when that tail exceeds tail_budget times the total.
DilationIntegral dilation_integral(const std::function<double(double)>& f, double m, double t,
                                   const NuQuadrature& quad = NuQuadrature::make(24, 32.0),
                                   double tail_exponent = 0.0, double tail_budget = 0.5);

/// two-column series, header "t,value", LF line endings, round-trip exact
void write_series_csv(const std::string& path, const std::vector<double>& t, const std::vector<double>& v);
void read_series_csv(const std::string& path, std::vector<double>& t, std::vector<double>& v);

/// n points log-uniform on [a, b]
std::vector<double> log_space(double a, double b, int n);

}  // namespace ws
