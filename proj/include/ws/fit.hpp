#pragma once

#include <string>
#include <vector>

namespace ws {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
  int excluded = 0;         // zero or non-finite values dropped
  double span_decades = 0.0;
};

/// least squares of log v against log t; non-positive or non-finite values are dropped,
/// >= 8 points spanning >= 0.8 decades required
FitResult fit_power_law(const std::vector<double>& t, const std::vector<double>& v);

/// v = a + c log t, plain least squares
FitResult fit_log_linear(const std::vector<double>& t, const std::vector<double>& v);

/// slope <= target + tolerance; an identically zero series passes vacuously
struct BoundFit {
  FitResult fit;
  double target = 0.0;
  double tolerance = 0.15;
  bool vacuous = false;
  bool pass = false;
  std::string error;
};
BoundFit slope_bound(const std::vector<double>& t, const std::vector<double>& v, double target,
                     double tolerance = 0.15);

/// restrict a series to t in [lo, hi]
void window(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi,
            std::vector<double>& to, std::vector<double>& vo);

}  // namespace ws
