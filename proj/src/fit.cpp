#include "ws/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace ws {

namespace {

FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit abscissae are degenerate");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    double e = y[i] - r.intercept - r.slope * x[i];
    ss += e * e;
  }
  r.stderr_slope = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  r.points = n;
  return r;
}

}  // namespace

FitResult fit_power_law(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() != v.size()) throw std::invalid_argument("fit series lengths differ");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(v[i] > 0.0) || !std::isfinite(v[i])) continue;
    x.push_back(std::log(t[i]));
    y.push_back(std::log(v[i]));
  }
  if (x.size() < 8) throw std::invalid_argument("power-law fit needs at least 8 usable points");
  FitResult r = least_squares(x, y);
  r.excluded = static_cast<int>(t.size() - x.size());
  r.span_decades = (x.back() - x.front()) / std::log(10.0);
  if (std::abs(r.span_decades) < 0.8) throw std::invalid_argument("power-law fit window spans less than 0.8 decades");
  return r;
}

BoundFit slope_bound(const std::vector<double>& t, const std::vector<double>& v, double target, double tolerance) {
  BoundFit b;
  b.target = target;
  b.tolerance = tolerance;
  bool all_zero = !v.empty();
  for (double x : v)
    if (x != 0.0) all_zero = false;
  if (all_zero) {
    b.vacuous = true;
    b.pass = true;
    b.fit.excluded = static_cast<int>(v.size());
    return b;
  }
  try {
    b.fit = fit_power_law(t, v);
    b.pass = std::isfinite(b.fit.slope) && b.fit.slope <= target + tolerance;
  } catch (const std::exception& e) {
    b.error = e.what();
    b.pass = false;
  }
  return b;
}

FitResult fit_log_linear(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() != v.size()) throw std::invalid_argument("fit series lengths differ");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !std::isfinite(v[i])) continue;
    x.push_back(std::log(t[i]));
    y.push_back(v[i]);
  }
  if (x.size() < 8) throw std::invalid_argument("log-linear fit needs at least 8 usable points");
  return least_squares(x, y);
}

void window(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi,
            std::vector<double>& to, std::vector<double>& vo) {
  to.clear();
  vo.clear();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= lo * (1 - 1e-12) && t[i] <= hi * (1 + 1e-12)) {
      to.push_back(t[i]);
      vo.push_back(v[i]);
    }
}

}  // namespace ws
