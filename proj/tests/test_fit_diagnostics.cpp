#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "ws/diagnostics.hpp"
#include "ws/fit.hpp"

using namespace ws;

TEST_CASE("power-law fit recovers 7 t^-2 exactly") {
  auto t = log_space(10.0, 200.0, 12);
  std::vector<double> v;
  for (double x : t) v.push_back(7.0 * std::pow(x, -2.0));
  FitResult f = fit_power_law(t, v);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-12));
  CHECK(f.stderr_slope < 1e-10);
  CHECK(f.points == 12);
}

TEST_CASE("logarithmic factor biases the slope upward by less than 0.3") {
  auto t = log_space(10.0, 200.0, 12);
  std::vector<double> v;
  for (double x : t) v.push_back(std::log(x) / x);
  FitResult f = fit_power_law(t, v);
  CHECK(f.slope > -1.0);
  CHECK(f.slope < -0.7);
}

TEST_CASE("fit needs enough points over enough range") {
  std::vector<double> t{10, 11, 12, 13, 14, 15, 16, 17}, v(8, 1.0);
  CHECK_THROWS(fit_power_law(t, v));  // 0.23 decades
  auto t2 = log_space(1.0, 100.0, 5);
  CHECK_THROWS(fit_power_law(t2, std::vector<double>(5, 1.0)));
}

TEST_CASE("non-positive samples are dropped and counted") {
  auto t = log_space(1.0, 100.0, 10);
  std::vector<double> v;
  for (double x : t) v.push_back(1.0 / x);
  v[3] = 0.0;
  FitResult f = fit_power_law(t, v);
  CHECK(f.excluded == 1);
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("slope bound: vacuous zero series and honest failure") {
  auto t = log_space(1.0, 100.0, 10);
  BoundFit z = slope_bound(t, std::vector<double>(10, 0.0), -1.0);
  CHECK(z.vacuous);
  CHECK(z.pass);
  std::vector<double> v;
  for (double x : t) v.push_back(1.0 / x);
  CHECK(slope_bound(t, v, -1.0).pass);
  CHECK(slope_bound(t, v, -1.0 - 0.16).pass == false);
  BoundFit bad = slope_bound(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 0.0);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.error.empty());
}

TEST_CASE("log-linear fit") {
  auto t = log_space(2.0, 300.0, 9);
  std::vector<double> v;
  for (double x : t) v.push_back(0.3 + 1.7 * std::log(x));
  FitResult f = fit_log_linear(t, v);
  CHECK(f.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("dilation integral oracles") {
  // I_0 1 = int_1^inf nu^{-3/2} = 2
  auto one = dilation_integral([](double) { return 1.0; }, 0.0, 3.0);
  CHECK(one.value == doctest::Approx(2.0).epsilon(1e-10));
  // I_0 (1/tau) (t) = (2/3) / t
  for (double t : {1.0, 5.0, 40.0}) {
    auto r = dilation_integral([](double s) { return 1.0 / s; }, 0.0, t, NuQuadrature::make(24, 32.0), 1.0);
    CHECK(r.value == doctest::Approx(2.0 / (3.0 * t)).epsilon(1e-10));
  }
  CHECK_THROWS(dilation_integral([](double) { return 1.0; }, -0.5, 1.0));
  // a slowly decaying integrand with the wrong declared tail blows the budget
  CHECK_THROWS(dilation_integral([](double s) { return s; }, 0.6, 1.0, NuQuadrature::make(24, 32.0), -1.05));
}

TEST_CASE("series csv round trip is exact") {
  auto path = (std::filesystem::temp_directory_path() / "ws_series_roundtrip.csv").string();
  std::vector<double> t{1.0, 2.5, 1.0 / 3.0, 1e-300, 6.02e23}, v{-0.0, 3.14159265358979, -1e-17, 2.0 / 7.0, 1e308};
  write_series_csv(path, t, v);
  std::vector<double> t2, v2;
  read_series_csv(path, t2, v2);
  CHECK(t2 == t);
  CHECK(v2 == v);
  std::FILE* f = std::fopen(path.c_str(), "rb");
  char head[9] = {};
  CHECK(std::fread(head, 1, 8, f) == 8);
  std::fclose(f);
  CHECK(std::string(head) == "t,value\n");
  std::filesystem::remove(path);
}

TEST_CASE("log_space endpoints and spacing") {
  auto t = log_space(2.0, 128.0, 7);
  CHECK(t.front() == 2.0);
  CHECK(t.back() == 128.0);
  CHECK(t[1] / t[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS(log_space(0.0, 1.0, 4));
}
