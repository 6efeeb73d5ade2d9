#include "ws/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ws {

DilationIntegral dilation_integral(const std::function<double(double)>& f, double m, double t,
                                   const NuQuadrature& quad, double tail_exponent, double tail_budget) {
  if (!(m + 0.5 + tail_exponent > 0.0)) throw std::invalid_argument("dilation integral does not converge");
  DilationIntegral r;
  for (std::size_t i = 0; i < quad.nu.size(); ++i)
    r.value += quad.weight[i] * std::pow(quad.nu[i], -m - 1.5) * f(quad.nu[i] * t);
  const double nm = quad.nu_max;
  r.tail = f(nm * t) * std::pow(nm, -m - 0.5) / (m + 0.5 + tail_exponent);
  r.value += r.tail;
  if (std::abs(r.tail) > tail_budget * std::abs(r.value) && r.tail != 0.0)
    throw std::runtime_error("dilation integral tail exceeds its budget");
  return r;
}

void write_series_csv(const std::string& path, const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() != v.size()) throw std::invalid_argument("series columns differ in length");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "t,value\n";
  char buf[64];
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,", t[i]);
    os << buf;
    std::snprintf(buf, sizeof buf, "%.17g\n", v[i]);
    os << buf;
  }
  if (!os) throw std::runtime_error("write failed for " + path);
}

void read_series_csv(const std::string& path, std::vector<double>& t, std::vector<double>& v) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(is, line) || line != "t,value") throw std::runtime_error("bad series header in " + path);
  t.clear();
  v.clear();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto c = line.find(',');
    if (c == std::string::npos) throw std::runtime_error("bad series row in " + path);
    t.push_back(std::stod(line.substr(0, c)));
    v.push_back(std::stod(line.substr(c + 1)));
  }
}

std::vector<double> log_space(double a, double b, int n) {
  if (n < 2 || !(a > 0.0) || !(b > a)) throw std::invalid_argument("log_space needs 0 < a < b and n >= 2");
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  r.back() = b;
  return r;
}

}  // namespace ws
