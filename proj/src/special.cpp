#include "fsoqkd/special.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fsoqkd/error.hpp"

namespace fsoqkd::numerics {

double laguerre(int p, int alpha, double x) {
  require(p >= 0 && alpha >= 0, "laguerre: indices must be non-negative");
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < p; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite(int n, double x) {
  require(n >= 0, "hermite: degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_functions(double u, std::span<double> out) {
  if (out.empty()) return;
  const double psi0 = std::exp(-0.5 * u * u) / std::pow(std::numbers::pi, 0.25);
  out[0] = psi0;
  if (out.size() == 1) return;
  out[1] = std::numbers::sqrt2 * u * psi0;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * u * out[k] - std::sqrt(kk / (kk + 1.0)) * out[k - 1];
  }
}

double hermite_function(int n, double u) {
  require(n >= 0, "hermite_function: degree must be non-negative");
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  hermite_functions(u, buf);
  return buf.back();
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace fsoqkd::numerics
