#include "fsoqkd/basis.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>

#include "fsoqkd/error.hpp"
#include "fsoqkd/special.hpp"

namespace fsoqkd::numerics {

int BasisChangeMatrix::lg_radial(int order, int row) {
  return (order - std::abs(lg_azimuthal(order, row))) / 2;
}

int BasisChangeMatrix::lg_row(int p, int l) {
  const int order = 2 * p + std::abs(l);
  return (order - l) / 2;
}

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

// Coefficient of t^k in (1 - t)^n (1 + t)^m.
double expansion_coefficient(int n, int m, int k) {
  double sum = 0.0;
  for (int j = 0; j <= std::min(n, k); ++j) {
    const double term = binomial(n, j) * binomial(m, k - j);
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum;
}

} // namespace

BasisChangeMatrix lg_hg_unitary(int order) {
  require(order >= 0, "lg_hg_unitary: order must be non-negative");
  const int size = order + 1;
  BasisChangeMatrix out;
  out.order = order;
  out.coeffs = Eigen::MatrixXcd::Zero(size, size);
  const std::complex<double> minus_i{0.0, -1.0};
  for (int row = 0; row < size; ++row) {
    const int l = BasisChangeMatrix::lg_azimuthal(order, row);
    const int p = BasisChangeMatrix::lg_radial(order, row);
    const int n = p + std::max(l, 0);
    const int m = p + std::max(-l, 0);
    const double p_sign = (p % 2 == 0) ? 1.0 : -1.0;
    std::complex<double> phase{1.0, 0.0};
    for (int k = 0; k < size; ++k) {
      const double log_norm =
          0.5 * (log_factorial(order - k) + log_factorial(k) - order * std::log(2.0) -
                 log_factorial(n) - log_factorial(m));
      const double b = std::exp(log_norm) * expansion_coefficient(n, m, k);
      out.coeffs(row, k) = p_sign * phase * b;
      phase *= minus_i;
    }
  }
  return out;
}

} // namespace fsoqkd::numerics
