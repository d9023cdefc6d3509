#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace fsoqkd::numerics {

/// Fixed quadrature rule: sum_i weights[i] * f(nodes[i]).
struct Quadrature1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Affine map of the rule from [-1, 1] onto [a, b].
  Quadrature1D mapped(double a, double b) const;
  double apply(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
Quadrature1D gauss_legendre(int n);
/// n-point Gauss-Legendre rule on [a, b].
Quadrature1D gauss_legendre(int n, double a, double b);

struct AdaptiveOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Bisects the interval with the largest error estimate until the total
/// estimated error is <= max(abs_tol, rel_tol * |I|). Throws ConvergenceError
/// when the subdivision budget is exhausted.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const AdaptiveOptions& opts = {});

struct Interval {
  double lo;
  double hi;
};
using Box4 = std::array<Interval, 4>;
using Integrand4 = std::function<std::complex<double>(double, double, double, double)>;

struct Integral4Options {
  int order = 24;      ///< starting Gauss-Legendre points per axis
  int max_order = 96;  ///< order doubling stops here
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
};

struct Integral4Result {
  std::complex<double> value;
  int order;           ///< points per axis of the accepted estimate
  double change;       ///< |I(order) - I(order/2)|
};

/// Tensor-product Gauss-Legendre estimate at a single fixed order.
std::complex<double> integrate_4d_fixed(const Integrand4& f, const Box4& box, int order);

/// Tensor-product Gauss-Legendre with order doubling: accepts I(2n) when
/// |I(2n) - I(n)| <= max(abs_tol, rel_tol |I(2n)|). Throws ConvergenceError
/// when max_order is reached first.
Integral4Result integrate_4d(const Integrand4& f, const Box4& box, const Integral4Options& opts = {});

} // namespace fsoqkd::numerics
