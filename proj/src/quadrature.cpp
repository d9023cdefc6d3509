#include "fsoqkd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <utility>

#include "fsoqkd/error.hpp"

namespace fsoqkd::numerics {

Quadrature1D Quadrature1D::mapped(double a, double b) const {
  Quadrature1D out;
  out.nodes.resize(size());
  out.weights.resize(size());
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < size(); ++i) {
    out.nodes[i] = mid + half * nodes[i];
    out.weights[i] = half * weights[i];
  }
  return out;
}

double Quadrature1D::apply(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

namespace {

// P_n(x) and P_n'(x) by the Bonnet recurrence (n >= 1).
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

} // namespace

Quadrature1D gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  Quadrature1D rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) {
    const double dp = legendre_with_derivative(n, 0.0).second;
    rule.weights[static_cast<std::size_t>(n / 2)] = 2.0 / (dp * dp);
  }
  return rule;
}

Quadrature1D gauss_legendre(int n, double a, double b) { return gauss_legendre(n).mapped(a, b); }

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double fsum = f(center - dx) + f(center + dx);
    resk += kWgk[static_cast<std::size_t>(j)] * fsum;
    if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * fsum;
  }
  return Segment{a, b, resk * half, std::abs((resk - resg) * half)};
}

} // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const AdaptiveOptions& opts) {
  require(a < b, "integrate_1d: need a < b");
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int subdivisions = 0;
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (subdivisions >= opts.max_subdivisions) {
      std::ostringstream msg;
      msg << "integrate_1d: no convergence on [" << a << ", " << b << "] after "
          << subdivisions << " subdivisions (estimate " << total << ", error " << err << ")";
      throw ConvergenceError(msg.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    if (heap.size() % 64 == 0) {
      // Re-sum to keep running totals free of cancellation drift.
      auto copy = heap;
      total = 0.0;
      err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        copy.pop();
      }
    }
  }
  return total;
}

std::complex<double> integrate_4d_fixed(const Integrand4& f, const Box4& box, int order) {
  std::array<Quadrature1D, 4> rules;
  for (std::size_t d = 0; d < 4; ++d) rules[d] = gauss_legendre(order, box[d].lo, box[d].hi);
  std::complex<double> total{0.0, 0.0};
  for (std::size_t i = 0; i < rules[0].size(); ++i) {
    std::complex<double> s1{0.0, 0.0};
    for (std::size_t j = 0; j < rules[1].size(); ++j) {
      std::complex<double> s2{0.0, 0.0};
      for (std::size_t k = 0; k < rules[2].size(); ++k) {
        std::complex<double> s3{0.0, 0.0};
        for (std::size_t l = 0; l < rules[3].size(); ++l)
          s3 += rules[3].weights[l] *
                f(rules[0].nodes[i], rules[1].nodes[j], rules[2].nodes[k], rules[3].nodes[l]);
        s2 += rules[2].weights[k] * s3;
      }
      s1 += rules[1].weights[j] * s2;
    }
    total += rules[0].weights[i] * s1;
  }
  return total;
}

Integral4Result integrate_4d(const Integrand4& f, const Box4& box, const Integral4Options& opts) {
  require(opts.order >= 1 && opts.max_order >= opts.order, "integrate_4d: bad order range");
  int order = opts.order;
  std::complex<double> prev = integrate_4d_fixed(f, box, order);
  while (2 * order <= opts.max_order) {
    order *= 2;
    const std::complex<double> cur = integrate_4d_fixed(f, box, order);
    const double change = std::abs(cur - prev);
    if (change <= std::max(opts.abs_tol, opts.rel_tol * std::abs(cur))) return {cur, order, change};
    prev = cur;
  }
  std::ostringstream msg;
  msg << "integrate_4d: order doubling did not converge by " << order << " points/axis";
  throw ConvergenceError(msg.str());
}

} // namespace fsoqkd::numerics
