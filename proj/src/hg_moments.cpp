#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include "fsoqkd/error.hpp"
#include "fsoqkd/special.hpp"
#include "fsoqkd/turbulence.hpp"
#include "fsoqkd/vacuum.hpp"

// One-axis moments are evaluated in scaled coordinates u = x/a (a = mode
// waist) with sum/difference variables U = (u1+u2)/2, D = u1-u2 on both
// sides. The vacuum kernel pair collapses to exp(-i g (U' D + D' U)) and the
// square-law coherence factor depends on (D, D') only, so the 4-D integral
// factorizes into two dense products per index pair:
//   F_ij(D', D) = sum_U exp(-i g D' U) P_ij(U, D),
//   M_ijkl      = sum_{D,D'} F_ij(D', D) F_kl(D, D') T(D, D').

namespace fsoqkd::turbulence {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

struct Geometry {
  double amplitude; // eta_1^(1/2)
  double beta;      // a^2 / R^2
  double gamma;     // k a^2 / L
  double r;         // rho0 / a, +inf in vacuum
};

Geometry geometry(const Channel& ch) {
  const auto basis = vacuum::gaussian_mode_basis(ch);
  const double a2 = basis.waist * basis.waist;
  const double r = ch.is_vacuum() ? std::numeric_limits<double>::infinity() : ch.rho0() / basis.waist;
  return {basis.amplitude, a2 / (ch.radius() * ch.radius()), ch.k() * a2 / ch.length(), r};
}

// F for every input pair (i, j <= max_in) and output pair (k, l <= max_out),
// flattened column-wise in the layout each side of the contraction needs.
struct Transformed {
  MatrixXcd in;  // column i*(max_in+1)+j holds vec(F_ij^T)
  MatrixXcd out; // column k*(max_out+1)+l holds vec(F_kl ∘ T)
};

Transformed transform(int max_in, int max_out, int npts, const Geometry& g) {
  const int nmax = std::max(max_in, max_out);
  const double w_u = (6.0 + std::sqrt(2.0 * nmax + 1.0)) / std::numbers::sqrt2;
  const double w_d = std::min(2.0 * std::numbers::sqrt2 * w_u, 10.0 * g.r);
  const auto rule = numerics::gauss_legendre(npts);
  const Index n = npts;
  Eigen::VectorXd u(n), wu(n), d(n), wd(n);
  for (Index i = 0; i < n; ++i) {
    u(i) = w_u * rule.nodes[static_cast<std::size_t>(i)];
    wu(i) = w_u * rule.weights[static_cast<std::size_t>(i)];
    d(i) = w_d * rule.nodes[static_cast<std::size_t>(i)];
    wd(i) = w_d * rule.weights[static_cast<std::size_t>(i)];
  }

  // E(D', U) split into real and imaginary parts so the big products stay real.
  MatrixXd e_re(n, n), e_im(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const double ph = -g.gamma * d(a) * u(b);
      e_re(a, b) = std::cos(ph);
      e_im(a, b) = std::sin(ph);
    }

  MatrixXd t(n, n);
  const double inv = std::isinf(g.r) ? 0.0 : 1.0 / (2.0 * g.r * g.r);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) t(a, b) = std::exp(-(d(a) * d(a) + d(a) * d(b) + d(b) * d(b)) * inv);

  const int m = nmax + 1;
  // psi tables at u1 = U + D/2 and u2 = U - D/2 with weights and envelope folded in.
  std::vector<MatrixXd> h1(static_cast<std::size_t>(m), MatrixXd(n, n));
  std::vector<MatrixXd> h2(static_cast<std::size_t>(m), MatrixXd(n, n));
  std::vector<double> p1(static_cast<std::size_t>(m)), p2(static_cast<std::size_t>(m));
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const double u1 = u(a) + d(b) / 2.0;
      const double u2 = u(a) - d(b) / 2.0;
      numerics::hermite_functions(u1, p1);
      numerics::hermite_functions(u2, p2);
      const double env = std::exp(-g.beta * (u1 * u1 + u2 * u2)) * wu(a) * wd(b);
      for (int i = 0; i < m; ++i) {
        h1[static_cast<std::size_t>(i)](a, b) = p1[static_cast<std::size_t>(i)] * env;
        h2[static_cast<std::size_t>(i)](a, b) = p2[static_cast<std::size_t>(i)];
      }
    }

  const int mi = max_in + 1;
  const int mo = max_out + 1;
  Transformed out{MatrixXcd(n * n, mi * mi), MatrixXcd(n * n, mo * mo)};
  const MatrixXcd tc = t.cast<std::complex<double>>();
  MatrixXd p(n, n);
  MatrixXcd f(n, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const bool need_in = i < mi && j < mi;
      const bool need_out = i < mo && j < mo;
      if (!need_in && !need_out) continue;
      p = h1[static_cast<std::size_t>(i)].cwiseProduct(h2[static_cast<std::size_t>(j)]);
      f.real().noalias() = e_re * p;
      f.imag().noalias() = e_im * p;
      if (need_in) Eigen::Map<MatrixXcd>(out.in.col(i * mi + j).data(), n, n) = f.transpose();
      if (need_out) Eigen::Map<MatrixXcd>(out.out.col(i * mo + j).data(), n, n) = f.cwiseProduct(tc);
    }
  return out;
}

// Raw moments for all (in pair, out pair) at one rule order:
// sum_{D,D'} F_in(D',D) G_out(D,D') as a plain (unconjugated) dot product.
MatrixXcd raw_moments(int max_in, int max_out, int npts, const Geometry& g) {
  const auto tr = transform(max_in, max_out, npts, g);
  return tr.in.transpose() * tr.out;
}

} // namespace

HgMomentTable::HgMomentTable(int max_in, int max_out, const Channel& ch, const MomentQuadrature& quad)
    : max_in_(max_in), max_out_(max_out) {
  require(ch.has_gaussian_pupil(), "HG moments require soft Gaussian pupils");
  require(max_in >= 0 && max_out >= 0, "HG index bounds must be non-negative");
  require(quad.order >= 2 && quad.max_order >= quad.order, "invalid moment quadrature orders");
  const auto g = geometry(ch);
  const double scale = g.amplitude / (std::numbers::pi * (1.0 + g.amplitude * g.amplitude));

  MatrixXcd prev = raw_moments(max_in, max_out, quad.order, g);
  int order = quad.order;
  double change = std::numeric_limits<double>::infinity();
  MatrixXcd cur;
  while (true) {
    const int next = order * 2;
    if (next > quad.max_order) {
      throw ConvergenceError("HG moments did not converge by " + std::to_string(quad.max_order) +
                             " points per axis (last change " + std::to_string(change) + ")");
    }
    cur = raw_moments(max_in, max_out, next, g);
    change = (cur - prev).cwiseAbs().maxCoeff() * scale;
    order = next;
    spdlog::debug("hg moments: order {} change {:.3e}", order, change);
    if (change <= quad.abs_tol) break;
    prev = std::move(cur);
  }
  order_ = order;

  const std::complex<double> pos_i{0.0, 1.0};
  const int mi = max_in + 1;
  const int mo = max_out + 1;
  values_.assign(static_cast<std::size_t>(mi * mi * mo * mo), {});
  for (int ai = 0; ai < mi; ++ai)
    for (int bi = 0; bi < mi; ++bi)
      for (int ao = 0; ao < mo; ++ao)
        for (int bo = 0; bo < mo; ++bo) {
          if ((ai + bi + ao + bo) % 2 != 0) continue; // odd total parity integrates to zero
          const std::complex<double> phase = std::pow(pos_i, ao) * std::pow(-pos_i, bo);
          values_[index(ai, bi, ao, bo)] = scale * phase * cur(ai * mi + bi, ao * mo + bo);
        }
}

HgSecondMoment hg_second_moment(int a_in, int b_in, int a_out, int b_out, const Channel& ch,
                                const MomentQuadrature& quad) {
  require(a_in >= 0 && b_in >= 0 && a_out >= 0 && b_out >= 0, "HG indices must be non-negative");
  const HgMomentTable table(std::max(a_in, b_in), std::max(a_out, b_out), ch, quad);
  return {a_in, b_in, a_out, b_out, table(a_in, b_in, a_out, b_out)};
}

} // namespace fsoqkd::turbulence
