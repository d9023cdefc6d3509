#include "fsoqkd/turbulence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fsoqkd/basis.hpp"
#include "fsoqkd/error.hpp"
#include "fsoqkd/special.hpp"
#include "fsoqkd/vacuum.hpp"

namespace fsoqkd::turbulence {

double structure_fn(StructureFunction kind, const Vec2& dp, const Vec2& d, const Channel& ch) {
  require(!ch.is_vacuum(), "structure function requires cn2 > 0");
  if (kind == StructureFunction::SquareLaw) {
    const double rho0 = ch.rho0();
    return (dp[0] * dp[0] + dp[1] * dp[1] + dp[0] * d[0] + dp[1] * d[1] + d[0] * d[0] + d[1] * d[1]) /
           (rho0 * rho0);
  }
  if (dp == Vec2{0.0, 0.0} && d == Vec2{0.0, 0.0}) return 0.0;
  const auto path = [&](double xi) {
    const double x = dp[0] * xi + d[0] * (1.0 - xi);
    const double y = dp[1] * xi + d[1] * (1.0 - xi);
    return std::pow(x * x + y * y, 5.0 / 6.0);
  };
  numerics::AdaptiveOptions opts;
  opts.rel_tol = 1e-10;
  return 2.91 * ch.k() * ch.k() * ch.cn2() * ch.length() * numerics::integrate_1d(path, 0.0, 1.0, opts);
}

double gaussian_pib_turb(const Channel& ch) {
  require(ch.has_gaussian_pupil(), "Gaussian power-in-bucket requires soft Gaussian pupils");
  const double df = ch.fresnel_product();
  const double eta0 = vacuum::lg_vacuum_eta(1, df);
  if (ch.is_vacuum()) return eta0;
  const double x = 1.0 + 4.0 * df + std::sqrt(1.0 + 4.0 * df);
  const double ratio = ch.radius() / ch.rho0();
  return eta0 * x / (x + ratio * ratio);
}

double gaussian_pib(StructureFunction kind, const Channel& ch, const numerics::AdaptiveOptions& opts) {
  require(ch.has_gaussian_pupil(), "Gaussian power-in-bucket requires soft Gaussian pupils");
  const double eta0 = vacuum::lg_vacuum_eta(1, ch.fresnel_product());
  if (ch.is_vacuum()) return eta0;
  const auto basis = vacuum::gaussian_mode_basis(ch);
  const double r2 = ch.radius() * ch.radius();
  const double b = 1.0 / (4.0 * basis.waist * basis.waist) + 1.0 / (2.0 * r2) +
                   ch.k() * ch.k() * r2 / (8.0 * ch.length() * ch.length());
  const auto integrand = [&](double r) {
    return r * std::exp(-b * r * r - 0.5 * structure_fn(kind, {0.0, 0.0}, {r, 0.0}, ch));
  };
  return eta0 * 2.0 * b * numerics::integrate_1d(integrand, 0.0, std::sqrt(60.0 / b), opts);
}

double gaussian_pib_53(const Channel& ch, const numerics::AdaptiveOptions& opts) {
  require(!ch.is_vacuum(), "5/3-law power-in-bucket requires cn2 > 0");
  return gaussian_pib(StructureFunction::FiveThirds, ch, opts);
}

CouplingMatrix lg_turb_matrix(int max_order, const Channel& ch, const MomentQuadrature& quad, int order_cap) {
  require(ch.has_gaussian_pupil(), "LG modes require soft Gaussian pupils");
  require(max_order >= 1, "LG mode order cap must be >= 1");
  require(max_order <= order_cap,
          "LG order " + std::to_string(max_order) + " exceeds the configured cap " + std::to_string(order_cap));
  const int nmax = max_order - 1;
  const HgMomentTable m(nmax, nmax, ch, quad);

  std::vector<numerics::BasisChangeMatrix> u;
  for (int n = 0; n <= nmax; ++n) u.push_back(numerics::lg_hg_unitary(n));

  const auto modes = lg_modes(max_order);
  const auto count = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXd eta(count, count);
  Eigen::Index row = 0;
  for (int n1 = 0; n1 <= nmax; ++n1) {
    const auto& c = u[static_cast<std::size_t>(n1)].coeffs;
    for (int r1 = 0; r1 <= n1; ++r1, ++row) {
      Eigen::Index col = 0;
      for (int n2 = 0; n2 <= nmax; ++n2) {
        const auto& d = u[static_cast<std::size_t>(n2)].coeffs;
        for (int r2 = 0; r2 <= n2; ++r2, ++col) {
          std::complex<double> sum = 0.0;
          for (int j1 = 0; j1 <= n1; ++j1)
            for (int j2 = 0; j2 <= n1; ++j2) {
              const std::complex<double> cin = c(r1, j1) * std::conj(c(r1, j2));
              for (int k1 = 0; k1 <= n2; ++k1) {
                for (int k2 = (j1 + j2 + k1) % 2; k2 <= n2; k2 += 2) {
                  const auto mx = m(n1 - j1, n1 - j2, n2 - k1, n2 - k2);
                  const auto my = m(j1, j2, k1, k2);
                  sum += cin * std::conj(d(r2, k1)) * d(r2, k2) * mx * my;
                }
              }
            }
          if (std::abs(sum.imag()) > 1e-8) {
            throw InvariantViolation("LG coupling " + to_string(modes[static_cast<std::size_t>(row)]) + " -> " +
                                     to_string(modes[static_cast<std::size_t>(col)]) +
                                     " has imaginary residue " + std::to_string(sum.imag()));
          }
          eta(row, col) = std::clamp(sum.real(), 0.0, 1.0);
        }
      }
    }
  }
  return CouplingMatrix({modes.begin(), modes.end()}, std::move(eta),
                        ch.is_vacuum() ? Provenance::Vacuum : Provenance::SquareLaw);
}

double fb_turb_axis(int diff, int grid, double fresnel_product, double side_over_rho0) {
  require(grid >= 1, "FB grid size must be positive");
  require(fresnel_product > 0.0, "Fresnel number product must be positive");
  const double root = std::sqrt(fresnel_product);
  const double scale = std::numbers::pi * root / grid;
  const double decay = 0.5 * side_over_rho0 * side_over_rho0;
  const double shift = 2.0 * scale * diff;
  const auto integrand = [=](double xi) {
    return (1.0 - xi) * numerics::sinc(scale * xi) * std::exp(-xi * xi * decay) * std::cos(shift * xi);
  };
  numerics::AdaptiveOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-17;
  // one piece per half period of the fastest oscillation
  const int pieces = std::max(1, static_cast<int>(std::ceil((scale + std::abs(shift)) / std::numbers::pi)));
  double sum = 0.0;
  for (int i = 0; i < pieces; ++i)
    sum += numerics::integrate_1d(integrand, static_cast<double>(i) / pieces, static_cast<double>(i + 1) / pieces, opts);
  return 2.0 * root / grid * sum;
}

namespace {
double side_over_rho0(const Channel& ch) { return ch.is_vacuum() ? 0.0 : ch.side() / ch.rho0(); }
} // namespace

double fb_turb_eta(const FbPixel& from, const FbPixel& to, const Channel& ch) {
  require(ch.has_square_pupil(), "focused beams require hard square pupils");
  validate(from);
  validate(to);
  require(from.grid == to.grid, "FB pixels belong to different grids");
  const double df = ch.fresnel_product();
  const double ratio = side_over_rho0(ch);
  return fb_turb_axis(to.n - from.n, from.grid, df, ratio) * fb_turb_axis(to.m - from.m, from.grid, df, ratio);
}

CouplingMatrix fb_turb_matrix(int grid, const Channel& ch) {
  require(ch.has_square_pupil(), "focused beams require hard square pupils");
  require(grid >= 1, "FB grid size must be positive");
  const double ratio = side_over_rho0(ch);
  std::vector<double> axis(static_cast<std::size_t>(grid));
  for (int d = 0; d < grid; ++d)
    axis[static_cast<std::size_t>(d)] = fb_turb_axis(d, grid, ch.fresnel_product(), ratio);
  const auto pixels = fb_pixels(grid);
  const auto count = static_cast<Eigen::Index>(pixels.size());
  Eigen::MatrixXd eta(count, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto& a = pixels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < count; ++j) {
      const auto& b = pixels[static_cast<std::size_t>(j)];
      eta(i, j) = axis[static_cast<std::size_t>(std::abs(b.n - a.n))] *
                  axis[static_cast<std::size_t>(std::abs(b.m - a.m))];
    }
  }
  return CouplingMatrix({pixels.begin(), pixels.end()}, std::move(eta),
                        ch.is_vacuum() ? Provenance::Vacuum : Provenance::SquareLaw);
}

} // namespace fsoqkd::turbulence
