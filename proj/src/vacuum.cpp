#include "fsoqkd/vacuum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fsoqkd/error.hpp"
#include "fsoqkd/quadrature.hpp"
#include "fsoqkd/special.hpp"

namespace fsoqkd::vacuum {

namespace {

// sqrt(eta_1) in cancellation-free form: 2 sqrt(Df) / (1 + sqrt(1 + 4 Df)).
double amplitude_ratio(double fresnel_product) {
  return 2.0 * std::sqrt(fresnel_product) / (1.0 + std::sqrt(1.0 + 4.0 * fresnel_product));
}

} // namespace

double lg_vacuum_eta(int order, double fresnel_product) {
  require(order >= 1, "LG mode order must be >= 1");
  require(fresnel_product > 0.0, "Fresnel number product must be positive");
  if (std::isinf(fresnel_product)) return 1.0;
  const double t = amplitude_ratio(fresnel_product);
  return std::pow(t * t, order);
}

GaussianModeBasis gaussian_mode_basis(const Channel& ch) {
  const double r = ch.radius();
  const double t = amplitude_ratio(ch.fresnel_product());
  const double t2 = t * t;
  return {t, r * std::sqrt((1.0 - t2) / (2.0 * (1.0 + t2)))};
}

int lg_mode_count(int max_order) {
  require(max_order >= 1, "LG mode order cap must be >= 1");
  return max_order * (max_order + 1) / 2;
}

int lg_series_cutoff(double fresnel_product) {
  require(fresnel_product > 0.0, "Fresnel number product must be positive");
  const double x = lg_vacuum_eta(1, fresnel_product);
  int q = 1;
  double eta = x;
  while (q * eta >= 1e-15 * fresnel_product) {
    ++q;
    eta *= x;
  }
  return q - 1;
}

double lg_vacuum_sum(double fresnel_product) {
  const int cutoff = lg_series_cutoff(fresnel_product);
  const double x = lg_vacuum_eta(1, fresnel_product);
  // Sum smallest terms first.
  double sum = 0.0;
  for (int q = cutoff; q >= 1; --q) sum += q * std::pow(x, q);
  return sum;
}

CouplingMatrix lg_vacuum_matrix(int max_order, const Channel& ch) {
  require(ch.has_gaussian_pupil(), "LG modes require soft Gaussian pupils");
  const auto modes = lg_modes(max_order);
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(modes.size()),
                                              static_cast<Eigen::Index>(modes.size()));
  for (std::size_t i = 0; i < modes.size(); ++i)
    eta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
        lg_vacuum_eta(modes[i].order(), ch.fresnel_product());
  return CouplingMatrix({modes.begin(), modes.end()}, std::move(eta), Provenance::Vacuum);
}

double fb_vacuum_axis(int diff, int grid, double fresnel_product) {
  require(grid >= 1, "FB grid size must be positive");
  require(fresnel_product > 0.0, "Fresnel number product must be positive");
  // u = sqrt(Df) xi / N turns the window into int sinc^2(pi u) du; splitting
  // at the integer zeros keeps each piece a single lobe when Df is large.
  const double root = std::sqrt(fresnel_product);
  const double d = std::abs(diff);
  const double lo = (d - 0.5) * root / grid;
  const double hi = (d + 0.5) * root / grid;
  const auto integrand = [](double u) {
    const double s = numerics::sinc(std::numbers::pi * u);
    return s * s;
  };
  numerics::AdaptiveOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-17;
  double sum = 0.0;
  double a = lo;
  while (a < hi) {
    const double b = std::min(hi, std::floor(a) + 1.0);
    sum += numerics::integrate_1d(integrand, a, b, opts);
    a = b;
  }
  return sum;
}

double fb_vacuum_eta(const FbPixel& from, const FbPixel& to, const Channel& ch) {
  require(ch.has_square_pupil(), "focused beams require hard square pupils");
  validate(from);
  validate(to);
  require(from.grid == to.grid, "FB pixels belong to different grids");
  const double df = ch.fresnel_product();
  return fb_vacuum_axis(to.n - from.n, from.grid, df) * fb_vacuum_axis(to.m - from.m, from.grid, df);
}

CouplingMatrix fb_vacuum_matrix(int grid, const Channel& ch) {
  require(ch.has_square_pupil(), "focused beams require hard square pupils");
  std::vector<double> axis(static_cast<std::size_t>(grid));
  for (int d = 0; d < grid; ++d) axis[static_cast<std::size_t>(d)] = fb_vacuum_axis(d, grid, ch.fresnel_product());
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
  return CouplingMatrix({pixels.begin(), pixels.end()}, std::move(eta), Provenance::Vacuum);
}

double qkd_capacity(std::span<const double> etas, double nu) {
  require(nu > 0.0, "bandwidth must be positive");
  double sum = 0.0;
  for (double eta : etas) {
    require(eta >= 0.0 && eta < 1.0, "capacity requires 0 <= eta < 1");
    sum -= std::log2(1.0 - eta);
  }
  return nu * sum;
}

double lg_vacuum_capacity(double fresnel_product, double nu, int max_order) {
  require(nu > 0.0, "bandwidth must be positive");
  require(max_order >= 1, "LG mode order cap must be >= 1");
  const double x = lg_vacuum_eta(1, fresnel_product);
  require(x < 1.0, "capacity diverges for unit transmissivity");
  double sum = 0.0;
  for (int q = max_order; q >= 1; --q) sum -= q * std::log1p(-std::pow(x, q));
  return nu * sum / std::numbers::ln2;
}

double lg_vacuum_capacity(double fresnel_product, double nu) {
  return lg_vacuum_capacity(fresnel_product, nu, lg_series_cutoff(fresnel_product));
}

} // namespace fsoqkd::vacuum
