#pragma once

#include <array>
#include <complex>
#include <vector>

#include "fsoqkd/channel.hpp"
#include "fsoqkd/modes.hpp"
#include "fsoqkd/quadrature.hpp"

namespace fsoqkd::turbulence {

enum class StructureFunction { FiveThirds, SquareLaw };

using Vec2 = std::array<double, 2>;

/// Two-source spherical-wave structure function D(drho', drho).
/// FiveThirds: 2.91 k^2 Cn^2 L int_0^1 |drho' xi + drho (1 - xi)|^{5/3} dxi.
/// SquareLaw:  (|drho'|^2 + drho'.drho + |drho|^2) / rho0^2.
/// Requires a turbulent channel.
double structure_fn(StructureFunction kind, const Vec2& d_rho_prime, const Vec2& d_rho, const Channel& ch);

/// Average power-in-bucket of the fundamental Gaussian beam, square law,
/// closed form. Reduces to the vacuum eta_1 when rho0 is infinite.
double gaussian_pib_turb(const Channel& ch);

/// Same quantity by direct quadrature of the averaged coupling integral.
/// The output pupil is integrated out, so the receiver-side separation
/// vanishes and the remaining average is radial in the transmitter-side
/// separation r:  eta = eta_1 * 2b int_0^inf r exp(-b r^2 - D(0, r)/2) dr.
double gaussian_pib(StructureFunction kind, const Channel& ch, const numerics::AdaptiveOptions& opts = {});

/// 5/3-law power-in-bucket (nested quadrature for the structure function).
double gaussian_pib_53(const Channel& ch, const numerics::AdaptiveOptions& opts = {});

struct HgSecondMoment {
  int a_in, b_in, a_out, b_out;
  std::complex<double> value;
};

/// Gauss-Legendre settings for the one-axis second moments. Points per axis
/// start at `order` and double until the largest entry change is within
/// abs_tol, failing past max_order.
struct MomentQuadrature {
  int order = 24;
  int max_order = 384;
  double abs_tol = 1e-10;
};

/// All one-axis square-law moments M_x(a_in, b_in; a_out, b_out) with input
/// indices <= max_in and output indices <= max_out, computed together.
class HgMomentTable {
public:
  HgMomentTable(int max_in, int max_out, const Channel& ch, const MomentQuadrature& quad = {});

  int max_in() const noexcept { return max_in_; }
  int max_out() const noexcept { return max_out_; }
  /// Points per axis of the accepted rule.
  int order() const noexcept { return order_; }

  std::complex<double> operator()(int a_in, int b_in, int a_out, int b_out) const {
    return values_[index(a_in, b_in, a_out, b_out)];
  }

private:
  std::size_t index(int ai, int bi, int ao, int bo) const {
    const auto ni = static_cast<std::size_t>(max_in_ + 1);
    const auto no = static_cast<std::size_t>(max_out_ + 1);
    return ((static_cast<std::size_t>(ai) * ni + static_cast<std::size_t>(bi)) * no + static_cast<std::size_t>(ao)) * no +
           static_cast<std::size_t>(bo);
  }

  int max_in_;
  int max_out_;
  int order_ = 0;
  std::vector<std::complex<double>> values_;
};

/// Single moment; builds a table just large enough to hold it.
HgSecondMoment hg_second_moment(int a_in, int b_in, int a_out, int b_out, const Channel& ch,
                                const MomentQuadrature& quad = {});

/// Default cap on the LG order for turbulent matrices.
inline constexpr int kDefaultLgOrderCap = 8;

/// Square-law coupling matrix over LG modes of order <= max_order, assembled
/// from HG moments through the LG/HG basis change.
CouplingMatrix lg_turb_matrix(int max_order, const Channel& ch, const MomentQuadrature& quad = {},
                              int order_cap = kDefaultLgOrderCap);

/// Per-axis factor for pixels `diff` apart:
/// (2 sqrt(Df)/N) int_0^1 (1 - xi) sinc(pi sqrt(Df) xi/N) exp(-xi^2 s^2/2rho0^2) cos(2 pi sqrt(Df) xi diff/N) dxi.
double fb_turb_axis(int diff, int grid, double fresnel_product, double side_over_rho0);

double fb_turb_eta(const FbPixel& from, const FbPixel& to, const Channel& ch);

CouplingMatrix fb_turb_matrix(int grid, const Channel& ch);

} // namespace fsoqkd::turbulence
