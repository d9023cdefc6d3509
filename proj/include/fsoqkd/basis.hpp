#pragma once

#include <Eigen/Dense>

namespace fsoqkd::numerics {

/// Unitary change of basis between the N+1 Hermite-Gauss modes HG(n, N-n)
/// and the N+1 Laguerre-Gauss modes LG(p, l) of total order N = 2p + |l|.
///
/// Row r is LG(p, l) with l = N - 2r and p = (N - |l|) / 2; column c is
/// HG(N - c, c). With both families sharing a Gaussian waist w,
///
///   LG_{p,l}(x, y) = sum_c coeffs(r, c) * HG_{N-c}(x) HG_c(y),
///
/// where LG uses the positive-normalized Laguerre form
/// sqrt(p!/(pi (p+|l|)!)) r^|l| L_p^|l|(r^2) exp(-r^2/2 + i l theta)
/// (unit waist) and HG uses products of orthonormal Hermite functions.
struct BasisChangeMatrix {
  int order = 0;
  Eigen::MatrixXcd coeffs;

  static int lg_azimuthal(int order, int row) { return order - 2 * row; }
  static int lg_radial(int order, int row);
  /// Row index of LG(p, l) within its order block.
  static int lg_row(int p, int l);
};

/// Builds the order-N basis change from the astigmatic mode-converter
/// coefficients b(n, m, k) = sqrt((N-k)! k! / (2^N n! m!)) [t^k](1-t)^n (1+t)^m,
/// with the phase (-1)^p (-i)^k fixed by grid-overlap checks against sampled
/// mode patterns.
BasisChangeMatrix lg_hg_unitary(int order);

} // namespace fsoqkd::numerics
