#pragma once

#include <span>
#include <vector>

#include "fsoqkd/channel.hpp"
#include "fsoqkd/modes.hpp"

namespace fsoqkd::vacuum {

/// Vacuum transmissivity of an LG mode of order q through soft Gaussian
/// pupils: eta_q = ((1 + 2Df - sqrt(1 + 4Df)) / (2Df))^q.
double lg_vacuum_eta(int order, double fresnel_product);

/// Singular-mode geometry of the soft-pupil channel.
///   amplitude: sqrt(eta_1), the per-axis singular-value ratio;
///   waist:     Gaussian width a of the input/output mode envelopes
///              exp(-r^2 / 2a^2), a^2 = R^2 (1 - amplitude^2) / (2 (1 + amplitude^2)).
struct GaussianModeBasis {
  double amplitude;
  double waist;
};
GaussianModeBasis gaussian_mode_basis(const Channel& ch);

/// Number of LG modes with order <= max_order: Q(Q+1)/2.
int lg_mode_count(int max_order);

/// sum_q q * eta_q, truncated once q eta_q < 1e-15 Df; equals Df analytically.
double lg_vacuum_sum(double fresnel_product);

/// Highest order kept by the series truncation rule for a given Df.
int lg_series_cutoff(double fresnel_product);

/// Diagonal vacuum coupling matrix over LG modes of order <= max_order.
CouplingMatrix lg_vacuum_matrix(int max_order, const Channel& ch);

/// Per-axis power-in-bucket factor for pixels `diff` apart in an N-pixel row:
/// (sqrt(Df)/N) * integral_{diff-1/2}^{diff+1/2} sinc^2(pi sqrt(Df) xi / N) dxi.
double fb_vacuum_axis(int diff, int grid, double fresnel_product);

/// eta(from -> to) for flat-top focused beams through hard square pupils.
double fb_vacuum_eta(const FbPixel& from, const FbPixel& to, const Channel& ch);

/// Full N^2 x N^2 matrix, assembled from the 2N-1 distinct axis factors.
CouplingMatrix fb_vacuum_matrix(int grid, const Channel& ch);

/// -nu * sum log2(1 - eta) [bits/s]. Each eta must lie in [0, 1).
double qkd_capacity(std::span<const double> etas, double nu);

/// Capacity of the full vacuum LG spectrum, counting each order q with its
/// degeneracy q, truncated by the same rule as lg_vacuum_sum.
double lg_vacuum_capacity(double fresnel_product, double nu);

/// Capacity over LG orders 1..max_order only (with degeneracy).
double lg_vacuum_capacity(double fresnel_product, double nu, int max_order);

} // namespace fsoqkd::vacuum
