#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsoqkd/channel.hpp"
#include "fsoqkd/modes.hpp"
#include "fsoqkd/qkd.hpp"
#include "fsoqkd/turbulence.hpp"

namespace fsoqkd::planner {

enum class ModeSet { LG, FB, GaussianPib };
std::string to_string(ModeSet set);

/// Mode set plus its size parameter: grid N for FB, order cap Q for LG,
/// unused for the single-beam power-in-bucket operation.
struct Configuration {
  ModeSet set = ModeSet::FB;
  int size = 1;
  bool operator==(const Configuration&) const = default;
};
/// "N=8", "Q=5" or "PIB".
std::string to_string(const Configuration& config);

/// Per-mode mean photon numbers; modes sharing an orbit id share a value.
struct PowerAllocation {
  std::vector<double> mu;
  std::vector<int> orbit;
};

struct RatePoint {
  double length = 0.0;
  double cn2 = 0.0;
  ModeSet mode_set = ModeSet::FB;
  std::optional<Configuration> config;
  double total_rate = 0.0; ///< bits/s
  std::optional<double> capacity; ///< bits/s
  PowerAllocation allocation;
  std::string error; ///< non-empty when the point failed
};

/// sum_{q' != q} P_{q'} eta(q' -> q) [photons/s], with P = nu * mu.
double crosstalk_power(const PowerAllocation& alloc, const CouplingMatrix& matrix, std::size_t mode, double nu);

/// Orbit ids under the dihedral symmetry of the N x N grid, row-major order.
std::vector<int> fb_orbits(int grid);
/// Orbit ids grouping LG modes by (order, |l|).
std::vector<int> lg_orbits(const std::vector<ModeId>& modes);
/// One class per mode.
std::vector<int> singleton_orbits(std::size_t count);

struct OptimizerOptions {
  double mu_min = 1e-6;
  double mu_max = 1.5;
  double rel_tol = 1e-6;  ///< sweep stops below this relative improvement
  int max_sweeps = 100;
  int bracket_points = 24; ///< log-spaced coarse grid before golden section
  double golden_tol = 1e-8; ///< absolute mu tolerance of the golden section
};

struct Optimum {
  PowerAllocation allocation;
  double total_rate = 0.0; ///< bits/s
};

/// Best (mu, rate [bits/s]) for one isolated mode with fixed cross-talk.
std::pair<double, double> single_mode_optimum(double eta, double mu_c, const qkd::QkdSystemParams& params,
                                              const OptimizerOptions& opts = {});

/// Total rate [bits/s] of an allocation.
double total_rate(const CouplingMatrix& matrix, const std::vector<double>& mu, const qkd::QkdSystemParams& params);

/// Multi-start coordinate ascent over orbit-class values.
Optimum optimize_allocation(const CouplingMatrix& matrix, const std::vector<int>& orbits,
                            const qkd::QkdSystemParams& params, const OptimizerOptions& opts = {});

struct EnvelopeOptions {
  int n_max = 8;
  int q_max = 8;
  int lg_order_cap = turbulence::kDefaultLgOrderCap; ///< turbulent LG matrices beyond this are rejected
  OptimizerOptions optimizer;
  turbulence::MomentQuadrature quadrature;
};

/// Envelope winner plus every candidate configuration it maximized over.
struct Envelope {
  RatePoint best;
  std::vector<RatePoint> candidates;
};

Envelope fb_envelope(const Channel& ch, const qkd::QkdSystemParams& params, const EnvelopeOptions& opts = {});
Envelope lg_envelope(const Channel& ch, const qkd::QkdSystemParams& params, const EnvelopeOptions& opts = {});

/// Geometry shared by every point of a scan. The FB side defaults to the
/// area-matched square.
struct ScanGeometry {
  double wavelength = 1.55e-6;
  double radius = 0.1;
  std::optional<double> side;
};

struct ScanOptions {
  ScanGeometry geometry;
  qkd::QkdSystemParams params;
  EnvelopeOptions envelope;
  int jobs = 1;
};

/// One RatePoint per (L, cn2) x mode set, ordered as the inputs. Failures are
/// recorded in RatePoint::error and do not stop the scan.
std::vector<RatePoint> scan(const std::vector<std::pair<double, double>>& points, const std::vector<ModeSet>& sets,
                            const ScanOptions& opts);

} // namespace fsoqkd::planner
