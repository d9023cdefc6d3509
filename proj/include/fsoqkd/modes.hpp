#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace fsoqkd {

struct LgMode {
  int p = 0; ///< radial index
  int l = 0; ///< azimuthal index
  /// q = 2p + |l| + 1
  int order() const noexcept { return 2 * p + (l < 0 ? -l : l) + 1; }
  bool operator==(const LgMode&) const = default;
};

struct HgMode {
  int n = 0;
  int m = 0;
  bool operator==(const HgMode&) const = default;
};

/// Focused beam aimed at pixel (n, m) of an N x N receiver array; 1-based.
struct FbPixel {
  int n = 1;
  int m = 1;
  int grid = 1;
  bool operator==(const FbPixel&) const = default;
};

using ModeId = std::variant<LgMode, HgMode, FbPixel>;

std::string to_string(const ModeId& mode);
void validate(const ModeId& mode);

/// LG modes with order q <= max_order, grouped by order and, within an
/// order, by descending l.
std::vector<LgMode> lg_modes(int max_order);
/// All pixels of an N x N array in row-major order.
std::vector<FbPixel> fb_pixels(int grid);

enum class Provenance { Vacuum, SquareLaw, FiveThirds };
std::string to_string(Provenance p);

/// Average power transmissivities eta(from -> to) between the modes of one
/// configuration. Row = transmitted mode, column = received mode; the
/// diagonal is signal, the rest cross-talk.
class CouplingMatrix {
public:
  /// Entries are validated: each must lie in [0, 1] (values within 1e-12 of
  /// the bounds are clamped) and each row must sum to at most 1 + 1e-6.
  CouplingMatrix(std::vector<ModeId> modes, Eigen::MatrixXd eta, Provenance provenance);

  const std::vector<ModeId>& modes() const noexcept { return modes_; }
  const Eigen::MatrixXd& eta() const noexcept { return eta_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return modes_.size(); }
  double operator()(std::size_t from, std::size_t to) const { return eta_(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)); }
  Eigen::VectorXd diagonal() const { return eta_.diagonal(); }

  /// Leading sub-block over the first `count` modes.
  CouplingMatrix leading(std::size_t count) const;

  /// Plain-text dump: a '#' header line, then one "from to eta" row per pair,
  /// eta in 12-significant-digit scientific notation.
  void write_table(std::ostream& os) const;

private:
  std::vector<ModeId> modes_;
  Eigen::MatrixXd eta_;
  Provenance provenance_;
};

} // namespace fsoqkd
