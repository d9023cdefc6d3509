#include "fsoqkd/modes.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "fsoqkd/error.hpp"

namespace fsoqkd {

namespace {
template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
} // namespace

std::string to_string(const ModeId& mode) {
  return std::visit(
      overloaded{
          [](const LgMode& m) { return "LG(" + std::to_string(m.p) + "," + std::to_string(m.l) + ")"; },
          [](const HgMode& m) { return "HG(" + std::to_string(m.n) + "," + std::to_string(m.m) + ")"; },
          [](const FbPixel& m) {
            return "FB(" + std::to_string(m.n) + "," + std::to_string(m.m) + ")/" + std::to_string(m.grid);
          },
      },
      mode);
}

void validate(const ModeId& mode) {
  std::visit(overloaded{
                 [](const LgMode& m) { require(m.p >= 0, "LG radial index must be non-negative"); },
                 [](const HgMode& m) { require(m.n >= 0 && m.m >= 0, "HG indices must be non-negative"); },
                 [](const FbPixel& m) {
                   require(m.grid >= 1, "FB grid size must be positive");
                   require(m.n >= 1 && m.n <= m.grid && m.m >= 1 && m.m <= m.grid,
                           "FB pixel index outside its grid");
                 },
             },
             mode);
}

std::vector<LgMode> lg_modes(int max_order) {
  require(max_order >= 1, "LG mode order cap must be >= 1");
  std::vector<LgMode> out;
  for (int n = 0; n < max_order; ++n)
    for (int l = n; l >= -n; l -= 2) out.push_back(LgMode{(n - (l < 0 ? -l : l)) / 2, l});
  return out;
}

std::vector<FbPixel> fb_pixels(int grid) {
  require(grid >= 1, "FB grid size must be positive");
  std::vector<FbPixel> out;
  out.reserve(static_cast<std::size_t>(grid * grid));
  for (int n = 1; n <= grid; ++n)
    for (int m = 1; m <= grid; ++m) out.push_back(FbPixel{n, m, grid});
  return out;
}

std::string to_string(Provenance p) {
  switch (p) {
  case Provenance::Vacuum: return "vacuum";
  case Provenance::SquareLaw: return "square-law";
  case Provenance::FiveThirds: return "5/3-law";
  }
  return "unknown";
}

CouplingMatrix::CouplingMatrix(std::vector<ModeId> modes, Eigen::MatrixXd eta, Provenance provenance)
    : modes_(std::move(modes)), eta_(std::move(eta)), provenance_(provenance) {
  const auto n = static_cast<Eigen::Index>(modes_.size());
  require(eta_.rows() == n && eta_.cols() == n, "coupling matrix dimension does not match mode list");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double& v = eta_(i, j);
      if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "coupling " << to_string(modes_[static_cast<std::size_t>(i)]) << " -> "
            << to_string(modes_[static_cast<std::size_t>(j)]) << " = " << v << " outside [0, 1]";
        throw InvariantViolation(msg.str());
      }
      v = std::clamp(v, 0.0, 1.0);
    }
    if (eta_.row(i).sum() > 1.0 + 1e-6) {
      throw InvariantViolation("coupling row for " + to_string(modes_[static_cast<std::size_t>(i)]) +
                               " sums above 1");
    }
  }
}

CouplingMatrix CouplingMatrix::leading(std::size_t count) const {
  require(count <= size(), "leading block larger than matrix");
  const auto c = static_cast<Eigen::Index>(count);
  return CouplingMatrix(std::vector<ModeId>(modes_.begin(), modes_.begin() + static_cast<std::ptrdiff_t>(count)),
                        eta_.topLeftCorner(c, c), provenance_);
}

void CouplingMatrix::write_table(std::ostream& os) const {
  os << "# from to eta (" << to_string(provenance_) << ")\n";
  char buf[64];
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.11e", (*this)(i, j));
      os << to_string(modes_[i]) << ' ' << to_string(modes_[j]) << ' ' << buf << '\n';
    }
  }
}

} // namespace fsoqkd
