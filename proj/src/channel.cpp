#include "fsoqkd/channel.hpp"

#include <cmath>
#include <numbers>

#include "fsoqkd/error.hpp"

namespace fsoqkd {

double coherence_length(double k, double cn2, double length) {
  require(cn2 >= 0.0, "cn2 must be non-negative");
  if (cn2 == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(1.09 * k * k * cn2 * length, -3.0 / 5.0);
}

double matched_square_side(double radius) {
  require(radius > 0.0, "pupil radius must be positive");
  return std::sqrt(std::numbers::pi / 2.0) * radius;
}

DerivedChannel derive(const ChannelConfig& cfg) {
  require(cfg.wavelength > 0.0 && std::isfinite(cfg.wavelength), "wavelength must be positive");
  require(cfg.length > 0.0 && std::isfinite(cfg.length), "path length must be positive");
  require(cfg.cn2 >= 0.0 && std::isfinite(cfg.cn2), "cn2 must be non-negative");

  DerivedChannel d{};
  d.k = 2.0 * std::numbers::pi / cfg.wavelength;
  const double lambda_l = cfg.wavelength * cfg.length;
  if (const auto* g = std::get_if<SoftGaussian>(&cfg.pupil)) {
    require(g->radius > 0.0, "pupil radius must be positive");
    const double r2 = g->radius * g->radius;
    d.area = std::numbers::pi * r2 / 2.0;
    const double root = d.k * r2 / (4.0 * cfg.length);
    d.fresnel_product = root * root;
  } else {
    const auto& sq = std::get<HardSquare>(cfg.pupil);
    require(sq.side > 0.0, "pupil side must be positive");
    d.area = sq.side * sq.side;
    const double root = d.area / lambda_l;
    d.fresnel_product = root * root;
  }
  d.rho0 = coherence_length(d.k, cfg.cn2, cfg.length);
  return d;
}

Channel::Channel(const ChannelConfig& cfg) : cfg_(cfg), derived_(derive(cfg)) {}

double Channel::radius() const {
  const auto* g = std::get_if<SoftGaussian>(&cfg_.pupil);
  require(g != nullptr, "operation requires a soft Gaussian pupil");
  return g->radius;
}

double Channel::side() const {
  const auto* sq = std::get_if<HardSquare>(&cfg_.pupil);
  require(sq != nullptr, "operation requires a hard square pupil");
  return sq->side;
}

Channel Channel::with_cn2(double cn2) const {
  ChannelConfig c = cfg_;
  c.cn2 = cn2;
  return Channel(c);
}

Channel gaussian_channel(double wavelength, double length, double cn2, double radius) {
  return Channel(ChannelConfig{wavelength, length, cn2, SoftGaussian{radius}});
}

Channel square_channel(double wavelength, double length, double cn2, double side) {
  return Channel(ChannelConfig{wavelength, length, cn2, HardSquare{side}});
}

} // namespace fsoqkd
