#pragma once

#include <limits>
#include <variant>

namespace fsoqkd {

/// Soft Gaussian pupil, field transmission exp(-|rho|^2 / R^2).
struct SoftGaussian {
  double radius; ///< effective radius R [m]
};

/// Unapodized s x s square pupil.
struct HardSquare {
  double side; ///< side length s [m]
};

/// Pupil geometry shared by transmitter and receiver.
using PupilSpec = std::variant<SoftGaussian, HardSquare>;

/// Independent variables of a line-of-sight link. SI units throughout.
struct ChannelConfig {
  double wavelength = 1.55e-6; ///< [m]
  double length = 1.0e3;       ///< path length L [m]
  double cn2 = 0.0;            ///< turbulence strength [m^-2/3]; 0 is vacuum
  PupilSpec pupil = SoftGaussian{0.1};
};

/// Scalars derived once from a ChannelConfig.
struct DerivedChannel {
  double k;               ///< wave number [rad/m]
  double area;            ///< pupil area A [m^2]
  double fresnel_product; ///< D_f, dimensionless
  double rho0;            ///< spherical-wave coherence length [m]; +inf in vacuum
};

/// Validates `cfg` and computes k, A, D_f and rho0.
/// Throws InvalidArgument for non-positive wavelength/length/pupil size or
/// negative cn2.
DerivedChannel derive(const ChannelConfig& cfg);

/// Side of the square pupil whose area equals that of a Gaussian pupil of
/// effective radius R: s = sqrt(pi/2) R.
double matched_square_side(double radius);

/// (1.09 k^2 Cn^2 L)^(-3/5); +inf when cn2 == 0.
double coherence_length(double k, double cn2, double length);

/// Validated config bundled with its derived quantities. Immutable.
class Channel {
public:
  explicit Channel(const ChannelConfig& cfg);

  const ChannelConfig& config() const noexcept { return cfg_; }
  const DerivedChannel& derived() const noexcept { return derived_; }

  double wavelength() const noexcept { return cfg_.wavelength; }
  double length() const noexcept { return cfg_.length; }
  double cn2() const noexcept { return cfg_.cn2; }
  double k() const noexcept { return derived_.k; }
  double fresnel_product() const noexcept { return derived_.fresnel_product; }
  double rho0() const noexcept { return derived_.rho0; }
  bool is_vacuum() const noexcept { return cfg_.cn2 == 0.0; }

  bool has_gaussian_pupil() const noexcept {
    return std::holds_alternative<SoftGaussian>(cfg_.pupil);
  }
  bool has_square_pupil() const noexcept {
    return std::holds_alternative<HardSquare>(cfg_.pupil);
  }
  /// Gaussian pupil radius; throws InvalidArgument for square pupils.
  double radius() const;
  /// Square pupil side; throws InvalidArgument for Gaussian pupils.
  double side() const;

  /// Same link with a different turbulence strength.
  Channel with_cn2(double cn2) const;

private:
  ChannelConfig cfg_;
  DerivedChannel derived_;
};

/// Convenience constructors for the matched-pupil comparison.
Channel gaussian_channel(double wavelength, double length, double cn2, double radius);
Channel square_channel(double wavelength, double length, double cn2, double side);

} // namespace fsoqkd
