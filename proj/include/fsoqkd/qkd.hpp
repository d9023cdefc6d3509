#pragma once

namespace fsoqkd::qkd {

struct QkdSystemParams {
  double visibility = 0.99;  ///< V in (0.5, 1]
  double p_dc = 1e-6;        ///< effective dark-count probability per pulse
  double nu = 1e10;          ///< optical bandwidth [modes/s]
  double f_ec = 1.0;         ///< error-correction inefficiency, >= 1
  double sift = 0.5;         ///< sifting factor in (0, 1]

  /// Throws InvalidArgument when any field is outside its range.
  void validate() const;
};

/// Per-mode operating point, in mean photons per pulse.
struct ModeLoad {
  double eta = 0.0;  ///< signal transmissivity
  double mu = 0.0;   ///< signal mean photon number (P_T / nu)
  double mu_c = 0.0; ///< cross-talk mean photon number at this detector (P_C / nu)
};

double binary_entropy(double x);

/// Cross-talk counted as extra dark clicks: p_dc + 1 - exp(-mu_c).
double effective_dark_count(double p_dc, double mu_c);

/// Asymptotic decoy-state BB84 key rate (infinite decoys) [bits/pulse].
double decoy_bb84_rate(const ModeLoad& load, const QkdSystemParams& params);

/// nu * decoy_bb84_rate({eta, P_T/nu, P_C/nu}) [bits/s].
double mode_rate(double eta, double p_t, double p_c, const QkdSystemParams& params);

} // namespace fsoqkd::qkd
