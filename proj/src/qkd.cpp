#include "fsoqkd/qkd.hpp"

#include <algorithm>
#include <cmath>

#include "fsoqkd/error.hpp"

namespace fsoqkd::qkd {

void QkdSystemParams::validate() const {
  require(visibility > 0.5 && visibility <= 1.0, "visibility must lie in (0.5, 1]");
  require(p_dc >= 0.0 && p_dc < 1.0, "dark-count probability must lie in [0, 1)");
  require(nu > 0.0, "bandwidth must be positive");
  require(f_ec >= 1.0, "error-correction inefficiency must be >= 1");
  require(sift > 0.0 && sift <= 1.0, "sifting factor must lie in (0, 1]");
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double effective_dark_count(double p_dc, double mu_c) {
  return p_dc - std::expm1(-mu_c);
}

double decoy_bb84_rate(const ModeLoad& load, const QkdSystemParams& params) {
  const double y0 = std::min(effective_dark_count(params.p_dc, load.mu_c), 1.0);
  const double e_det = (1.0 - params.visibility) / 2.0;
  const double e0 = 0.5;

  const double detect = -std::expm1(-load.eta * load.mu); // 1 - exp(-eta mu)
  const double q_mu = y0 + detect;
  if (q_mu <= 0.0) return 0.0;
  const double e_mu = (e0 * y0 + e_det * detect) / q_mu;

  const double y1 = y0 + load.eta - y0 * load.eta;
  if (y1 <= 0.0) return 0.0;
  const double q1 = load.mu * std::exp(-load.mu) * y1;
  const double e1 = (e0 * y0 + e_det * load.eta) / y1;

  const double rate =
      params.sift * (q1 * (1.0 - binary_entropy(e1)) - params.f_ec * q_mu * binary_entropy(e_mu));
  return std::max(0.0, rate);
}

double mode_rate(double eta, double p_t, double p_c, const QkdSystemParams& params) {
  return params.nu * decoy_bb84_rate({eta, p_t / params.nu, p_c / params.nu}, params);
}

} // namespace fsoqkd::qkd
