#pragma once

#include <iosfwd>

#include "fsoqkd/config.hpp"

namespace fsoqkd {

/// Each command writes its CSV to `out` and returns the process exit code.

/// Columns L_m,cn2,eta_fb,eta_gauss: the single focused beam (N = 1) and the
/// Gaussian power-in-bucket for every configured (L, cn2). Square pupil side
/// defaults to the area-matched value.
int cmd_transmissivity(const RunConfig& cfg, std::ostream& out, int jobs = 1);

/// Columns L_m,cn2,mode_set,config,rate_bps,capacity_bps, one row per
/// (L, cn2, mode set). A failed point keeps its row: config holds
/// "error: <message>" and both numeric columns are empty. Returns 1 if any
/// row failed.
int cmd_rates(const RunConfig& cfg, std::ostream& out, int jobs = 1);

/// Columns L_m,cn2,eta_square,eta_53,eta_vac,rel_gap,status over
/// RunConfig::validation_points(). Each point
/// passes when eta_square <= eta_53 <= eta_vac (cn2 > 0) or all three agree
/// to 1e-4 (cn2 = 0). rel_gap = (eta_53 - eta_square) / eta_53. Prints a
/// summary line to `summary` and returns 1 if any point failed.
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& summary, int jobs = 1);

} // namespace fsoqkd
