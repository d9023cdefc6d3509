#include "fsoqkd/commands.hpp"

#include <cmath>
#include <exception>
#include <ostream>

#include <spdlog/spdlog.h>

#include "fsoqkd/channel.hpp"
#include "fsoqkd/csv.hpp"
#include "fsoqkd/turbulence.hpp"
#include "fsoqkd/vacuum.hpp"
#include "parallel.hpp"

namespace fsoqkd {

namespace {

double square_side(const RunConfig& cfg) {
  return cfg.geometry.side.value_or(matched_square_side(cfg.geometry.radius));
}

// parallel_for must not let exceptions escape a worker thread; collect them
// per slot and rethrow the first one in input order.
template <class F> void run_points(std::size_t count, int jobs, const F& fn) {
  std::vector<std::exception_ptr> errors(count);
  detail::parallel_for(count, jobs, [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace

int cmd_transmissivity(const RunConfig& cfg, std::ostream& out, int jobs) {
  const auto points = cfg.points();
  const double side = square_side(cfg);
  std::vector<std::pair<double, double>> etas(points.size());
  run_points(points.size(), jobs, [&](std::size_t i) {
    const auto [length, cn2] = points[i];
    const auto sq = square_channel(cfg.geometry.wavelength, length, cn2, side);
    const auto ga = gaussian_channel(cfg.geometry.wavelength, length, cn2, cfg.geometry.radius);
    const FbPixel centre{1, 1, 1};
    const double fb = cn2 == 0.0 ? vacuum::fb_vacuum_eta(centre, centre, sq) : turbulence::fb_turb_eta(centre, centre, sq);
    etas[i] = {fb, turbulence::gaussian_pib_turb(ga)};
  });
  csv::write_row(out, {"L_m", "cn2", "eta_fb", "eta_gauss"});
  for (std::size_t i = 0; i < points.size(); ++i)
    csv::write_row(out, {csv::real(points[i].first), csv::real(points[i].second), csv::real(etas[i].first),
                         csv::real(etas[i].second)});
  return 0;
}

int cmd_rates(const RunConfig& cfg, std::ostream& out, int jobs) {
  planner::ScanOptions opts;
  opts.geometry = cfg.geometry;
  opts.params = cfg.qkd;
  opts.envelope = cfg.envelope;
  opts.jobs = jobs;
  const auto rows = planner::scan(cfg.points(), cfg.mode_sets, opts);

  int failed = 0;
  csv::write_row(out, {"L_m", "cn2", "mode_set", "config", "rate_bps", "capacity_bps"});
  for (const auto& r : rows) {
    std::vector<std::string> f{csv::real(r.length), csv::real(r.cn2), planner::to_string(r.mode_set)};
    if (!r.error.empty()) {
      ++failed;
      f.insert(f.end(), {csv::field("error: " + r.error), "", ""});
    } else {
      f.push_back(r.config ? planner::to_string(*r.config) : "");
      f.push_back(csv::real(r.total_rate));
      f.push_back(r.capacity ? csv::real(*r.capacity) : "");
    }
    csv::write_row(out, f);
  }
  if (failed) spdlog::error("{} of {} rate points failed", failed, rows.size());
  return failed ? 1 : 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& summary, int jobs) {
  struct Row {
    double square, five_thirds, vac;
    bool pass;
  };
  const auto points = cfg.validation_points();
  std::vector<Row> rows(points.size());
  run_points(points.size(), jobs, [&](std::size_t i) {
    const auto [length, cn2] = points[i];
    const auto ch = gaussian_channel(cfg.geometry.wavelength, length, cn2, cfg.geometry.radius);
    Row r{};
    r.vac = vacuum::lg_vacuum_eta(1, ch.fresnel_product());
    r.square = turbulence::gaussian_pib_turb(ch);
    if (cn2 == 0.0) {
      r.five_thirds = turbulence::gaussian_pib(turbulence::StructureFunction::FiveThirds, ch);
      r.pass = std::abs(r.square - r.vac) <= 1e-4 && std::abs(r.five_thirds - r.vac) <= 1e-4;
    } else {
      r.five_thirds = turbulence::gaussian_pib_53(ch);
      const double slack = 1e-9 * r.vac;
      r.pass = r.square <= r.five_thirds + slack && r.five_thirds <= r.vac + slack;
    }
    rows[i] = r;
  });

  std::size_t passed = 0;
  csv::write_row(out, {"L_m", "cn2", "eta_square", "eta_53", "eta_vac", "rel_gap", "status"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    passed += r.pass ? 1 : 0;
    const double gap = r.five_thirds > 0.0 ? (r.five_thirds - r.square) / r.five_thirds : 0.0;
    csv::write_row(out, {csv::real(points[i].first), csv::real(points[i].second), csv::real(r.square),
                         csv::real(r.five_thirds), csv::real(r.vac), csv::real(gap), r.pass ? "PASS" : "FAIL"});
  }
  summary << "validate: " << passed << "/" << rows.size() << " points satisfy square <= 5/3 <= vacuum\n";
  return passed == rows.size() ? 0 : 1;
}

} // namespace fsoqkd
