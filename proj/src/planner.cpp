#include "fsoqkd/planner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>

#include <spdlog/spdlog.h>

#include "fsoqkd/error.hpp"
#include "fsoqkd/vacuum.hpp"
#include "parallel.hpp"

namespace fsoqkd::planner {

std::string to_string(ModeSet set) {
  switch (set) {
  case ModeSet::LG: return "LG";
  case ModeSet::FB: return "FB";
  case ModeSet::GaussianPib: return "PIB";
  }
  return "unknown";
}

std::string to_string(const Configuration& config) {
  switch (config.set) {
  case ModeSet::LG: return "Q=" + std::to_string(config.size);
  case ModeSet::FB: return "N=" + std::to_string(config.size);
  case ModeSet::GaussianPib: return "PIB";
  }
  return "unknown";
}

double crosstalk_power(const PowerAllocation& alloc, const CouplingMatrix& matrix, std::size_t mode, double nu) {
  require(alloc.mu.size() == matrix.size(), "allocation and coupling matrix sizes differ");
  require(mode < matrix.size(), "mode index outside the coupling matrix");
  double sum = 0.0;
  for (std::size_t from = 0; from < matrix.size(); ++from)
    if (from != mode) sum += nu * alloc.mu[from] * matrix(from, mode);
  return sum;
}

namespace {

// Assigns consecutive ids to keys in order of first appearance.
template <class Key> std::vector<int> number_keys(const std::vector<Key>& keys) {
  std::map<Key, int> ids;
  std::vector<int> out;
  out.reserve(keys.size());
  for (const auto& k : keys) {
    const auto [it, inserted] = ids.emplace(k, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

} // namespace

std::vector<int> fb_orbits(int grid) {
  std::vector<std::pair<int, int>> keys;
  for (const auto& px : fb_pixels(grid)) {
    const int x = std::min(px.n, grid + 1 - px.n);
    const int y = std::min(px.m, grid + 1 - px.m);
    keys.emplace_back(std::min(x, y), std::max(x, y));
  }
  return number_keys(keys);
}

std::vector<int> lg_orbits(const std::vector<ModeId>& modes) {
  std::vector<std::pair<int, int>> keys;
  for (const auto& mode : modes) {
    const auto* lg = std::get_if<LgMode>(&mode);
    require(lg != nullptr, "LG orbit classes need LG modes");
    keys.emplace_back(lg->order(), std::abs(lg->l));
  }
  return number_keys(keys);
}

std::vector<int> singleton_orbits(std::size_t count) {
  std::vector<int> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<int>(i);
  return out;
}

namespace {

// Maximizes f over [mu_min, mu_max]: coarse log grid, then golden section
// around the best grid point. `incumbent` is returned unless beaten.
template <class F>
std::pair<double, double> line_search(const F& f, double incumbent, const OptimizerOptions& opts) {
  const int n = std::max(opts.bracket_points, 3);
  const double ratio = std::log(opts.mu_max / opts.mu_min) / (n - 1);
  std::vector<double> grid(static_cast<std::size_t>(n));
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = i == n - 1 ? opts.mu_max : opts.mu_min * std::exp(ratio * i);
    const double v = f(grid[static_cast<std::size_t>(i)]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double best_x = grid[static_cast<std::size_t>(best)];

  double lo = grid[static_cast<std::size_t>(std::max(best - 1, 0))];
  double hi = grid[static_cast<std::size_t>(std::min(best + 1, n - 1))];
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > opts.golden_tol) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  if (f1 > best_val) best_val = f1, best_x = x1;
  if (f2 > best_val) best_val = f2, best_x = x2;

  const double inc_val = f(incumbent);
  if (inc_val >= best_val) return {incumbent, inc_val};
  return {best_x, best_val};
}

} // namespace

std::pair<double, double> single_mode_optimum(double eta, double mu_c, const qkd::QkdSystemParams& params,
                                              const OptimizerOptions& opts) {
  const auto rate = [&](double mu) { return params.nu * qkd::decoy_bb84_rate({eta, mu, mu_c}, params); };
  return line_search(rate, opts.mu_min, opts);
}

double total_rate(const CouplingMatrix& matrix, const std::vector<double>& mu, const qkd::QkdSystemParams& params) {
  require(mu.size() == matrix.size(), "allocation and coupling matrix sizes differ");
  double sum = 0.0;
  for (std::size_t q = 0; q < matrix.size(); ++q) {
    double mu_c = 0.0;
    for (std::size_t from = 0; from < matrix.size(); ++from)
      if (from != q) mu_c += mu[from] * matrix(from, q);
    sum += qkd::decoy_bb84_rate({matrix(q, q), mu[q], mu_c}, params);
  }
  return params.nu * sum;
}

namespace {

class Ascent {
public:
  Ascent(const CouplingMatrix& matrix, const std::vector<int>& orbits, const qkd::QkdSystemParams& params,
         const OptimizerOptions& opts)
      : params_(params), opts_(opts), orbits_(orbits), diag_(matrix.diagonal()) {
    off_ = matrix.eta();
    off_.diagonal().setZero();
    classes_ = orbits.empty() ? 0 : *std::max_element(orbits.begin(), orbits.end()) + 1;
    members_.assign(static_cast<std::size_t>(classes_), {});
    for (std::size_t i = 0; i < orbits.size(); ++i) members_[static_cast<std::size_t>(orbits[i])].push_back(i);
    // Cross-talk delivered by one unit of mu on every member of a class.
    unit_.resize(static_cast<std::size_t>(classes_));
    for (int c = 0; c < classes_; ++c) {
      Eigen::VectorXd ind = Eigen::VectorXd::Zero(off_.rows());
      for (auto i : members_[static_cast<std::size_t>(c)]) ind(static_cast<Eigen::Index>(i)) = 1.0;
      unit_[static_cast<std::size_t>(c)] = off_.transpose() * ind;
    }
  }

  int classes() const { return classes_; }
  const std::vector<std::size_t>& members(int c) const { return members_[static_cast<std::size_t>(c)]; }
  double diag(std::size_t i) const { return diag_(static_cast<Eigen::Index>(i)); }

  double evaluate(const Eigen::VectorXd& mu) const {
    const Eigen::VectorXd mu_c = off_.transpose() * mu;
    double sum = 0.0;
    for (Eigen::Index q = 0; q < mu.size(); ++q) sum += qkd::decoy_bb84_rate({diag_(q), mu(q), mu_c(q)}, params_);
    return params_.nu * sum;
  }

  // Coordinate ascent from per-class start values; returns (class values, rate).
  std::pair<std::vector<double>, double> run(std::vector<double> values) const {
    Eigen::VectorXd mu = expand(values);
    double current = evaluate(mu);
    for (int sweep = 0; sweep < opts_.max_sweeps; ++sweep) {
      const double before = current;
      for (int c = 0; c < classes_; ++c) {
        const auto& mem = members_[static_cast<std::size_t>(c)];
        const double old = values[static_cast<std::size_t>(c)];
        const Eigen::VectorXd base = off_.transpose() * mu - old * unit_[static_cast<std::size_t>(c)];
        const auto& unit = unit_[static_cast<std::size_t>(c)];
        const auto f = [&](double t) {
          double sum = 0.0;
          for (Eigen::Index q = 0; q < mu.size(); ++q) {
            const bool member = orbits_[static_cast<std::size_t>(q)] == c;
            sum += qkd::decoy_bb84_rate({diag_(q), member ? t : mu(q), base(q) + t * unit(q)}, params_);
          }
          return params_.nu * sum;
        };
        const auto [t, val] = line_search(f, old, opts_);
        values[static_cast<std::size_t>(c)] = t;
        for (auto i : mem) mu(static_cast<Eigen::Index>(i)) = t;
        current = val;
      }
      if (current - before <= opts_.rel_tol * std::max(std::abs(current), 1e-300)) break;
    }
    return {values, evaluate(mu)};
  }

  Eigen::VectorXd expand(const std::vector<double>& values) const {
    Eigen::VectorXd mu(static_cast<Eigen::Index>(orbits_.size()));
    for (std::size_t i = 0; i < orbits_.size(); ++i) mu(static_cast<Eigen::Index>(i)) = values[static_cast<std::size_t>(orbits_[i])];
    return mu;
  }

private:
  qkd::QkdSystemParams params_;
  OptimizerOptions opts_;
  std::vector<int> orbits_;
  Eigen::VectorXd diag_;
  Eigen::MatrixXd off_;
  int classes_ = 0;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<Eigen::VectorXd> unit_;
};

} // namespace

Optimum optimize_allocation(const CouplingMatrix& matrix, const std::vector<int>& orbits,
                            const qkd::QkdSystemParams& params, const OptimizerOptions& opts) {
  require(orbits.size() == matrix.size(), "orbit map and coupling matrix sizes differ");
  require(opts.mu_min > 0.0 && opts.mu_max > opts.mu_min, "invalid mu search interval");
  params.validate();
  const Ascent ascent(matrix, orbits, params, opts);
  const auto classes = static_cast<std::size_t>(ascent.classes());

  std::vector<std::vector<double>> starts;
  starts.emplace_back(classes, std::clamp(0.05, opts.mu_min, opts.mu_max));
  starts.emplace_back(classes, std::clamp(0.5, opts.mu_min, opts.mu_max));
  std::vector<double> isolated(classes);
  for (std::size_t c = 0; c < classes; ++c)
    isolated[c] = single_mode_optimum(ascent.diag(ascent.members(static_cast<int>(c)).front()), 0.0, params, opts).first;
  starts.push_back(std::move(isolated));

  Optimum best;
  best.total_rate = -1.0;
  for (const auto& start : starts) {
    auto [values, rate] = ascent.run(start);
    if (rate > best.total_rate) {
      const auto mu = ascent.expand(values);
      best.allocation.mu.assign(mu.data(), mu.data() + mu.size());
      best.total_rate = rate;
    }
  }
  best.allocation.orbit = orbits;
  return best;
}

namespace {

RatePoint make_point(const Channel& ch, ModeSet set, Configuration config, Optimum opt) {
  RatePoint p;
  p.length = ch.length();
  p.cn2 = ch.cn2();
  p.mode_set = set;
  p.config = config;
  p.total_rate = opt.total_rate;
  p.allocation = std::move(opt.allocation);
  return p;
}

std::vector<double> diagonal_of(const CouplingMatrix& m) {
  const auto d = m.diagonal();
  return {d.data(), d.data() + d.size()};
}

void require_dominance(const Envelope& env) {
  for (const auto& c : env.candidates)
    if (c.total_rate > env.best.total_rate)
      throw InvariantViolation("envelope rate below candidate " + to_string(*c.config));
}

} // namespace

Envelope fb_envelope(const Channel& ch, const qkd::QkdSystemParams& params, const EnvelopeOptions& opts) {
  require(ch.has_square_pupil(), "focused beams require hard square pupils");
  require(opts.n_max >= 1, "FB grid cap must be >= 1");
  Envelope env;
  std::vector<double> best_diag;
  for (int n = 1; n <= opts.n_max; ++n) {
    const auto matrix = ch.is_vacuum() ? vacuum::fb_vacuum_matrix(n, ch) : turbulence::fb_turb_matrix(n, ch);
    auto opt = optimize_allocation(matrix, fb_orbits(n), params, opts.optimizer);
    spdlog::debug("fb L={} cn2={} N={} rate={}", ch.length(), ch.cn2(), n, opt.total_rate);
    auto point = make_point(ch, ModeSet::FB, {ModeSet::FB, n}, std::move(opt));
    point.capacity = vacuum::qkd_capacity(diagonal_of(matrix), params.nu);
    if (env.candidates.empty() || point.total_rate > env.best.total_rate) env.best = point;
    env.candidates.push_back(std::move(point));
  }
  require_dominance(env);
  return env;
}

namespace {

RatePoint pib_point(const Channel& ch, const qkd::QkdSystemParams& params, const OptimizerOptions& opts) {
  const double eta = turbulence::gaussian_pib_turb(ch);
  const auto [mu, rate] = single_mode_optimum(eta, 0.0, params, opts);
  RatePoint p;
  p.length = ch.length();
  p.cn2 = ch.cn2();
  p.mode_set = ModeSet::LG;
  p.config = Configuration{ModeSet::GaussianPib, 1};
  p.total_rate = rate;
  p.allocation = {{mu}, {0}};
  const std::vector<double> etas{eta};
  p.capacity = vacuum::qkd_capacity(etas, params.nu);
  return p;
}

// Vacuum LG modes are orthogonal: every order runs at its isolated optimum,
// and orders are added until they stop contributing.
Envelope lg_vacuum_envelope(const Channel& ch, const qkd::QkdSystemParams& params, const OptimizerOptions& opts) {
  const double df = ch.fresnel_product();
  const int cutoff = vacuum::lg_series_cutoff(df);
  Envelope env;
  double total = 0.0;
  PowerAllocation alloc;
  int used = 0;
  for (int q = 1; q <= cutoff; ++q) {
    const auto [mu, rate] = single_mode_optimum(vacuum::lg_vacuum_eta(q, df), 0.0, params, opts);
    if (rate <= 0.0) break;
    total += q * rate;
    used = q;
    for (int i = 0; i < q; ++i) {
      alloc.mu.push_back(mu);
      alloc.orbit.push_back(q - 1);
    }
  }
  used = std::max(used, 1);
  if (alloc.mu.empty()) alloc = {{opts.mu_min}, {0}};
  RatePoint p = make_point(ch, ModeSet::LG, {ModeSet::LG, used}, {std::move(alloc), total});
  p.capacity = vacuum::lg_vacuum_capacity(df, params.nu);
  env.best = p;
  env.candidates.push_back(std::move(p));
  env.candidates.push_back(pib_point(ch, params, opts));
  if (env.candidates.back().total_rate > env.best.total_rate) env.best = env.candidates.back();
  require_dominance(env);
  return env;
}

} // namespace

Envelope lg_envelope(const Channel& ch, const qkd::QkdSystemParams& params, const EnvelopeOptions& opts) {
  require(ch.has_gaussian_pupil(), "LG modes require soft Gaussian pupils");
  require(opts.q_max >= 1, "LG order cap must be >= 1");
  params.validate();
  if (ch.is_vacuum()) return lg_vacuum_envelope(ch, params, opts.optimizer);

  Envelope env;
  const auto full = turbulence::lg_turb_matrix(opts.q_max, ch, opts.quadrature, opts.lg_order_cap);
  for (int q = 1; q <= opts.q_max; ++q) {
    const auto matrix = full.leading(static_cast<std::size_t>(vacuum::lg_mode_count(q)));
    auto opt = optimize_allocation(matrix, lg_orbits(matrix.modes()), params, opts.optimizer);
    spdlog::debug("lg L={} cn2={} Q={} rate={}", ch.length(), ch.cn2(), q, opt.total_rate);
    auto point = make_point(ch, ModeSet::LG, {ModeSet::LG, q}, std::move(opt));
    point.capacity = vacuum::qkd_capacity(diagonal_of(matrix), params.nu);
    if (env.candidates.empty() || point.total_rate > env.best.total_rate) env.best = point;
    env.candidates.push_back(std::move(point));
  }
  env.candidates.push_back(pib_point(ch, params, opts.optimizer));
  if (env.candidates.back().total_rate > env.best.total_rate) env.best = env.candidates.back();
  require_dominance(env);
  return env;
}

std::vector<RatePoint> scan(const std::vector<std::pair<double, double>>& points, const std::vector<ModeSet>& sets,
                            const ScanOptions& opts) {
  require(!points.empty(), "scan needs at least one (L, cn2) point");
  require(!sets.empty(), "scan needs at least one mode set");
  opts.params.validate();
  const double side = opts.geometry.side.value_or(matched_square_side(opts.geometry.radius));

  std::vector<RatePoint> out(points.size() * sets.size());
  const auto run_one = [&](std::size_t idx) {
    const auto [length, cn2] = points[idx / sets.size()];
    const ModeSet set = sets[idx % sets.size()];
    RatePoint& row = out[idx];
    row.length = length;
    row.cn2 = cn2;
    row.mode_set = set;
    try {
      switch (set) {
      case ModeSet::FB:
        row = fb_envelope(square_channel(opts.geometry.wavelength, length, cn2, side), opts.params, opts.envelope).best;
        break;
      case ModeSet::LG:
        row = lg_envelope(gaussian_channel(opts.geometry.wavelength, length, cn2, opts.geometry.radius), opts.params,
                          opts.envelope)
                  .best;
        break;
      case ModeSet::GaussianPib:
        row = pib_point(gaussian_channel(opts.geometry.wavelength, length, cn2, opts.geometry.radius), opts.params,
                        opts.envelope.optimizer);
        row.mode_set = ModeSet::GaussianPib;
        break;
      }
      spdlog::info("L={:.6g} m cn2={:.3g} {}: {} -> {:.6g} bit/s", length, cn2, to_string(set),
                   row.config ? to_string(*row.config) : "-", row.total_rate);
    } catch (const std::exception& e) {
      row.error = e.what();
      spdlog::warn("L={:.6g} m cn2={:.3g} {}: {}", length, cn2, to_string(set), e.what());
    }
  };

  detail::parallel_for(out.size(), opts.jobs, run_one);
  return out;
}

} // namespace fsoqkd::planner
