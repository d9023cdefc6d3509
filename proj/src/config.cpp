#include "fsoqkd/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fsoqkd/channel.hpp"
#include "fsoqkd/error.hpp"

namespace fsoqkd {

RunConfig::RunConfig() : lengths(log_space(1e3, 1e5, 20)), cn2{1e-15, 1e-14, 1e-13} {}

std::vector<std::pair<double, double>> RunConfig::points() const {
  std::vector<std::pair<double, double>> out;
  for (double l : lengths)
    for (double c : cn2) out.emplace_back(l, c);
  return out;
}

std::vector<std::pair<double, double>> RunConfig::validation_points() const {
  if (lengths_given) return points();
  RunConfig copy = *this;
  copy.lengths = {1e4, 3e4, 1e5};
  return copy.points();
}

std::vector<double> log_space(double lo, double hi, int count) {
  require(lo > 0.0 && hi >= lo, "log range needs 0 < lo <= hi");
  require(count >= 1, "log range needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

double parse_length(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a length: '" + text + "'");
  }
  std::string unit = text.substr(used);
  unit.erase(0, unit.find_first_not_of(" \t"));
  unit.erase(unit.find_last_not_of(" \t") + 1);
  static const std::pair<const char*, double> units[] = {
      {"", 1.0}, {"m", 1.0}, {"km", 1e3}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"nm", 1e-9}};
  for (const auto& [name, scale] : units)
    if (unit == name) return value * scale;
  throw InvalidArgument("unknown length unit '" + unit + "' in '" + text + "'");
}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  throw ConfigError("config line " + std::to_string(node.Mark().line + 1) + ": " + what);
}

void check_keys(const YAML::Node& map, const std::string& section, const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(map, "section '" + section + "' must be a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(kv.first, "unknown key '" + key + "' in section '" + section + "'");
  }
}

double as_length(const YAML::Node& node) {
  if (!node.IsScalar()) fail(node, "expected a length");
  try {
    const double v = parse_length(node.Scalar());
    if (!(v > 0.0)) fail(node, "length must be positive");
    return v;
  } catch (const InvalidArgument& e) {
    fail(node, e.what());
  }
}

template <class T> T as(const YAML::Node& node, const char* what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, std::string("expected ") + what);
  }
}

std::vector<double> as_lengths(const YAML::Node& node) {
  std::vector<double> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(as_length(item));
  } else {
    out.push_back(as_length(node));
  }
  if (out.empty()) fail(node, "length list is empty");
  return out;
}

planner::ModeSet as_mode_set(const YAML::Node& node) {
  const auto s = as<std::string>(node, "a mode set name");
  if (s == "LG") return planner::ModeSet::LG;
  if (s == "FB") return planner::ModeSet::FB;
  if (s == "PIB") return planner::ModeSet::GaussianPib;
  fail(node, "unknown mode set '" + s + "' (expected LG, FB or PIB)");
}

void parse_channel(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "channel", {"wavelength", "radius", "side", "lengths", "length_range"});
  if (n["wavelength"]) cfg.geometry.wavelength = as_length(n["wavelength"]);
  if (n["radius"]) cfg.geometry.radius = as_length(n["radius"]);
  if (n["side"]) cfg.geometry.side = as_length(n["side"]);
  if (n["lengths"] && n["length_range"]) fail(n["length_range"], "give either 'lengths' or 'length_range', not both");
  if (n["lengths"]) cfg.lengths = as_lengths(n["lengths"]);
  cfg.lengths_given = n["lengths"] || n["length_range"];
  if (const auto r = n["length_range"]) {
    check_keys(r, "channel.length_range", {"min", "max", "count"});
    if (!r["min"] || !r["max"] || !r["count"]) fail(r, "length_range needs min, max and count");
    const double lo = as_length(r["min"]);
    const double hi = as_length(r["max"]);
    const int count = as<int>(r["count"], "an integer count");
    if (hi < lo) fail(r, "length_range max is below min");
    if (count < 1) fail(r["count"], "count must be >= 1");
    cfg.lengths = log_space(lo, hi, count);
  }
}

void parse_turbulence(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "turbulence", {"cn2"});
  if (const auto c = n["cn2"]) {
    cfg.cn2.clear();
    if (c.IsSequence()) {
      for (const auto& item : c) cfg.cn2.push_back(as<double>(item, "a number"));
    } else {
      cfg.cn2.push_back(as<double>(c, "a number"));
    }
    if (cfg.cn2.empty()) fail(c, "cn2 list is empty");
    for (double v : cfg.cn2)
      if (!(v >= 0.0)) fail(c, "cn2 must be non-negative");
  }
}

void parse_qkd(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "qkd", {"visibility", "p_dc", "nu", "f_ec", "sift"});
  if (n["visibility"]) cfg.qkd.visibility = as<double>(n["visibility"], "a number");
  if (n["p_dc"]) cfg.qkd.p_dc = as<double>(n["p_dc"], "a number");
  if (n["nu"]) cfg.qkd.nu = as<double>(n["nu"], "a number");
  if (n["f_ec"]) cfg.qkd.f_ec = as<double>(n["f_ec"], "a number");
  if (n["sift"]) cfg.qkd.sift = as<double>(n["sift"], "a number");
  try {
    cfg.qkd.validate();
  } catch (const InvalidArgument& e) {
    fail(n, e.what());
  }
}

void parse_planner(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "planner",
             {"n_max", "q_max", "lg_order_cap", "mode_sets", "mu_min", "mu_max", "rel_tol", "max_sweeps", "moment_tol"});
  auto& env = cfg.envelope;
  if (n["n_max"]) env.n_max = as<int>(n["n_max"], "an integer");
  if (n["q_max"]) env.q_max = as<int>(n["q_max"], "an integer");
  if (n["lg_order_cap"]) env.lg_order_cap = as<int>(n["lg_order_cap"], "an integer");
  if (n["mu_min"]) env.optimizer.mu_min = as<double>(n["mu_min"], "a number");
  if (n["mu_max"]) env.optimizer.mu_max = as<double>(n["mu_max"], "a number");
  if (n["rel_tol"]) env.optimizer.rel_tol = as<double>(n["rel_tol"], "a number");
  if (n["max_sweeps"]) env.optimizer.max_sweeps = as<int>(n["max_sweeps"], "an integer");
  if (n["moment_tol"]) env.quadrature.abs_tol = as<double>(n["moment_tol"], "a number");
  if (const auto m = n["mode_sets"]) {
    cfg.mode_sets.clear();
    if (m.IsSequence()) {
      for (const auto& item : m) cfg.mode_sets.push_back(as_mode_set(item));
    } else {
      cfg.mode_sets.push_back(as_mode_set(m));
    }
    if (cfg.mode_sets.empty()) fail(m, "mode_sets is empty");
  }
  if (env.n_max < 1) fail(n, "n_max must be >= 1");
  if (env.q_max < 1) fail(n, "q_max must be >= 1");
  if (env.q_max > env.lg_order_cap) fail(n, "q_max exceeds lg_order_cap");
  if (!(env.optimizer.mu_min > 0.0 && env.optimizer.mu_max > env.optimizer.mu_min))
    fail(n, "need 0 < mu_min < mu_max");
  if (!(env.optimizer.rel_tol > 0.0)) fail(n, "rel_tol must be positive");
  if (env.optimizer.max_sweeps < 1) fail(n, "max_sweeps must be >= 1");
  if (!(env.quadrature.abs_tol > 0.0)) fail(n, "moment_tol must be positive");
}

} // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  RunConfig cfg;
  if (root.IsNull()) return cfg;
  check_keys(root, "top level", {"channel", "turbulence", "qkd", "planner", "output"});
  if (root["channel"]) parse_channel(root["channel"], cfg);
  if (root["turbulence"]) parse_turbulence(root["turbulence"], cfg);
  if (root["qkd"]) parse_qkd(root["qkd"], cfg);
  if (root["planner"]) parse_planner(root["planner"], cfg);
  if (root["output"]) cfg.output = as<std::string>(root["output"], "a path");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace fsoqkd
