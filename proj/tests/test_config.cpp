#include <cmath>
#include <sstream>
#include <string>

#include <doctest.h>

#include "fsoqkd/channel.hpp"
#include "fsoqkd/config.hpp"
#include "fsoqkd/csv.hpp"
#include "fsoqkd/error.hpp"

using namespace fsoqkd;
using doctest::Approx;

namespace {

// Message of the ConfigError raised by `text`, or "" if it parsed.
std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

} // namespace

TEST_CASE("empty config gives the reference setup") {
  for (const char* text : {"", "# nothing\n"}) {
    const auto cfg = parse_config(text);
    CHECK(cfg.geometry.wavelength == 1.55e-6);
    CHECK(cfg.geometry.radius == 0.1);
    CHECK(!cfg.geometry.side);
    REQUIRE(cfg.lengths.size() == 20);
    CHECK(cfg.lengths.front() == Approx(1e3).epsilon(1e-15));
    CHECK(cfg.lengths.back() == 1e5);
    for (std::size_t i = 1; i < 20; ++i)
      CHECK(cfg.lengths[i] / cfg.lengths[i - 1] == Approx(std::pow(100.0, 1.0 / 19.0)).epsilon(1e-12));
    CHECK(!cfg.lengths_given);
    CHECK(cfg.cn2 == std::vector<double>{1e-15, 1e-14, 1e-13});
    CHECK(cfg.mode_sets == std::vector{planner::ModeSet::LG, planner::ModeSet::FB});
    CHECK(cfg.envelope.n_max == 8);
    CHECK(cfg.envelope.q_max == 8);
    CHECK(cfg.qkd.visibility == 0.99);
    CHECK(cfg.output.empty());
    CHECK(cfg.points().size() == 60);
  }
}

TEST_CASE("length units") {
  CHECK(parse_length("1550nm") == Approx(1.55e-6).epsilon(1e-15));
  CHECK(parse_length("1.55 um") == Approx(1.55e-6).epsilon(1e-15));
  CHECK(parse_length("1.55\xC2\xB5m") == Approx(1.55e-6).epsilon(1e-15));
  CHECK(parse_length("10cm") == Approx(0.1).epsilon(1e-15));
  CHECK(parse_length("5 km") == 5e3);
  CHECK(parse_length("3mm") == Approx(3e-3).epsilon(1e-15));
  CHECK(parse_length("42") == 42.0);
  CHECK(parse_length("7m") == 7.0);
  CHECK_THROWS_AS(parse_length("10 furlongs"), InvalidArgument);
  CHECK_THROWS_AS(parse_length("km"), InvalidArgument);
}

TEST_CASE("full config") {
  const auto cfg = parse_config(R"(
channel:
  wavelength: 810nm
  radius: 5cm
  side: 8cm
  lengths: [1km, 2.5 km, 4000]
turbulence:
  cn2: [0, 1e-14]
qkd:
  visibility: 0.98
  p_dc: 1e-7
  nu: 1e9
  f_ec: 1.16
  sift: 1.0
planner:
  n_max: 3
  q_max: 2
  lg_order_cap: 6
  mode_sets: [FB, PIB]
  mu_min: 1e-5
  mu_max: 1.0
  rel_tol: 1e-7
  max_sweeps: 20
  moment_tol: 1e-9
output: out.csv
)");
  CHECK(cfg.geometry.wavelength == Approx(8.1e-7).epsilon(1e-15));
  CHECK(cfg.geometry.radius == Approx(0.05).epsilon(1e-15));
  CHECK(*cfg.geometry.side == Approx(0.08).epsilon(1e-15));
  CHECK(cfg.lengths == std::vector<double>{1e3, 2.5e3, 4e3});
  CHECK(cfg.lengths_given);
  CHECK(cfg.cn2 == std::vector<double>{0.0, 1e-14});
  CHECK(cfg.qkd.visibility == 0.98);
  CHECK(cfg.qkd.p_dc == 1e-7);
  CHECK(cfg.qkd.nu == 1e9);
  CHECK(cfg.qkd.f_ec == 1.16);
  CHECK(cfg.qkd.sift == 1.0);
  CHECK(cfg.envelope.n_max == 3);
  CHECK(cfg.envelope.q_max == 2);
  CHECK(cfg.envelope.lg_order_cap == 6);
  CHECK(cfg.mode_sets == std::vector{planner::ModeSet::FB, planner::ModeSet::GaussianPib});
  CHECK(cfg.envelope.optimizer.mu_min == 1e-5);
  CHECK(cfg.envelope.optimizer.mu_max == 1.0);
  CHECK(cfg.envelope.optimizer.rel_tol == 1e-7);
  CHECK(cfg.envelope.optimizer.max_sweeps == 20);
  CHECK(cfg.envelope.quadrature.abs_tol == 1e-9);
  CHECK(cfg.output == "out.csv");

  const auto pts = cfg.points();
  REQUIRE(pts.size() == 6);
  CHECK(pts[0] == std::pair{1e3, 0.0});
  CHECK(pts[1] == std::pair{1e3, 1e-14});
  CHECK(pts[5] == std::pair{4e3, 1e-14});
  CHECK(cfg.validation_points() == pts);
}

TEST_CASE("scalar shorthands and length ranges") {
  const auto cfg = parse_config("channel:\n  length_range: {min: 2km, max: 50km, count: 4}\nturbulence:\n  cn2: 1e-15\n"
                                "planner:\n  mode_sets: LG\n");
  REQUIRE(cfg.lengths.size() == 4);
  CHECK(cfg.lengths.front() == Approx(2e3).epsilon(1e-15));
  CHECK(cfg.lengths.back() == 5e4);
  CHECK(cfg.lengths[1] == Approx(2e3 * std::pow(25.0, 1.0 / 3.0)).epsilon(1e-12));
  CHECK(cfg.cn2 == std::vector<double>{1e-15});
  CHECK(cfg.mode_sets == std::vector{planner::ModeSet::LG});
  CHECK(parse_config("channel:\n  lengths: 3km\n").lengths == std::vector<double>{3e3});
}

TEST_CASE("validation grid defaults to the far field") {
  const auto cfg = parse_config("turbulence:\n  cn2: [0, 1e-13]\n");
  const auto pts = cfg.validation_points();
  REQUIRE(pts.size() == 6);
  CHECK(pts[0] == std::pair{1e4, 0.0});
  CHECK(pts[3] == std::pair{3e4, 1e-13});
  CHECK(pts[5] == std::pair{1e5, 1e-13});
}

TEST_CASE("config errors carry line numbers") {
  CHECK(contains(config_error("channel:\n  wavelength: 1um\n  colour: red\n"), "config line 3"));
  CHECK(contains(config_error("channel:\n  wavelength: 1um\n  colour: red\n"), "unknown key 'colour'"));
  CHECK(contains(config_error("extra: 1\n"), "config line 1"));
  CHECK(contains(config_error("qkd:\n  visibility: 0.3\n"), "config line 2"));
  CHECK(contains(config_error("channel:\n  radius: 10 parsecs\n"), "config line 2"));
  CHECK(contains(config_error("channel:\n  radius: -1cm\n"), "positive"));
  CHECK(contains(config_error("\nturbulence:\n  cn2: [1e-15, -1]\n"), "config line 3"));
  CHECK(contains(config_error("turbulence:\n  cn2: lots\n"), "config line 2"));
  CHECK(contains(config_error("planner:\n  n_max: 0\n"), "n_max"));
  CHECK(contains(config_error("planner:\n  q_max: 12\n"), "lg_order_cap"));
  CHECK(contains(config_error("planner:\n  mu_min: 2\n"), "mu_min"));
  CHECK(contains(config_error("planner:\n  mode_sets: [LG, XX]\n"), "unknown mode set"));
  CHECK(contains(config_error("channel:\n  lengths: [1km]\n  length_range: {min: 1km, max: 2km, count: 2}\n"),
                 "either"));
  CHECK(contains(config_error("channel:\n  length_range: {min: 5km, max: 2km, count: 2}\n"), "below min"));
  CHECK(contains(config_error("channel:\n  length_range: {min: 1km, max: 2km}\n"), "count"));
  CHECK(contains(config_error("channel: [1, 2]\n"), "mapping"));
  CHECK(contains(config_error("channel:\n  radius: [1\n"), "config line"));
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("log_space") {
  CHECK(log_space(5.0, 5.0, 1) == std::vector<double>{5.0});
  const auto v = log_space(1.0, 1000.0, 4);
  CHECK(v[1] == Approx(10.0).epsilon(1e-14));
  CHECK(v[2] == Approx(100.0).epsilon(1e-14));
  CHECK(v[3] == 1000.0);
  CHECK_THROWS_AS(log_space(0.0, 1.0, 3), InvalidArgument);
  CHECK_THROWS_AS(log_space(2.0, 1.0, 3), InvalidArgument);
  CHECK_THROWS_AS(log_space(1.0, 2.0, 0), InvalidArgument);
}

TEST_CASE("CSV formatting") {
  CHECK(csv::real(1.0) == "1.00000000000e+00");
  CHECK(csv::real(-2.5e-7) == "-2.50000000000e-07");
  CHECK(csv::real(1.0 / 3.0) == "3.33333333333e-01");
  CHECK(csv::real(0.0) == "0.00000000000e+00");
  CHECK(csv::real(1e300 * 1e10) == "inf");
  CHECK(csv::real(-1e300 * 1e10) == "-inf");
  CHECK(csv::real(std::nan("")) == "nan");
  CHECK(csv::field("plain") == "plain");
  CHECK(csv::field("a,b") == "\"a,b\"");
  CHECK(csv::field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv::field("two\nlines") == "\"two\nlines\"");
  std::ostringstream os;
  csv::write_row(os, {"a", "1", csv::field("x,y")});
  csv::write_row(os, {});
  CHECK(os.str() == "a,1,\"x,y\"\n\n");
}
