#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fsoqkd/commands.hpp"
#include "fsoqkd/config.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("fso_qkd");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("FSO_QKD_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
    else spdlog::warn("ignoring unknown FSO_QKD_LOG level '{}'", env);
  }
}

} // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Modal transmissivities and decoy-state QKD rates for free-space links"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  long long seed = 0;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "YAML run configuration (defaults when omitted)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "CSV output path (default: config 'output', else stdout)");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "reserved; all computations are deterministic");
  };
  auto* transmissivity = app.add_subcommand("transmissivity", "FB and Gaussian power transmissivity vs L");
  auto* rates = app.add_subcommand("rates", "rate envelopes and capacity vs L");
  auto* validate = app.add_subcommand("validate", "square-law vs 5/3-law power-in-bucket check");
  for (auto* sub : {transmissivity, rates, validate}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  fsoqkd::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = fsoqkd::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (out_path.empty()) out_path = cfg.output;

  std::ostringstream csv;
  int code = 0;
  try {
    if (*transmissivity) code = fsoqkd::cmd_transmissivity(cfg, csv, jobs);
    else if (*rates) code = fsoqkd::cmd_rates(cfg, csv, jobs);
    else code = fsoqkd::cmd_validate(cfg, csv, std::cerr, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (out_path.empty()) {
    std::cout << csv.str() << std::flush;
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!(file << csv.str())) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 1;
    }
  }
  return code;
}
