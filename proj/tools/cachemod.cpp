// cachemod: run or validate a cache-aided modulation scenario.
//
//   cachemod run --config <path> [--out <path>] [--seed <u64>] [--trials <n>]
//                [--threads <n>] [--analytic-only]
//   cachemod validate --config <path>
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cachemod/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

cachemod::ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cachemod::ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return cachemod::parse_config(text.str());
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-aided modulation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
  bool analytic_only = false;

  auto* run = app.add_subcommand("run", "Run the SNR sweep and write CSV results");
  run->add_option("--config", config_path, "Scenario JSON file")->required();
  run->add_option("--out", out_path, "CSV output path (default: config output or stdout)");
  run->add_option("--seed", seed, "Master seed override");
  run->add_option("--trials", trials, "Monte Carlo trials per cell override");
  run->add_option("--threads", threads, "Worker threads for Monte Carlo cells (0 = all cores)");
  run->add_flag("--analytic-only", analytic_only, "Skip Monte Carlo estimation");

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("--config", config_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto cfg = load_config(config_path);
    if (seed) {
      cfg.seed = *seed;
      cfg.notices.clear();
    }
    for (const auto& notice : cfg.notices) std::cerr << "cachemod: " << notice << '\n';
    if (*validate) {
      std::cerr << "cachemod: " << config_path << " is valid\n";
      return 0;
    }
    if (out_path) cfg.output = out_path;
    if (trials) cfg.trials_per_cell = *trials;
    if (threads) cfg.threads = *threads;
    if (analytic_only) cfg.trials_per_cell = 0;

    const auto result = cachemod::run_scenario(cfg);
    if (cfg.output) {
      cachemod::emit_csv(result, *cfg.output);
    } else {
      std::cout << cachemod::format_csv(result);
    }
    return 0;
  } catch (const cachemod::ConfigError& e) {
    std::cerr << "cachemod: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "cachemod: error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
