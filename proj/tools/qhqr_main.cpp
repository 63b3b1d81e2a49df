#include "qhqr/config.hpp"
#include "qhqr/runner.hpp"

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

namespace {

enum Exit { kPass = 0, kAssertions = 2, kBadConfig = 3, kRuntime = 4 };

// QHQR_LOG takes spdlog level syntax ("debug", "info,qhqr=trace"); default warn.
void setup_logging() {
  auto logger = spdlog::stderr_color_mt("qhqr");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char *env = std::getenv("QHQR_LOG"))
    spdlog::cfg::helpers::load_levels(env);
}

} // namespace

int main(int argc, char **argv) {
  setup_logging();

  CLI::App app{"Toeplitz operators with quasi-homogeneous quasi-radial symbols"};
  std::string command, config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> samples, seed;
  std::optional<int> degree;
  app.add_option("command", command,
                 "gamma | matrix | commutator | check-akh | check-pair | invariance | "
                 "validate-all")
      ->required();
  app.add_option("--config", config_path, "experiment config (YAML)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--samples", samples, "Monte Carlo proposals per oracle integral");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--degree", degree, "basis degree bound N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kBadConfig;
  }

  const auto cmd = qhqr::parse_command(command);
  if (!cmd) {
    std::cerr << "unknown command '" << command << "'\n";
    return kBadConfig;
  }

  try {
    auto cfg = qhqr::parse_config_file(config_path);
    std::vector<std::string> bad;
    if (out_dir)
      cfg.out_dir = *out_dir;
    if (samples) {
      if (*samples < 1000)
        bad.push_back("--samples: must be at least 1000");
      cfg.oracle.samples = *samples;
    }
    if (seed)
      cfg.seed = *seed;
    if (degree) {
      if (*degree < 0 || *degree > 40)
        bad.push_back("--degree: must lie in [0, 40]");
      cfg.degree = *degree;
    }
    if (!bad.empty())
      throw qhqr::ConfigError(bad);

    const auto result = qhqr::run(*cmd, cfg);
    const auto &log = result.assertions;
    std::cout << qhqr::to_string(*cmd) << ": " << (log.passed() ? "pass" : "FAIL") << " ("
              << log.total() - log.failed() << "/" << log.total() << " checks), report "
              << result.report_path.string() << "\n";
    for (const auto &f : log.failures())
      std::cout << "  failed " << f.check << ": " << f.detail << "\n";
    return log.passed() ? kPass : kAssertions;
  } catch (const qhqr::ConfigError &e) {
    std::cerr << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
