#pragma once

#include "qhqr/config.hpp"
#include "qhqr/report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qhqr {

enum class Command { gamma, matrix, commutator, check_akh, check_pair, invariance, validate_all };

std::optional<Command> parse_command(std::string_view name);
std::string to_string(Command c);

struct RunResult {
  Command command = Command::validate_all;
  std::string report; ///< YAML text as written
  std::filesystem::path report_path;
  std::vector<std::filesystem::path> sidecars;
  AssertionLog assertions;
};

/// Runs `cmd`, writes <out_dir>/<report_name>.yaml plus CSV sidecars.
/// Throws ConfigError when the command needs a field the config lacks
/// (check-akh without class_h).
RunResult run(Command cmd, const ExperimentConfig &cfg);

/// Independent stream seed for a named sub-experiment.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace qhqr
