#pragma once

#include "qhqr/domain.hpp"
#include "qhqr/symbol.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhqr {

/// Invalid experiment configuration. what() lists every diagnostic, one
/// per line, as "<source>:<line>:<column>: <message>".
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string> &diagnostics() const { return diagnostics_; }

private:
  std::vector<std::string> diagnostics_;
};

/// Radial part as written in a config: constant, monomial or a list of terms.
struct RadialSpec {
  enum class Form { constant, monomial, combination };
  Form form = Form::constant;
  std::vector<RadialTerm> terms;

  QuasiRadialSymbol build() const;
  bool operator==(const RadialSpec &) const = default;
};

struct SymbolSpec {
  std::string name;
  RadialSpec radial;
  MultiIndex nu;
  MultiIndex mu;
  std::optional<bool> expect_akh;

  QHQRSymbol build(const Partition &part) const;
  bool operator==(const SymbolSpec &) const = default;
};

struct OracleSettings {
  std::uint64_t samples = 1'000'000;
  std::uint64_t batch_size = 1 << 16;
  unsigned threads = 0; ///< 0 = hardware concurrency; never changes results
  bool operator==(const OracleSettings &) const = default;
};

struct Tolerances {
  double identity = 1e-10;   ///< closed-form identities (relative)
  double quadrature = 1e-6;  ///< closed form vs simplex quadrature
  double sigma = 3.0;        ///< oracle comparisons, in standard errors
  double commutator = 1e-10; ///< commuting pairs, max_abs
  double separation = 1e-3;  ///< non-commuting pairs must exceed this
  double invariance = 1e-10;
  double membership = 1e-9;
  bool operator==(const Tolerances &) const = default;
};

struct InvarianceSettings {
  int group_samples = 100;
  std::uint64_t points = 10'000;
  bool operator==(const InvarianceSettings &) const = default;
};

struct ExperimentConfig {
  std::vector<int> p;
  std::vector<int> k;
  std::optional<std::vector<int>> h;
  int degree = 4;
  std::uint64_t seed = 0;
  OracleSettings oracle;
  Tolerances tol;
  InvarianceSettings invariance;
  std::vector<SymbolSpec> symbols;
  std::string out_dir = ".";
  std::string report_name = "report";

  DomainSpec domain() const { return DomainSpec(p); }
  Partition partition() const { return Partition(k); }
  bool operator==(const ExperimentConfig &) const = default;
};

/// Parses and validates; throws ConfigError with every problem found.
ExperimentConfig parse_config_file(const std::string &path);
ExperimentConfig parse_config_string(const std::string &text,
                                     const std::string &source = "<string>");

/// YAML text that parse_config_string maps back to an equal config.
std::string config_to_yaml(const ExperimentConfig &cfg);

} // namespace qhqr
