// Strict JSON run configuration for the hk command-line tool.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hk/core.hpp"
#include "hk/spectral.hpp"
#include "hk/sweep.hpp"

namespace hk::cli {

/// Invalid configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int version = 1;
  ModelParams model;
  pde::SolverConfig solver;
  double T = 100.0;
  std::string init;                 ///< empty: command default
  std::size_t record_stride = 100;  ///< sde snapshot stride, in steps
  std::size_t diag_stride = 1000;   ///< pde diagnostics stride, in steps
  sweep::SweepSpec sweep;
  std::string out = "out";

  /// Canonical JSON; its hash identifies outputs in manifests and SVGs.
  std::string to_json() const;
  std::string hash() const;
};

/// Parses a JSON document. Unknown keys, wrong types and violated physical
/// constraints raise ConfigError naming the field (and line/column for
/// syntax errors).
RunConfig parse_config(std::string_view text);

/// Named presets: sde "merge", "disperse"; pde "fig3-left", "fig3-middle",
/// "fig3-right"; sweep "ci", "transition", "pd". Throws ConfigError.
RunConfig preset(std::string_view command, std::string_view name);

/// Default configuration for a command when neither file nor preset is given.
RunConfig defaults(std::string_view command);

/// HK_SEED, when set, replaces the model seed.
void apply_seed_env(RunConfig& cfg);

/// Re-runs every constraint check; throws ConfigError.
void validate(const RunConfig& cfg, std::string_view command);

}  // namespace hk::cli
