#pragma once

#include <string>
#include <vector>

namespace vclab {

/// Experiment configuration: defaults, `key = value` file, then command-line
/// overrides, then the VC_PRECISION_BITS environment variable (lowest priority
/// of the explicit sources).
struct ExperimentConfig {
  std::vector<double> epsilons = {0.2, 0.1, 0.05, 0.02};
  double mach = 1.0;
  double length = 1.0;
  double horizon = 6.0;
  int modes = 8;
  long precision_bits = 256;
  int grid_n = 256;
  double dt = 0.0;  // 0 selects horizon / 2048
  double tolerance = 1e-8;
  std::string out_dir = "out";
  unsigned long long seed = 12345;

  double effective_dt() const { return dt > 0.0 ? dt : horizon / 2048.0; }
  /// Sorts the viscosity list descending and checks positivity invariants.
  void normalize_and_validate();
};

/// Parses a UTF-8 line-oriented `key = value` file ('#' comments allowed).
/// Unknown keys are rejected.
ExperimentConfig load_config_file(const std::string& path);

/// Applies keys onto an existing config (shared by file loading and tests).
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// VC_PRECISION_BITS overrides precision when set and the flag was not given.
void apply_env_precision(ExperimentConfig& cfg, bool flag_was_set);

std::vector<double> parse_double_list(const std::string& comma_separated);

}  // namespace vclab
