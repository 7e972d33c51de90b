#pragma once

#include <string>
#include <utility>
#include <vector>

#include "experiment.hpp"

namespace genbayes {

struct DiagnosticsConfig {
  double beta = 0.5;        // concentration threshold exponent
  double eps_scale = 5.0;   // concentration threshold prefactor
  long bernstein_m = 200000;
  long envelope_m = 200000;
  double envelope_r = 4.0;
  long bounds_d = 3;
  double bounds_c = 0.0;      // 0: follow bounds_d
  double bounds_r = 0.0;      // 0: use dof - 1 per dof
  double bounds_kappa = 0.1;
  std::vector<double> alphas{1.0};
};

/// Everything a command needs, resolved from the config file plus overrides.
/// master_seed has no safe default, so its presence is tracked explicitly
/// and checked by the commands that consume randomness.
struct Config {
  ExperimentConfig experiment;
  DiagnosticsConfig diagnostics;
  bool seed_set = false;
  bool prior_center_set = false;
};

/// Sectioned key=value text ([model], [prior], [chain], [experiment],
/// [diagnostics]; '#' or ';' comments). Unknown sections or keys and
/// malformed values raise ConfigError naming the offending line.
Config parse_config_text(const std::string& text, const std::string& source);
Config load_config(const std::string& path);

/// Applies one key in `section` to the config; `where` seasons error
/// messages ("file.cfg:12" or "override").
void apply_config_key(Config& config, const std::string& section,
                      const std::string& key, const std::string& value,
                      const std::string& where);

/// "section.key" accessors backing the C API.
void set_config_value(Config& config, const std::string& dotted_key,
                      const std::string& value);
std::string get_config_value(const Config& config,
                             const std::string& dotted_key);

/// Fills dependent defaults (prior center = origin at the model dimension)
/// and cross-checks dimensions. Commands call this once before running.
void finalize_config(Config& config);

/// Resolved values in a fixed order, for embedding into manifests.
/// experiment.workers is deliberately left out: it is a performance knob
/// that never affects the outputs, and manifests must not differ across
/// worker counts.
std::vector<std::pair<std::string, std::string>> config_snapshot(
    const Config& config);

}  // namespace genbayes
