#pragma once

#include <string>

#include "config.hpp"
#include "experiment.hpp"

namespace genbayes {

/// Command bodies behind the public API: each validates its inputs, writes
/// its CSV outputs plus a manifest under out_dir, and returns a short
/// human-readable summary for the front end to print. Errors surface as the
/// library exception types (ConfigError, IoError, ContractError, ...).

std::string command_run(Config config, const std::string& out_dir);

std::string command_rates(const std::string& results_path,
                          const std::string& out_dir, RateStatistic statistic,
                          bool mean_of_logs);

/// probe is one of "bernstein", "envelope", "concentration", "bounds".
std::string command_diagnose(Config config, const std::string& probe,
                             const std::string& out_dir);

}  // namespace genbayes
