#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"

#include "genbayes.h"

namespace {

int map_exit(gb_status status) {
  switch (status) {
    case GB_OK:
      return 0;
    case GB_ERR_CONFIG:
      return 2;
    case GB_ERR_IO:
      return 3;
    case GB_ERR_PRECONDITION:
      return 4;
    default:
      return 1;
  }
}

int fail(gb_status status) {
  std::fprintf(stderr, "genbayes: error: %s\n", gb_last_error());
  return map_exit(status);
}

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("GENBAYES_OUT");
  if (env != nullptr && env[0] != '\0') return env;
  return ".";
}

struct ConfigHandle {
  gb_config* ptr = gb_config_create();

  ~ConfigHandle() { gb_config_free(ptr); }
  ConfigHandle() = default;
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
};

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  long workers = -1;
  long replicates = -1;
  CLI::Option* seed_opt = nullptr;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "Config file path")
        ->check(CLI::ExistingFile);
    cmd.add_option("--out", out_dir,
                   "Output directory (default: $GENBAYES_OUT or .)");
    seed_opt = cmd.add_option("--seed", seed, "Master seed override");
    cmd.add_option("--workers", workers, "Worker thread count (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--replicates", replicates, "Replicate count override")
        ->check(CLI::PositiveNumber);
  }

  // Builds the config handle from the file plus flag overrides; returns
  // GB_OK or the first failing status.
  gb_status build(gb_config* config) const {
    if (config == nullptr) return GB_ERR_INTERNAL;
    if (!config_path.empty()) {
      const gb_status status = gb_config_load(config, config_path.c_str());
      if (status != GB_OK) return status;
    }
    if (seed_opt != nullptr && seed_opt->count() > 0) {
      const gb_status status = gb_config_set(
          config, "experiment.master_seed", std::to_string(seed).c_str());
      if (status != GB_OK) return status;
    }
    if (workers >= 0) {
      const gb_status status = gb_config_set(
          config, "experiment.workers", std::to_string(workers).c_str());
      if (status != GB_OK) return status;
    }
    if (replicates > 0) {
      const gb_status status = gb_config_set(
          config, "experiment.replicates",
          std::to_string(replicates).c_str());
      if (status != GB_OK) return status;
    }
    return GB_OK;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized-Bayes linear-regression simulation toolkit"};
  app.require_subcommand(1);

  int exit_code = 0;
  auto run_and_print = [&exit_code](gb_status status, const char* summary) {
    if (status != GB_OK) {
      exit_code = fail(status);
      return;
    }
    if (summary != nullptr && summary[0] != '\0') {
      std::printf("%s", summary);
      const size_t len = std::string(summary).size();
      if (summary[len - 1] != '\n') std::printf("\n");
    }
  };

  // run
  CLI::App* run_cmd =
      app.add_subcommand("run", "Simulate the experiment grid");
  CommonFlags run_flags;
  run_flags.attach(*run_cmd);
  bool dump_chains = false;
  bool dump_datasets = false;
  run_cmd->add_flag("--dump-chains", dump_chains,
                    "Write each kept chain as CSV");
  run_cmd->add_flag("--dump-datasets", dump_datasets,
                    "Write each simulated dataset as CSV");
  run_cmd->callback([&] {
    ConfigHandle config;
    gb_status status = run_flags.build(config.ptr);
    if (status == GB_OK && dump_chains) {
      status = gb_config_set(config.ptr, "experiment.dump_chains", "true");
    }
    if (status == GB_OK && dump_datasets) {
      status = gb_config_set(config.ptr, "experiment.dump_datasets", "true");
    }
    const char* summary = nullptr;
    if (status == GB_OK) {
      status = gb_run(config.ptr, resolve_out_dir(run_flags.out_dir).c_str(),
                      &summary);
    }
    run_and_print(status, summary);
  });

  // rates
  CLI::App* rates_cmd =
      app.add_subcommand("rates", "Fit convergence rates from a results CSV");
  std::string results_path;
  std::string rates_out;
  std::string statistic = "excess";
  bool log_mean = false;
  rates_cmd->add_option("results", results_path, "results.csv from a run")
      ->required();
  rates_cmd->add_option("--out", rates_out,
                        "Output directory (default: $GENBAYES_OUT or .)");
  rates_cmd->add_option("--statistic", statistic, "excess or raw risk")
      ->check(CLI::IsMember({"excess", "raw"}));
  rates_cmd->add_flag("--log-mean", log_mean,
                      "Aggregate replicates by geometric mean");
  rates_cmd->callback([&] {
    const char* summary = nullptr;
    const gb_status status =
        gb_rates(results_path.c_str(), resolve_out_dir(rates_out).c_str(),
                 statistic.c_str(), log_mean ? 1 : 0, &summary);
    run_and_print(status, summary);
  });

  // diagnose
  CLI::App* diag_cmd =
      app.add_subcommand("diagnose", "Run a theory-facing diagnostic probe");
  std::string probe;
  CommonFlags diag_flags;
  diag_cmd->add_option("probe", probe,
                       "bernstein, envelope, concentration, or bounds")
      ->required()
      ->check(CLI::IsMember({"bernstein", "envelope", "concentration",
                             "bounds"}));
  diag_flags.attach(*diag_cmd);
  diag_cmd->callback([&] {
    ConfigHandle config;
    gb_status status = diag_flags.build(config.ptr);
    const char* summary = nullptr;
    if (status == GB_OK) {
      status = gb_diagnose(config.ptr, probe.c_str(),
                           resolve_out_dir(diag_flags.out_dir).c_str(),
                           &summary);
    }
    run_and_print(status, summary);
  });

  // version
  CLI::App* version_cmd =
      app.add_subcommand("version", "Print the tool version");
  version_cmd->callback(
      [] { std::printf("genbayes %s\n", gb_version()); });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
