#include "genbayes.h"

#include <cstring>
#include <new>
#include <string>

#include "analysis.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "util.hpp"
#include "version.hpp"

struct gb_config {
  genbayes::Config config;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_summary;

/// Runs a command body and folds the library's exception taxonomy into the
/// C status codes, capturing the message for gb_last_error.
template <class Fn>
gb_status guarded(Fn&& fn) {
  g_error.clear();
  try {
    fn();
    return GB_OK;
  } catch (const genbayes::ConfigError& e) {
    g_error = e.what();
    return GB_ERR_CONFIG;
  } catch (const genbayes::IoError& e) {
    g_error = e.what();
    return GB_ERR_IO;
  } catch (const genbayes::SingularDesignError& e) {
    g_error = e.what();
    return GB_ERR_PRECONDITION;
  } catch (const genbayes::ContractError& e) {
    g_error = e.what();
    return GB_ERR_PRECONDITION;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return GB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return GB_ERR_INTERNAL;
  }
}

gb_status argument_error(const char* message) {
  g_error = message;
  return GB_ERR_ARGUMENT;
}

void publish_summary(std::string text, const char** summary) {
  g_summary = std::move(text);
  if (summary != nullptr) *summary = g_summary.c_str();
}

}  // namespace

extern "C" {

const char* gb_version(void) { return genbayes::kVersion; }

const char* gb_last_error(void) { return g_error.c_str(); }

gb_config* gb_config_create(void) { return new (std::nothrow) gb_config(); }

gb_status gb_config_load(gb_config* config, const char* path) {
  if (config == nullptr || path == nullptr) {
    return argument_error("gb_config_load: null argument");
  }
  return guarded([&] { config->config = genbayes::load_config(path); });
}

gb_status gb_config_set(gb_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return argument_error("gb_config_set: null argument");
  }
  return guarded([&] { genbayes::set_config_value(config->config, key, value); });
}

gb_status gb_config_get(const gb_config* config, const char* key, char* buf,
                        size_t cap) {
  if (config == nullptr || key == nullptr || buf == nullptr || cap == 0) {
    return argument_error("gb_config_get: null argument or empty buffer");
  }
  return guarded([&] {
    const std::string value = genbayes::get_config_value(config->config, key);
    const size_t n = value.size() < cap - 1 ? value.size() : cap - 1;
    std::memcpy(buf, value.data(), n);
    buf[n] = '\0';
  });
}

void gb_config_free(gb_config* config) { delete config; }

gb_status gb_run(const gb_config* config, const char* out_dir,
                 const char** summary) {
  if (config == nullptr || out_dir == nullptr) {
    return argument_error("gb_run: null argument");
  }
  return guarded([&] {
    publish_summary(genbayes::command_run(config->config, out_dir), summary);
  });
}

gb_status gb_rates(const char* results_path, const char* out_dir,
                   const char* statistic, int mean_of_logs,
                   const char** summary) {
  if (results_path == nullptr || out_dir == nullptr || statistic == nullptr) {
    return argument_error("gb_rates: null argument");
  }
  genbayes::RateStatistic stat;
  if (std::strcmp(statistic, "excess") == 0) {
    stat = genbayes::RateStatistic::MeanExcess;
  } else if (std::strcmp(statistic, "raw") == 0) {
    stat = genbayes::RateStatistic::MeanRisk;
  } else {
    return argument_error("gb_rates: statistic must be 'excess' or 'raw'");
  }
  return guarded([&] {
    publish_summary(genbayes::command_rates(results_path, out_dir, stat,
                                            mean_of_logs != 0),
                    summary);
  });
}

gb_status gb_diagnose(const gb_config* config, const char* probe,
                      const char* out_dir, const char** summary) {
  if (config == nullptr || probe == nullptr || out_dir == nullptr) {
    return argument_error("gb_diagnose: null argument");
  }
  if (std::strcmp(probe, "bernstein") != 0 && std::strcmp(probe, "envelope") != 0 &&
      std::strcmp(probe, "concentration") != 0 && std::strcmp(probe, "bounds") != 0) {
    return argument_error(
        "gb_diagnose: probe must be one of bernstein, envelope, "
        "concentration, bounds");
  }
  return guarded([&] {
    publish_summary(
        genbayes::command_diagnose(config->config, probe, out_dir), summary);
  });
}

gb_status gb_theorem3_bound(long d, long k, double kappa, double* value,
                            int* vacuous) {
  if (value == nullptr) return argument_error("gb_theorem3_bound: null value");
  return guarded([&] {
    const genbayes::BoundReport report = genbayes::theorem3_bound(d, k, kappa);
    *value = report.value;
    if (vacuous != nullptr) *vacuous = report.vacuous ? 1 : 0;
  });
}

gb_status gb_theorem2_bound(double c, double r, const double* alphas,
                            size_t n_alphas, double kappa, double* value) {
  if (value == nullptr || (alphas == nullptr && n_alphas > 0)) {
    return argument_error("gb_theorem2_bound: null argument");
  }
  return guarded([&] {
    const std::vector<double> alpha_list(alphas, alphas + n_alphas);
    *value = genbayes::theorem2_bound(c, r, alpha_list, kappa).value;
  });
}

}  // extern "C"
