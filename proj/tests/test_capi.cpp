#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <genbayes.h>

#include "test_support.hpp"

namespace {

struct ConfigHandle {
  gb_config* ptr = gb_config_create();
  ~ConfigHandle() { gb_config_free(ptr); }
  operator gb_config*() { return ptr; }
};

/// Minimal fast campaign shared by the run/rates cases.
void set_small_campaign(gb_config* config) {
  REQUIRE(gb_config_set(config, "experiment.dofs", "10") == GB_OK);
  REQUIRE(gb_config_set(config, "experiment.sample_sizes", "20, 40, 80") == GB_OK);
  REQUIRE(gb_config_set(config, "experiment.replicates", "2") == GB_OK);
  REQUIRE(gb_config_set(config, "experiment.master_seed", "2026") == GB_OK);
  REQUIRE(gb_config_set(config, "chain.burn_in", "500") == GB_OK);
  REQUIRE(gb_config_set(config, "chain.iterations", "4000") == GB_OK);
}

}  // namespace

TEST_CASE("version and error-state basics") {
  CHECK(std::string(gb_version()) == "0.1.0");
  CHECK(std::string(gb_last_error()).empty());
}

TEST_CASE("config handle set/get round trip and error reporting") {
  ConfigHandle config;
  REQUIRE(config.ptr != nullptr);

  CHECK(gb_config_set(config, "experiment.replicates", "12") == GB_OK);
  char buf[64];
  CHECK(gb_config_get(config, "experiment.replicates", buf, sizeof buf) == GB_OK);
  CHECK(std::string(buf) == "12");

  CHECK(gb_config_get(config, "experiment.master_seed", buf, sizeof buf) == GB_OK);
  CHECK(std::string(buf) == "unset");

  CHECK(gb_config_set(config, "experiment.replicates", "banana") == GB_ERR_CONFIG);
  CHECK(std::string(gb_last_error()).find("banana") != std::string::npos);
  CHECK(gb_config_set(config, "model.unknown", "1") == GB_ERR_CONFIG);

  // Truncating get still terminates.
  CHECK(gb_config_set(config, "experiment.sample_sizes", "10,20,40,80,160") == GB_OK);
  char tiny[4];
  CHECK(gb_config_get(config, "experiment.sample_sizes", tiny, sizeof tiny) == GB_OK);
  CHECK(std::strlen(tiny) <= 3);

  CHECK(gb_config_set(nullptr, "a.b", "1") == GB_ERR_ARGUMENT);
  CHECK(gb_config_set(config, nullptr, "1") == GB_ERR_ARGUMENT);
  CHECK(gb_config_get(config, "experiment.replicates", nullptr, 8) == GB_ERR_ARGUMENT);
}

TEST_CASE("config load replaces state only on success") {
  testsup::TempDir dir("capicfg");
  const std::string good = dir.file("good.cfg");
  testsup::spit(good, "[experiment]\nreplicates = 33\n");
  const std::string bad = dir.file("bad.cfg");
  testsup::spit(bad, "[experiment]\nreplicates = 33\nbogus_key = 1\n");

  ConfigHandle config;
  REQUIRE(gb_config_set(config, "experiment.replicates", "5") == GB_OK);
  CHECK(gb_config_load(config, bad.c_str()) == GB_ERR_CONFIG);
  CHECK(std::string(gb_last_error()).find("bogus_key") != std::string::npos);

  char buf[16];
  REQUIRE(gb_config_get(config, "experiment.replicates", buf, sizeof buf) == GB_OK);
  CHECK(std::string(buf) == "5");  // failed load left the handle alone

  CHECK(gb_config_load(config, good.c_str()) == GB_OK);
  REQUIRE(gb_config_get(config, "experiment.replicates", buf, sizeof buf) == GB_OK);
  CHECK(std::string(buf) == "33");

  CHECK(gb_config_load(config, dir.file("absent.cfg").c_str()) != GB_OK);
}

TEST_CASE("run and rates commands through the C surface") {
  testsup::TempDir dir("capirun");
  ConfigHandle config;
  set_small_campaign(config);

  const char* summary = nullptr;
  REQUIRE(gb_run(config, dir.str().c_str(), &summary) == GB_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("rows") != std::string::npos);
  CHECK(std::filesystem::exists(dir.file("results.csv")));
  CHECK(std::filesystem::exists(dir.file("manifest-run.json")));

  const char* rates_summary = nullptr;
  REQUIRE(gb_rates(dir.file("results.csv").c_str(), dir.str().c_str(), "excess",
                   0, &rates_summary) == GB_OK);
  REQUIRE(rates_summary != nullptr);
  CHECK(std::string(rates_summary).find("slope") != std::string::npos);
  CHECK(std::filesystem::exists(dir.file("rates.csv")));
  CHECK(std::filesystem::exists(dir.file("manifest-rates.json")));

  CHECK(gb_rates(dir.file("nothere.csv").c_str(), dir.str().c_str(), "excess",
                 0, nullptr) == GB_ERR_IO);
  CHECK(gb_rates(dir.file("results.csv").c_str(), dir.str().c_str(), "sideways",
                 0, nullptr) == GB_ERR_ARGUMENT);
}

TEST_CASE("run without a seed is a config error naming the key") {
  testsup::TempDir dir("capinoseed");
  ConfigHandle config;
  CHECK(gb_run(config, dir.str().c_str(), nullptr) == GB_ERR_CONFIG);
  CHECK(std::string(gb_last_error()).find("master_seed") != std::string::npos);
}

TEST_CASE("diagnose dispatches probes and surfaces preconditions") {
  testsup::TempDir dir("capidiag");
  ConfigHandle config;
  REQUIRE(gb_config_set(config, "experiment.dofs", "20") == GB_OK);

  const char* summary = nullptr;
  REQUIRE(gb_diagnose(config, "bounds", dir.str().c_str(), &summary) == GB_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("0.2254") != std::string::npos);
  CHECK(std::filesystem::exists(dir.file("bounds.csv")));

  // envelope moment order at or above the tail index cannot exist.
  ConfigHandle heavy;
  REQUIRE(gb_config_set(heavy, "experiment.dofs", "5") == GB_OK);
  REQUIRE(gb_config_set(heavy, "experiment.master_seed", "1") == GB_OK);
  REQUIRE(gb_config_set(heavy, "diagnostics.envelope_r", "6") == GB_OK);
  CHECK(gb_diagnose(heavy, "envelope", dir.str().c_str(), nullptr) ==
        GB_ERR_PRECONDITION);
  CHECK(std::string(gb_last_error()).find("diverge") != std::string::npos);

  CHECK(gb_diagnose(config, "horoscope", dir.str().c_str(), nullptr) ==
        GB_ERR_ARGUMENT);
}

TEST_CASE("bound calculators exposed directly") {
  double value = 0.0;
  int vacuous = 0;
  REQUIRE(gb_theorem3_bound(3, 20, 0.1, &value, &vacuous) == GB_OK);
  CHECK(testsup::within(value, 0.2254, 5e-5));
  CHECK(vacuous == 0);

  REQUIRE(gb_theorem3_bound(3, 5, 0.1, &value, &vacuous) == GB_OK);
  CHECK(vacuous == 1);

  CHECK(gb_theorem3_bound(3, 20, -1.0, &value, &vacuous) == GB_ERR_PRECONDITION);
  CHECK(gb_theorem3_bound(3, 20, 0.1, nullptr, &vacuous) == GB_ERR_ARGUMENT);

  const double alphas[1] = {1.0};
  REQUIRE(gb_theorem2_bound(1.0, 16.0, alphas, 1, 1.0, &value) == GB_OK);
  CHECK(value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gb_theorem2_bound(1.0, 2.0, alphas, 1, 1.0, &value) == GB_ERR_PRECONDITION);
  CHECK(gb_theorem2_bound(1.0, 16.0, nullptr, 1, 1.0, &value) == GB_ERR_ARGUMENT);
}
