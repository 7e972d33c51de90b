#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "experiment.hpp"
#include "risk.hpp"
#include "test_support.hpp"
#include "util.hpp"

using namespace genbayes;

namespace {

/// Small but real campaign: one dof, three sizes, fast chains.
ExperimentConfig small_config() {
  ExperimentConfig config;
  config.dofs = {10};
  config.sample_sizes = {20, 40, 80};
  config.replicates = 3;
  config.chain.burn_in = 500;
  config.chain.iterations = 4000;
  config.chain.thin = 1;
  config.master_seed = 12345;
  config.workers = 1;
  return config;
}

bool rows_identical(const ExperimentTable& a, const ExperimentTable& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const ExperimentRow& p = a.rows[i];
    const ExperimentRow& q = b.rows[i];
    const bool acc_same =
        (std::isnan(p.acceptance_rate) && std::isnan(q.acceptance_rate)) ||
        p.acceptance_rate == q.acceptance_rate;
    if (p.dof != q.dof || p.n != q.n || p.replicate != q.replicate ||
        p.estimator != q.estimator || p.risk != q.risk ||
        p.excess_risk != q.excess_risk || !acc_same || p.seed != q.seed ||
        p.wall_ms != q.wall_ms) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("estimator and statistic names") {
  CHECK(std::string(estimator_name(Estimator::Erm)) == "erm");
  CHECK(std::string(estimator_name(Estimator::Bayes)) == "bayes");
  CHECK(statistic_name(RateStatistic::MeanExcess, false) == "mean-excess");
  CHECK(statistic_name(RateStatistic::MeanRisk, false) == "mean-risk");
  CHECK(statistic_name(RateStatistic::MeanExcess, true) == "log-mean-excess");
}

TEST_CASE("a single-estimator grid yields one row per cell") {
  ExperimentConfig config = small_config();
  config.sample_sizes = {20, 40};
  config.replicates = 2;
  config.run_bayes = false;
  const ExperimentTable table = run_experiment(config);
  REQUIRE(table.rows.size() == 4);
  for (const ExperimentRow& row : table.rows) {
    CHECK(row.estimator == Estimator::Erm);
    CHECK(std::isnan(row.acceptance_rate));
    CHECK(row.risk > 0.0);
    CHECK(row.excess_risk >= 0.0);
    CHECK(row.wall_ms == 0);
  }
}

TEST_CASE("rows come back in grid order with both estimators interleaved") {
  const ExperimentConfig config = small_config();
  const ExperimentTable table = run_experiment(config);
  REQUIRE(table.rows.size() == 3 * 3 * 2);

  std::size_t i = 0;
  for (long n : {20L, 40L, 80L}) {
    for (long rep = 0; rep < 3; ++rep) {
      const ExperimentRow& erm = table.rows[i++];
      const ExperimentRow& bayes = table.rows[i++];
      CHECK(erm.estimator == Estimator::Erm);
      CHECK(bayes.estimator == Estimator::Bayes);
      CHECK(erm.n == n);
      CHECK(bayes.n == n);
      CHECK(erm.replicate == rep);
      CHECK(bayes.replicate == rep);
      // Both estimators score the same dataset.
      CHECK(erm.seed == bayes.seed);
      CHECK(bayes.acceptance_rate > 0.05);
      CHECK(bayes.acceptance_rate < 0.95);
    }
  }
}

TEST_CASE("results are independent of the worker count and rerun-stable") {
  ExperimentConfig config = small_config();
  config.workers = 1;
  const ExperimentTable serial = run_experiment(config);
  config.workers = 8;
  const ExperimentTable threaded = run_experiment(config);
  CHECK(rows_identical(serial, threaded));

  const ExperimentTable again = run_experiment(config);
  CHECK(rows_identical(threaded, again));

  config.master_seed += 1;
  const ExperimentTable other = run_experiment(config);
  CHECK_FALSE(rows_identical(serial, other));
}

TEST_CASE("underdetermined designs are dropped with a warning, not fabricated") {
  ExperimentConfig config = small_config();
  config.sample_sizes = {2};  // n < d: singular whatever the draw
  config.replicates = 2;
  const ExperimentTable table = run_experiment(config);
  CHECK(table.rows.empty());
}

TEST_CASE("bayes rows respect the prior ball and both risks cohere") {
  ExperimentConfig config = small_config();
  config.sample_sizes = {40};
  const ExperimentTable table = run_experiment(config);
  const RiskOracle oracle = build_oracle(config.model_for(10));
  for (const ExperimentRow& row : table.rows) {
    CHECK(row.risk == doctest::Approx(row.excess_risk + oracle.gamma_star));
    CHECK(row.risk >= oracle.gamma_star);
  }
}

TEST_CASE("monte-carlo risk scoring stays close to the analytic oracle") {
  ExperimentConfig config = small_config();
  config.sample_sizes = {80};
  config.replicates = 2;
  config.risk_mode = RiskMode::Mc;
  config.mc_risk_draws = 200000;
  const ExperimentTable mc = run_experiment(config);

  config.risk_mode = RiskMode::Analytic;
  const ExperimentTable exact = run_experiment(config);
  REQUIRE(mc.rows.size() == exact.rows.size());
  for (std::size_t i = 0; i < mc.rows.size(); ++i) {
    // Same estimates underneath, so risks differ only by MC noise around a
    // value of order gamma_star = 1.25.
    CHECK(mc.rows[i].risk == doctest::Approx(exact.rows[i].risk).epsilon(0.05));
    // The excess column stays analytic in both modes.
    CHECK(mc.rows[i].excess_risk == exact.rows[i].excess_risk);
  }
}

TEST_CASE("config validation rejects malformed grids") {
  ExperimentConfig config = small_config();
  config.dofs = {2};
  CHECK_THROWS_AS(run_experiment(config), ContractError);

  config = small_config();
  config.sample_sizes = {40, 20};
  CHECK_THROWS_AS(run_experiment(config), ContractError);

  config = small_config();
  config.sample_sizes = {20, 20, 40};
  CHECK_THROWS_AS(run_experiment(config), ContractError);

  config = small_config();
  config.run_erm = false;
  config.run_bayes = false;
  CHECK_THROWS_AS(run_experiment(config), ContractError);

  config = small_config();
  config.replicates = 0;
  CHECK_THROWS_AS(run_experiment(config), ContractError);

  config = small_config();
  config.risk_mode = RiskMode::Mc;
  config.dofs = {4};  // MC risk needs a finite squared-loss variance
  CHECK_THROWS_AS(run_experiment(config), ContractError);

  config = small_config();
  config.loss.eta = 0.0;
  CHECK_THROWS_AS(run_experiment(config), ContractError);
}

TEST_CASE("per-row timings are zero unless explicitly requested") {
  ExperimentConfig config = small_config();
  config.sample_sizes = {20};
  config.replicates = 1;
  config.row_timings = true;
  config.chain.iterations = 300000;  // long enough to register in ms
  const ExperimentTable table = run_experiment(config);
  bool any_nonzero = false;
  for (const ExperimentRow& row : table.rows) {
    CHECK(row.wall_ms >= 0);
    any_nonzero |= row.wall_ms > 0;
  }
  CHECK(any_nonzero);
}

TEST_CASE("loglog fit over a synthetic table recovers the planted rate") {
  ExperimentTable table;
  for (long n : {10L, 100L, 1000L}) {
    for (long rep = 0; rep < 2; ++rep) {
      ExperimentRow row;
      row.dof = 10;
      row.n = n;
      row.replicate = rep;
      row.estimator = Estimator::Erm;
      row.excess_risk = 5.0 / static_cast<double>(n);
      row.risk = row.excess_risk + 1.25;
      table.rows.push_back(row);
    }
  }
  const RateFit fit = fit_loglog(table, 10, Estimator::Erm, RateStatistic::MeanExcess);
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.n_points() == 3);

  // The raw-risk statistic flattens out because gamma_star dominates.
  const RateFit raw = fit_loglog(table, 10, Estimator::Erm, RateStatistic::MeanRisk);
  CHECK(raw.slope > -0.35);
  CHECK(raw.slope < 0.0);

  // No rows for this dof/estimator.
  CHECK_THROWS_AS(fit_loglog(table, 5, Estimator::Erm, RateStatistic::MeanExcess),
                  ContractError);
  CHECK_THROWS_AS(fit_loglog(table, 10, Estimator::Bayes, RateStatistic::MeanExcess),
                  ContractError);
}

TEST_CASE("loglog fit can aggregate by geometric mean") {
  ExperimentTable table;
  for (long n : {10L, 100L, 1000L}) {
    // Two replicates at x/4 and 4x: arithmetic mean 17x/8, geometric mean x.
    for (double factor : {0.25, 4.0}) {
      ExperimentRow row;
      row.dof = 10;
      row.n = n;
      row.estimator = Estimator::Erm;
      row.excess_risk = factor * 3.0 / static_cast<double>(n);
      row.risk = row.excess_risk + 1.25;
      table.rows.push_back(row);
    }
  }
  const RateFit arith = fit_loglog(table, 10, Estimator::Erm, RateStatistic::MeanExcess, false);
  const RateFit geo = fit_loglog(table, 10, Estimator::Erm, RateStatistic::MeanExcess, true);
  CHECK(arith.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(geo.slope == doctest::Approx(-1.0).epsilon(1e-12));
  // Intercepts differ by log10(17/8) exactly.
  CHECK(arith.intercept - geo.intercept ==
        doctest::Approx(std::log10(17.0 / 8.0)).epsilon(1e-10));

  // A zero excess poisons the geometric mean but not the arithmetic one.
  ExperimentRow zero;
  zero.dof = 10;
  zero.n = 10;
  zero.estimator = Estimator::Erm;
  zero.excess_risk = 0.0;
  zero.risk = 1.25;
  table.rows.push_back(zero);
  CHECK_NOTHROW(fit_loglog(table, 10, Estimator::Erm, RateStatistic::MeanExcess, false));
  CHECK_THROWS_AS(fit_loglog(table, 10, Estimator::Erm, RateStatistic::MeanExcess, true),
                  ContractError);
}

TEST_CASE("concentration curve tracks the shrinking threshold") {
  ExperimentConfig config = small_config();
  config.sample_sizes = {20, 80};
  config.replicates = 4;
  const auto curve = concentration_curve(config, 0.5, 5.0);
  REQUIRE(curve.size() == 2);
  const RiskOracle oracle = build_oracle(config.model_for(10));
  for (const ConcentrationPoint& point : curve) {
    CHECK(point.dof == 10);
    CHECK(point.beta == 0.5);
    CHECK(point.eps_scale == 5.0);
    CHECK(point.threshold ==
          doctest::Approx(oracle.gamma_star +
                          5.0 * std::pow(static_cast<double>(point.n), -0.5)));
    CHECK(point.mean_tail_mass >= 0.0);
    CHECK(point.mean_tail_mass <= 1.0);
    CHECK(point.se >= 0.0);
    CHECK(point.replicates == 4);
  }

  // An enormous margin puts the threshold far above any reachable risk.
  const auto lofty = concentration_curve(config, 0.5, 1e9);
  for (const ConcentrationPoint& point : lofty) {
    CHECK(point.mean_tail_mass == 0.0);
  }
}

TEST_CASE("concentration curve needs the posterior estimator") {
  ExperimentConfig config = small_config();
  config.run_bayes = false;
  CHECK_THROWS_AS(concentration_curve(config, 0.5, 5.0), ContractError);
  config = small_config();
  CHECK_THROWS_AS(concentration_curve(config, 0.0, 5.0), ContractError);
  CHECK_THROWS_AS(concentration_curve(config, 0.5, 0.0), ContractError);
}
