#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "datagen.hpp"
#include "posterior.hpp"
#include "risk.hpp"
#include "rng.hpp"
#include "test_support.hpp"
#include "util.hpp"

using namespace genbayes;

namespace {

Hypothesis shift(const Hypothesis& base, int coord, double amount) {
  Hypothesis u = base;
  u.coeffs(coord) += amount;
  return u;
}

}  // namespace

TEST_CASE("analytic oracle: noise variance and feature second moment") {
  const ModelSpec model = ModelSpec::defaults(5);
  const RiskOracle oracle = build_oracle(model);

  CHECK(oracle.gamma_star == 5.0 / 3.0);
  CHECK(oracle.second_moment(0, 0) == 1.0);
  const double v = testsup::truncnorm_variance_quadrature(1.0);
  CHECK(oracle.second_moment(1, 1) == doctest::Approx(v).epsilon(1e-8));
  CHECK(oracle.second_moment(2, 2) == doctest::Approx(v).epsilon(1e-8));
  CHECK(oracle.second_moment(0, 1) == 0.0);
  CHECK(oracle.second_moment(1, 2) == 0.0);

  ModelSpec bad = model;
  bad.dof = 2;
  CHECK_THROWS_AS(build_oracle(bad), ContractError);
}

TEST_CASE("monte-carlo oracle agrees with the analytic one") {
  const ModelSpec model = ModelSpec::defaults(10);
  Rng rng(404);
  const RiskOracle mc = build_oracle_mc(model, 200000, rng);
  const RiskOracle exact = build_oracle(model);
  CHECK(mc.gamma_star == exact.gamma_star);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(testsup::within(mc.second_moment(i, j), exact.second_moment(i, j),
                            0.005));
    }
  }
  CHECK_THROWS_AS(build_oracle_mc(model, 100, rng), ContractError);
}

TEST_CASE("true risk at hand-checked hypotheses") {
  const ModelSpec model = ModelSpec::defaults(5);
  const RiskOracle oracle = build_oracle(model);

  CHECK(true_risk(oracle, model.u0) == 5.0 / 3.0);
  CHECK(excess_risk(oracle, model.u0) == 0.0);

  // Intercept shift by 1: excess is exactly 1.
  CHECK(true_risk(oracle, shift(model.u0, 0, 1.0)) == doctest::Approx(5.0 / 3.0 + 1.0));
  // Slope shift by 1: excess is the truncated-normal variance.
  CHECK(excess_risk(oracle, shift(model.u0, 1, 1.0)) ==
        doctest::Approx(truncated_normal_variance(1.0)));
}

TEST_CASE("excess risk is positive away from u0 and scales quadratically") {
  const ModelSpec model = ModelSpec::defaults(10);
  const RiskOracle oracle = build_oracle(model);
  Rng rng(5150);

  const double v = truncated_normal_variance(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd w(3);
    for (int j = 0; j < 3; ++j) w(j) = rng.normal();
    if (w.norm() < 1e-6) continue;
    Hypothesis u = model.u0;
    u.coeffs += w;
    const double e1 = excess_risk(oracle, u);
    CHECK(e1 > 0.0);

    Hypothesis u2 = model.u0;
    u2.coeffs += 2.0 * w;
    CHECK(excess_risk(oracle, u2) == doctest::Approx(4.0 * e1).epsilon(1e-12));

    // Curvature floor: excess >= lambda_min(M) * |u - u0|^2.
    CHECK(e1 >= v * w.squaredNorm() - 1e-12);
  }
}

TEST_CASE("monte-carlo risk brackets the analytic value") {
  const ModelSpec model = ModelSpec::defaults(10);
  const RiskOracle oracle = build_oracle(model);
  Rng rng(21);

  // u0 itself, and a spread of displaced hypotheses.
  int agreements = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    Hypothesis u = model.u0;
    for (int j = 0; j < 3; ++j) u.coeffs(j) += 0.5 * rng.normal();
    const McRisk est = mc_risk(model, u, 100000, rng);
    CHECK(est.estimate > 0.0);
    CHECK(est.stderr_ > 0.0);
    if (std::abs(est.estimate - true_risk(oracle, u)) <= 4.0 * est.stderr_) {
      ++agreements;
    }
  }
  CHECK(agreements >= trials - 2);
}

TEST_CASE("monte-carlo risk enforces its preconditions") {
  const ModelSpec model = ModelSpec::defaults(10);
  Rng rng(1);
  CHECK_THROWS_AS(mc_risk(model, model.u0, 10, rng), ContractError);
  ModelSpec thin_tail = model;
  thin_tail.dof = 4;  // squared-loss variance needs dof >= 5
  CHECK_THROWS_AS(mc_risk(thin_tail, model.u0, 100000, rng), ContractError);
}

TEST_CASE("least squares recovers u0 exactly on noiseless data") {
  const ModelSpec model = ModelSpec::defaults(10);
  const Dataset clean = generate_dataset(model, 30, 1234, 0.0);
  const Hypothesis fit = erm_fit(clean);
  CHECK((fit.coeffs - model.u0.coeffs).norm() < 1e-8);
}

TEST_CASE("least squares interpolates when n equals the dimension") {
  const ModelSpec model = ModelSpec::defaults(10);
  // Retry seeds until the 3x3 design is comfortably nonsingular.
  for (std::uint64_t seed = 60; seed < 80; ++seed) {
    const Dataset data = generate_dataset(model, 3, seed);
    try {
      const Hypothesis fit = erm_fit(data);
      const Eigen::VectorXd resid = data.y() - data.x() * fit.coeffs;
      CHECK(resid.lpNorm<Eigen::Infinity>() < 1e-8);
      return;
    } catch (const SingularDesignError&) {
      continue;
    }
  }
  FAIL("no nonsingular 3x3 design found in 20 seeds");
}

TEST_CASE("least squares is a local minimum of the empirical loss") {
  const ModelSpec model = ModelSpec::defaults(5);
  const Dataset data = generate_dataset(model, 50, 31337);
  const Hypothesis fit = erm_fit(data);
  const double at_fit = empirical_loss(LossSpec::squared(), data, fit);
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd delta(3);
    for (int j = 0; j < 3; ++j) delta(j) = rng.normal();
    delta *= 1e-3 / delta.norm();
    Hypothesis perturbed = fit;
    perturbed.coeffs += delta;
    CHECK(empirical_loss(LossSpec::squared(), data, perturbed) >= at_fit);
  }
}

TEST_CASE("least squares flags rank-deficient designs") {
  ModelSpec model = ModelSpec::defaults(10);
  const Dataset wide = generate_dataset(model, 2, 7);  // n < d
  CHECK_THROWS_AS(erm_fit(wide), SingularDesignError);

  // A duplicated column is singular at any n.
  Eigen::MatrixXd x(10, 3);
  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = rng.normal();
    x(i, 2) = x(i, 1);
  }
  const Dataset dup(x, Eigen::VectorXd::Ones(10), model, 0);
  CHECK_THROWS_AS(erm_fit(dup), SingularDesignError);
}

TEST_CASE("least squares excess risk decays roughly like 1/n") {
  const ModelSpec model = ModelSpec::defaults(10);
  const RiskOracle oracle = build_oracle(model);

  auto mean_excess_at = [&](Eigen::Index n, std::uint64_t base) {
    double acc = 0.0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r) {
      const Dataset data = generate_dataset(model, n, base + static_cast<std::uint64_t>(r));
      acc += excess_risk(oracle, erm_fit(data));
    }
    return acc / reps;
  };

  const double coarse = mean_excess_at(100, 10000);
  const double fine = mean_excess_at(10000, 20000);
  const double ratio = coarse / fine;  // ideally about 100
  CHECK(ratio > 100.0 / 3.0);
  CHECK(ratio < 100.0 * 3.0);
}
