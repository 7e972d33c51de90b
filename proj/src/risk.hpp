#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "dataset.hpp"
#include "posterior.hpp"
#include "rng.hpp"

namespace genbayes {

/// Closed-form description of the true squared-error risk under the model:
///
///   R(u) = gamma_star + (u - u0)' M (u - u0)
///
/// where gamma_star = dof / (dof - 2) is the noise variance and
/// M = E[x x'] is the second-moment matrix of the feature distribution.
struct RiskOracle {
  double gamma_star = 0.0;
  Eigen::MatrixXd second_moment;
  ModelSpec model;
};

/// Analytic oracle: M = diag(1, v, ..., v) with v the truncated-normal
/// variance. Throws ContractError for dof <= 2 (infinite noise variance).
RiskOracle build_oracle(const ModelSpec& model);

/// Monte-Carlo oracle: M estimated from mc_samples fresh feature draws;
/// gamma_star stays analytic. Cross-check mode, needs mc_samples >= 10^4.
RiskOracle build_oracle_mc(const ModelSpec& model, long mc_samples, Rng& rng);

/// R(u) under the (unhalved) squared loss; >= gamma_star, equality iff u = u0.
double true_risk(const RiskOracle& oracle, const Hypothesis& u);

/// R(u) - gamma_star; nonnegative, zero only at u0.
double excess_risk(const RiskOracle& oracle, const Hypothesis& u);

struct McRisk {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Mean squared loss over m fresh model draws with its standard error.
/// Note that at dof = 5 the squared loss sits right at the edge of a finite
/// fourth moment, so the reported stderr is itself noisy there.
McRisk mc_risk(const ModelSpec& model, const Hypothesis& u, long m, Rng& rng);

/// Ordinary least squares from Gram statistics. Throws SingularDesignError
/// when the design is rank deficient.
Hypothesis erm_fit(const GramStats& gram);
Hypothesis erm_fit(const Dataset& data);

}  // namespace genbayes
