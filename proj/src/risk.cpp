#include "risk.hpp"

#include <cmath>

#include "datagen.hpp"
#include "util.hpp"

namespace genbayes {

namespace {

void check_model(const ModelSpec& model) {
  if (model.dof <= 2) {
    throw ContractError("risk oracle requires dof > 2, got " +
                        std::to_string(model.dof));
  }
  if (model.trunc <= 0.0) {
    throw ContractError("risk oracle requires trunc > 0");
  }
  if (model.d() < 1) {
    throw ContractError("risk oracle requires a nonempty hypothesis");
  }
}

}  // namespace

RiskOracle build_oracle(const ModelSpec& model) {
  check_model(model);
  const long d = model.d();
  RiskOracle oracle;
  oracle.model = model;
  oracle.gamma_star =
      static_cast<double>(model.dof) / static_cast<double>(model.dof - 2);
  oracle.second_moment = Eigen::MatrixXd::Zero(d, d);
  oracle.second_moment(0, 0) = 1.0;  // intercept column
  const double v = truncated_normal_variance(model.trunc);
  for (long j = 1; j < d; ++j) oracle.second_moment(j, j) = v;
  return oracle;
}

RiskOracle build_oracle_mc(const ModelSpec& model, long mc_samples, Rng& rng) {
  check_model(model);
  if (mc_samples < 10000) {
    throw ContractError("build_oracle_mc needs at least 10^4 design draws");
  }
  const long d = model.d();
  RiskOracle oracle;
  oracle.model = model;
  oracle.gamma_star =
      static_cast<double>(model.dof) / static_cast<double>(model.dof - 2);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd x(d);
  for (long i = 0; i < mc_samples; ++i) {
    x(0) = 1.0;
    for (long j = 1; j < d; ++j) x(j) = sample_truncated_normal(rng, model.trunc);
    m.noalias() += x * x.transpose();
  }
  oracle.second_moment = m / static_cast<double>(mc_samples);
  return oracle;
}

double true_risk(const RiskOracle& oracle, const Hypothesis& u) {
  return oracle.gamma_star + excess_risk(oracle, u);
}

double excess_risk(const RiskOracle& oracle, const Hypothesis& u) {
  if (u.dim() != oracle.model.d()) {
    throw ContractError("hypothesis dimension does not match the oracle");
  }
  const Eigen::VectorXd delta = u.coeffs - oracle.model.u0.coeffs;
  const double q = delta.dot(oracle.second_moment * delta);
  // q is a quadratic form in a PSD matrix; tiny negative values are rounding.
  return q < 0.0 ? 0.0 : q;
}

McRisk mc_risk(const ModelSpec& model, const Hypothesis& u, long m, Rng& rng) {
  check_model(model);
  if (model.dof < 5) {
    throw ContractError(
        "mc_risk needs dof >= 5 so the squared loss has finite variance");
  }
  if (m < 1000) throw ContractError("mc_risk needs at least 10^3 draws");
  if (u.dim() != model.d()) {
    throw ContractError("hypothesis dimension does not match the model");
  }
  const long d = model.d();
  Eigen::VectorXd x(d);
  double sum = 0.0;
  double sumsq = 0.0;
  for (long i = 0; i < m; ++i) {
    x(0) = 1.0;
    for (long j = 1; j < d; ++j) x(j) = sample_truncated_normal(rng, model.trunc);
    const double y = x.dot(model.u0.coeffs) + sample_student_t(rng, model.dof);
    const double r = y - x.dot(u.coeffs);
    const double loss = r * r;
    sum += loss;
    sumsq += loss * loss;
  }
  const double n = static_cast<double>(m);
  McRisk out;
  out.estimate = sum / n;
  const double var = (sumsq - n * out.estimate * out.estimate) / (n - 1.0);
  out.stderr_ = var > 0.0 ? std::sqrt(var / n) : 0.0;
  return out;
}

Hypothesis erm_fit(const GramStats& gram) {
  Eigen::LDLT<Eigen::MatrixXd> solver(gram.g);
  if (solver.info() != Eigen::Success || !solver.isPositive()) {
    throw SingularDesignError("design matrix is rank deficient");
  }
  // LDLT tolerates semidefinite inputs; reject near-zero pivots explicitly so
  // a duplicated-column design fails loudly instead of returning garbage.
  const double dmax = solver.vectorD().maxCoeff();
  if (dmax <= 0.0 ||
      solver.vectorD().minCoeff() < dmax * 1e-12) {
    throw SingularDesignError("design matrix is rank deficient");
  }
  Hypothesis h;
  h.coeffs = solver.solve(gram.b);
  return h;
}

Hypothesis erm_fit(const Dataset& data) { return erm_fit(gram_statistics(data)); }

}  // namespace genbayes
