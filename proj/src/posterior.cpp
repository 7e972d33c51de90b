#include "posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "util.hpp"

namespace genbayes {

double empirical_loss(const LossSpec& spec, const Dataset& data, const Hypothesis& u) {
  if (data.n() < 1) {
    throw ContractError("empirical_loss: dataset is empty");
  }
  // Squared kinds vectorize over the residual vector.
  if (spec.kind == LossSpec::Kind::SquaredHalf || spec.kind == LossSpec::Kind::Squared) {
    if (data.dim() != u.dim()) {
      throw ContractError("empirical_loss: dimension mismatch");
    }
    const double ss = (data.y() - data.x() * u.coeffs).squaredNorm();
    const double factor = spec.kind == LossSpec::Kind::SquaredHalf ? 0.5 : 1.0;
    return factor * ss / static_cast<double>(data.n());
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    total += loss(spec, data.x().row(i).transpose(), data.y()(i), u);
  }
  return total / static_cast<double>(data.n());
}

double log_posterior_unnorm(const LossSpec& spec, const PriorSpec& prior, const Dataset& data,
                            const Hypothesis& u) {
  const double lp = log_prior(prior, u);
  if (!std::isfinite(lp)) {
    return -std::numeric_limits<double>::infinity();
  }
  return lp - spec.eta * empirical_loss(spec, data, u) * static_cast<double>(data.n());
}

GramStats gram_statistics(const Dataset& data) {
  if (data.n() < 1) {
    throw ContractError("gram_statistics: dataset is empty");
  }
  GramStats gram;
  gram.g = data.x().transpose() * data.x();
  gram.b = data.x().transpose() * data.y();
  gram.s = data.y().squaredNorm();
  // Symmetrize; x'x is symmetric up to rounding only.
  gram.g = 0.5 * (gram.g + gram.g.transpose()).eval();
  return gram;
}

double sum_squared_residuals(const GramStats& gram, const Eigen::Ref<const Eigen::VectorXd>& u) {
  return u.dot(gram.g * u) - 2.0 * u.dot(gram.b) + gram.s;
}

double log_posterior_gram(const LossSpec& spec, const PriorSpec& prior, const GramStats& gram,
                          const Hypothesis& u) {
  double factor = 0.0;
  switch (spec.kind) {
    case LossSpec::Kind::SquaredHalf:
      factor = 0.5;
      break;
    case LossSpec::Kind::Squared:
      factor = 1.0;
      break;
    case LossSpec::Kind::AbsPower:
      throw ContractError("log_posterior_gram: abs-power loss has no Gram form");
  }
  const double lp = log_prior(prior, u);
  if (!std::isfinite(lp)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double ss = std::max(0.0, sum_squared_residuals(gram, u.coeffs));
  return lp - spec.eta * factor * ss;
}

}  // namespace genbayes
