#include "hypothesis.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "util.hpp"

namespace genbayes {

double loss(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x, double y,
            const Hypothesis& u) {
  if (x.size() != u.coeffs.size()) {
    throw ContractError(fmt::format("loss: dimension mismatch, x has {} entries, u has {}",
                                    x.size(), u.coeffs.size()));
  }
  const double residual = y - x.dot(u.coeffs);
  switch (spec.kind) {
    case LossSpec::Kind::SquaredHalf:
      return 0.5 * residual * residual;
    case LossSpec::Kind::Squared:
      return residual * residual;
    case LossSpec::Kind::AbsPower:
      return spec.c1 * std::pow(std::abs(residual), spec.c2);
  }
  throw InternalError("loss: unhandled loss kind");
}

double loss(const LossSpec& spec, const Sample& z, const Hypothesis& u) {
  return loss(spec, z.x, z.y, u);
}

double log_prior(const PriorSpec& prior, const Hypothesis& u) {
  const double dist = (u.coeffs - prior.center).norm();
  if (dist > prior.radius) {
    return -std::numeric_limits<double>::infinity();
  }
  switch (prior.kind) {
    case PriorSpec::Kind::UniformBall:
      return 0.0;
    case PriorSpec::Kind::TruncatedGaussian:
      return -0.5 * dist * dist / (prior.scale * prior.scale);
  }
  throw InternalError("log_prior: unhandled prior kind");
}

}  // namespace genbayes
