#pragma once

#include <Eigen/Dense>

namespace genbayes {

/// Regression coefficient vector; entry 0 is the intercept.
struct Hypothesis {
  Eigen::VectorXd coeffs;

  Eigen::Index dim() const { return coeffs.size(); }
};

/// One observation (x, y). Feature vectors produced by the data generator
/// carry a leading 1 for the intercept.
struct Sample {
  Eigen::VectorXd x;
  double y = 0.0;
};

/// Prior over the coefficient ball. Both kinds are supported on the closed
/// L2 ball B(center, radius); the truncated Gaussian reweights it by
/// exp(-|u - center|^2 / (2 scale^2)).
struct PriorSpec {
  enum class Kind { UniformBall, TruncatedGaussian };

  Kind kind = Kind::UniformBall;
  Eigen::VectorXd center;
  double radius = 10.0;
  double scale = 1.0;  // truncated-gaussian only

  static PriorSpec uniform_ball(Eigen::Index d, double radius = 10.0) {
    PriorSpec p;
    p.center = Eigen::VectorXd::Zero(d);
    p.radius = radius;
    return p;
  }
};

/// Per-sample loss defining the generalized likelihood exp(-eta * total loss).
///
///   squared-half:  (y - x.u)^2 / 2     (the sampling target)
///   squared:       (y - x.u)^2         (the risk-evaluation loss)
///   abs-power:     c1 * |x.u - y|^c2   (weighted-average style losses)
struct LossSpec {
  enum class Kind { SquaredHalf, Squared, AbsPower };

  Kind kind = Kind::SquaredHalf;
  double c1 = 1.0;
  double c2 = 1.0;
  double eta = 1.0;  // tempering factor on the total loss

  static LossSpec squared_half(double eta = 1.0) { return {Kind::SquaredHalf, 1.0, 1.0, eta}; }
  static LossSpec squared() { return {Kind::Squared, 1.0, 1.0, 1.0}; }
  static LossSpec abs_power(double c1, double c2, double eta = 1.0) {
    return {Kind::AbsPower, c1, c2, eta};
  }
};

/// Per-sample loss value; nonnegative for every built-in kind.
/// Throws ContractError on dimension mismatch.
double loss(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x, double y,
            const Hypothesis& u);
double loss(const LossSpec& spec, const Sample& z, const Hypothesis& u);

/// Log prior density at u, up to an additive constant; -infinity outside the
/// support ball. The uniform-ball constant is fixed at 0 so only differences
/// enter Metropolis ratios.
double log_prior(const PriorSpec& prior, const Hypothesis& u);

}  // namespace genbayes
