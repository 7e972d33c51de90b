#pragma once

#include "dataset.hpp"
#include "hypothesis.hpp"

namespace genbayes {

/// Mean per-sample loss over the dataset. Throws ContractError when empty.
double empirical_loss(const LossSpec& spec, const Dataset& data, const Hypothesis& u);

/// log prior(u) - eta * sum_i loss(z_i, u). Finite exactly when u lies in the
/// prior support; support violations surface as -infinity, never as errors,
/// so the sampler can treat them as automatic rejections.
double log_posterior_unnorm(const LossSpec& spec, const PriorSpec& prior, const Dataset& data,
                            const Hypothesis& u);

/// Sufficient statistics of the squared-residual sum:
///
///   sum_i (y_i - x_i.u)^2  =  u'Gu - 2 u'b + s
///
/// with G = sum x x', b = sum y x, s = sum y^2. Lets the sampler evaluate
/// squared losses in O(d^2) per proposal instead of O(n d).
struct GramStats {
  Eigen::MatrixXd g;
  Eigen::VectorXd b;
  double s = 0.0;

  Eigen::Index dim() const { return b.size(); }
};

GramStats gram_statistics(const Dataset& data);

/// u'Gu - 2 u'b + s; can be slightly negative from rounding when residuals
/// are ~0, so squared-loss callers clamp at zero.
double sum_squared_residuals(const GramStats& gram, const Eigen::Ref<const Eigen::VectorXd>& u);

/// Gram-statistics evaluation of log_posterior_unnorm. Only valid for the
/// squared and squared-half losses.
double log_posterior_gram(const LossSpec& spec, const PriorSpec& prior, const GramStats& gram,
                          const Hypothesis& u);

}  // namespace genbayes
