#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "hypothesis.hpp"

namespace genbayes {

/// Linear model with t-distributed noise:
///
///   y = x . u0 + eps,  eps ~ t(dof),
///   x = [1, X1, ..., X_{d-1}],  X_j i.i.d. standard normal truncated to
///   [-trunc, trunc].
struct ModelSpec {
  Hypothesis u0;       // true coefficients, intercept first
  long dof = 10;       // t degrees of freedom; needs dof >= 3 for a finite noise variance
  double trunc = 1.0;  // symmetric feature truncation value
  Eigen::Index d() const { return u0.dim(); }

  static ModelSpec defaults(long dof = 10) {
    ModelSpec m;
    m.u0.coeffs = Eigen::Vector3d::Ones();
    m.dof = dof;
    return m;
  }
};

/// n i.i.d. samples stored row-major: row i of x() is the i-th feature
/// vector, y()(i) the response. Immutable after generation.
class Dataset {
public:
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, ModelSpec model, std::uint64_t seed)
      : x_(std::move(x)), y_(std::move(y)), model_(std::move(model)), seed_(seed) {}

  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index dim() const { return x_.cols(); }
  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  const ModelSpec& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

  Sample row(Eigen::Index i) const { return Sample{x_.row(i).transpose(), y_(i)}; }

private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  ModelSpec model_;
  std::uint64_t seed_;
};

}  // namespace genbayes
