#include "datagen.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "util.hpp"

namespace genbayes {

double sample_truncated_normal(Rng& rng, double a) {
  if (!(a > 0.0)) {
    throw ContractError("sample_truncated_normal: truncation value must be positive");
  }
  for (;;) {
    const double z = rng.normal();
    if (std::abs(z) <= a) return z;
  }
}

double sample_chi_squared(Rng& rng, long k) {
  if (k < 1) {
    throw ContractError("sample_chi_squared: k must be >= 1");
  }
  if (k <= 64) {
    double total = 0.0;
    for (long i = 0; i < k; ++i) {
      const double z = rng.normal();
      total += z * z;
    }
    return total;
  }
  return 2.0 * rng.gamma(0.5 * static_cast<double>(k));
}

double sample_student_t(Rng& rng, long k) {
  if (k < 1) {
    throw ContractError("sample_student_t: k must be >= 1");
  }
  const double z = rng.normal();
  const double chi2 = sample_chi_squared(rng, k);
  return z / std::sqrt(chi2 / static_cast<double>(k));
}

double truncated_normal_variance(double a) {
  const double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
  const double mass = std::erf(a / std::sqrt(2.0));  // 2 Phi(a) - 1
  return 1.0 - 2.0 * a * phi / mass;
}

Dataset generate_dataset(const ModelSpec& model, Eigen::Index n, std::uint64_t seed,
                         double noise_scale) {
  if (n < 1) {
    throw ContractError("generate_dataset: n must be >= 1");
  }
  if (model.dof < 3) {
    throw ContractError("generate_dataset: dof must be >= 3 for a finite noise variance");
  }
  if (!(model.trunc > 0.0)) {
    throw ContractError("generate_dataset: trunc must be positive");
  }
  const Eigen::Index d = model.d();
  if (d < 1) {
    throw ContractError("generate_dataset: model dimension must be >= 1");
  }
  Rng rng(seed);
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < d; ++j) {
      x(i, j) = sample_truncated_normal(rng, model.trunc);
    }
    const double eps = sample_student_t(rng, model.dof);
    y(i) = x.row(i).dot(model.u0.coeffs) + noise_scale * eps;
  }
  return Dataset(std::move(x), std::move(y), model, seed);
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path));
  }
  const Eigen::Index d = data.dim();
  for (Eigen::Index j = 1; j < d; ++j) {
    out << fmt::format("x{},", j);
  }
  out << "y\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 1; j < d; ++j) {
      out << format_double(data.x()(i, j)) << ',';
    }
    out << format_double(data.y()(i)) << '\n';
  }
  if (!out) {
    throw IoError(fmt::format("write failed for '{}'", path));
  }
}

}  // namespace genbayes
