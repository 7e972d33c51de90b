#pragma once

#include <cstdint>
#include <string>

#include "dataset.hpp"
#include "rng.hpp"

namespace genbayes {

/// One draw from the standard normal conditioned on [-a, a], by rejection.
/// For a = 1 the acceptance probability is 2*Phi(1) - 1, about 0.683.
double sample_truncated_normal(Rng& rng, double a);

/// Chi-squared with k degrees of freedom: sum of k squared normals for
/// k <= 64, Gamma(k/2, 2) above.
double sample_chi_squared(Rng& rng, long k);

/// Student t with k degrees of freedom via N / sqrt(chi2_k / k).
double sample_student_t(Rng& rng, long k);

/// Closed-form variance of the standard normal truncated to [-a, a]:
/// 1 - 2 a phi(a) / (2 Phi(a) - 1). About 0.2911 at a = 1.
double truncated_normal_variance(double a);

/// Generates n samples from the model. Feature draws come first within each
/// sample (column order), then the noise draw, so the stream layout is part
/// of the reproducibility contract: the same (model, n, seed) is always
/// bit-identical.
///
/// noise_scale multiplies the t-distributed noise; 1 is the model proper.
/// 0 and -1 exist for validation (exact fits, antithetic noise pairs).
Dataset generate_dataset(const ModelSpec& model, Eigen::Index n, std::uint64_t seed,
                         double noise_scale = 1.0);

/// CSV dump with header x1,...,x{d-1},y (the intercept column is implicit).
void write_dataset_csv(const std::string& path, const Dataset& data);

}  // namespace genbayes
