#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "dataset.hpp"
#include "hypothesis.hpp"
#include "posterior.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace genbayes {

struct ChainConfig {
  long burn_in = 20000;
  long iterations = 100000;  // post-burn-in steps; every thin-th is kept
  long thin = 1;
  // NaN means "auto": resolve via auto_proposal_scale before running.
  double proposal_scale = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;

  bool scale_is_auto() const { return std::isnan(proposal_scale); }
};

/// Resolved random-walk proposal: step = scale * L * z with z ~ N(0, I) and
/// L the Cholesky factor of `covariance`. An empty covariance means identity.
struct Proposal {
  double scale = 1.0;
  Eigen::MatrixXd covariance;
};

struct ChainResult {
  Eigen::MatrixXd samples;  // one kept draw per row
  double acceptance_rate = 0.0;
  Hypothesis init;
  ChainConfig config;

  long kept() const { return samples.rows(); }
};

/// Proposal shaped by the data: covariance = G^{-1} (the large-sample
/// posterior covariance up to the noise scale), scale = 2.38/sqrt(d).
/// A singular Gram matrix falls back to the identity covariance with
/// scale = 0.1/sqrt(n) and a logged warning.
Proposal auto_proposal_scale(const GramStats& gram, long n);
Proposal auto_proposal_scale(const Dataset& data);

/// Coordinate-wise mean of the kept draws.
Hypothesis posterior_mean(const ChainResult& result);

/// Batch-means standard error of posterior_mean, one entry per coordinate.
/// Accounts for autocorrelation in the chain; needs at least 16 kept draws.
Eigen::VectorXd posterior_mean_se(const ChainResult& result);

/// Fraction of kept draws u with risk(u) > threshold.
double tail_mass(const ChainResult& result,
                 const std::function<double(const Eigen::VectorXd&)>& risk,
                 double threshold);

/// Kept draws as CSV: iter,u0,...,u{d-1} with iter the post-burn-in step
/// index at which the draw was recorded.
void write_chain_csv(const std::string& path, const ChainResult& result);

/// Random-walk Metropolis with a symmetric Gaussian proposal. `target` is an
/// unnormalized log density over coefficient vectors; -inf encodes "outside
/// support" and such proposals are always rejected. The first burn_in steps
/// are discarded; acceptance_rate counts accepted transitions over all
/// burn_in + iterations proposals.
template <class LogTarget>
ChainResult metropolis_run(LogTarget&& target, const Hypothesis& init,
                           const Proposal& proposal, const ChainConfig& config,
                           Rng& rng) {
  const long d = init.dim();
  if (d < 1) throw ContractError("metropolis_run: empty initial state");
  if (config.burn_in < 0) throw ContractError("metropolis_run: burn_in < 0");
  if (config.iterations < 1) {
    throw ContractError("metropolis_run: iterations < 1");
  }
  if (config.thin < 1) throw ContractError("metropolis_run: thin < 1");
  if (!(proposal.scale > 0.0) || !std::isfinite(proposal.scale)) {
    throw ContractError("metropolis_run: proposal scale must be positive");
  }

  const bool shaped = proposal.covariance.size() != 0;
  Eigen::MatrixXd factor;
  if (shaped) {
    if (proposal.covariance.rows() != d || proposal.covariance.cols() != d) {
      throw ContractError("metropolis_run: proposal covariance is " +
                          std::to_string(proposal.covariance.rows()) + "x" +
                          std::to_string(proposal.covariance.cols()) +
                          " but the state has dimension " + std::to_string(d));
    }
    Eigen::LLT<Eigen::MatrixXd> llt(proposal.covariance);
    if (llt.info() != Eigen::Success) {
      throw ContractError(
          "metropolis_run: proposal covariance is not positive definite");
    }
    factor = llt.matrixL();
  }

  double logp = target(init.coeffs);
  if (std::isnan(logp)) {
    throw InternalError("metropolis_run: target returned NaN");
  }
  if (logp == -std::numeric_limits<double>::infinity()) {
    throw ContractError(
        "metropolis_run: initial state has zero target density");
  }

  ChainResult result;
  result.init = init;
  result.config = config;
  const long kept_total = config.iterations / config.thin;
  result.samples.resize(kept_total, d);

  Eigen::VectorXd current = init.coeffs;
  Eigen::VectorXd step(d);
  Eigen::VectorXd candidate(d);
  const long total = config.burn_in + config.iterations;
  long accepted = 0;
  long kept = 0;

  for (long it = 0; it < total; ++it) {
    for (long j = 0; j < d; ++j) step(j) = rng.normal();
    if (shaped) {
      candidate.noalias() = factor * step;
      candidate = current + proposal.scale * candidate;
    } else {
      candidate = current + proposal.scale * step;
    }

    const double logq = target(candidate);
    if (std::isnan(logq)) {
      throw InternalError("metropolis_run: target returned NaN");
    }
    if (logq != -std::numeric_limits<double>::infinity()) {
      const double delta = logq - logp;
      if (delta >= 0.0 || std::log(rng.uniform_pos()) < delta) {
        current.swap(candidate);
        logp = logq;
        ++accepted;
      }
    }

    const long post = it - config.burn_in + 1;
    if (post > 0 && post % config.thin == 0 && kept < kept_total) {
      if (!std::isfinite(logp)) {
        throw InternalError(
            "metropolis_run: non-finite target at a kept state");
      }
      result.samples.row(kept++) = current;
    }
  }

  result.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(total);
  return result;
}

}  // namespace genbayes
