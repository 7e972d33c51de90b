#include "mcmc.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace genbayes {

Proposal auto_proposal_scale(const GramStats& gram, long n) {
  const long d = gram.dim();
  if (d < 1) throw ContractError("auto_proposal_scale: empty Gram statistics");
  if (n < 1) throw ContractError("auto_proposal_scale: sample count < 1");

  Eigen::LLT<Eigen::MatrixXd> llt(gram.g);
  if (llt.info() != Eigen::Success) {
    warn("singular design matrix; proposal falls back to identity covariance");
    Proposal fallback;
    fallback.scale = 0.1 / std::sqrt(static_cast<double>(n));
    return fallback;
  }
  Proposal proposal;
  proposal.scale = 2.38 / std::sqrt(static_cast<double>(d));
  proposal.covariance = llt.solve(Eigen::MatrixXd::Identity(d, d));
  return proposal;
}

Proposal auto_proposal_scale(const Dataset& data) {
  return auto_proposal_scale(gram_statistics(data), data.n());
}

Hypothesis posterior_mean(const ChainResult& result) {
  if (result.samples.rows() == 0) {
    throw ContractError("posterior_mean: empty chain");
  }
  Hypothesis h;
  h.coeffs = result.samples.colwise().mean();
  return h;
}

Eigen::VectorXd posterior_mean_se(const ChainResult& result) {
  const long n = result.samples.rows();
  if (n < 16) {
    throw ContractError("posterior_mean_se: need at least 16 kept draws");
  }
  const long b = static_cast<long>(std::sqrt(static_cast<double>(n)));
  const long nb = n / b;
  const long d = result.samples.cols();

  Eigen::MatrixXd batch_means(nb, d);
  for (long j = 0; j < nb; ++j) {
    batch_means.row(j) = result.samples.middleRows(j * b, b).colwise().mean();
  }
  const Eigen::RowVectorXd grand = batch_means.colwise().mean();
  Eigen::VectorXd se(d);
  for (long c = 0; c < d; ++c) {
    const double var =
        (batch_means.col(c).array() - grand(c)).square().sum() /
        static_cast<double>(nb - 1);
    se(c) = std::sqrt(var / static_cast<double>(nb));
  }
  return se;
}

double tail_mass(const ChainResult& result,
                 const std::function<double(const Eigen::VectorXd&)>& risk,
                 double threshold) {
  const long n = result.samples.rows();
  if (n == 0) throw ContractError("tail_mass: empty chain");
  long count = 0;
  for (long i = 0; i < n; ++i) {
    if (risk(result.samples.row(i)) > threshold) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

void write_chain_csv(const std::string& path, const ChainResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const long d = result.samples.cols();
  out << "iter";
  for (long c = 0; c < d; ++c) out << ",u" << c;
  out << "\n";
  for (long i = 0; i < result.samples.rows(); ++i) {
    out << (i + 1) * result.config.thin;
    for (long c = 0; c < d; ++c) {
      out << ',' << format_double(result.samples(i, c));
    }
    out << "\n";
  }
  if (!out.good()) throw IoError("failed while writing " + path);
}

}  // namespace genbayes
