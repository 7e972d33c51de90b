#pragma once

#include <string>
#include <vector>

#include "analysis.hpp"
#include "experiment.hpp"

namespace genbayes {

/// Results table: dof,n,replicate,estimator,risk,excess_risk,
/// acceptance_rate,seed,wall_ms. acceptance_rate is empty on ERM rows.
void write_results_csv(const std::string& path, const ExperimentTable& table);

/// Strict reader for the same format: exact header, fixed field count,
/// fully parsed numerics. Violations raise IoError with the line number.
ExperimentTable read_results_csv(const std::string& path);

struct RateRow {
  long dof = 0;
  Estimator estimator = Estimator::Erm;
  std::string statistic;
  RateFit fit;
};

/// dof,estimator,statistic,slope,slope_stderr,intercept,r_squared,n_points
void write_rates_csv(const std::string& path, const std::vector<RateRow>& rows);

/// Plot-ready series for one fit: log10_n,log10_statistic,fitted
void write_plot_csv(const std::string& path, const RateFit& fit);

/// dof,n,beta,eps_scale,threshold,mean_tail_mass,replicates
void write_concentration_csv(const std::string& path,
                             const std::vector<ConcentrationPoint>& curve);

struct BernsteinRow {
  long dof = 0;
  double excess = 0.0;
  double second_moment = 0.0;
};

/// dof,excess,second_moment
void write_bernstein_csv(const std::string& path,
                         const std::vector<BernsteinRow>& rows);

struct EnvelopeRow {
  long dof = 0;
  double r = 0.0;
  long m = 0;
  double estimate = 0.0;
};

/// dof,r,m,estimate
void write_envelope_csv(const std::string& path,
                        const std::vector<EnvelopeRow>& rows);

struct BoundRow {
  long dof = 0;
  std::string calculator;  // "theorem3" or "theorem2"
  BoundReport report;
};

/// dof,calculator,value,first_term,second_term,vacuous
void write_bounds_csv(const std::string& path,
                      const std::vector<BoundRow>& rows);

}  // namespace genbayes
