#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "dataset.hpp"
#include "hypothesis.hpp"
#include "mcmc.hpp"

namespace genbayes {

enum class Estimator { Erm, Bayes };
enum class RiskMode { Analytic, Mc };
enum class RateStatistic { MeanExcess, MeanRisk };

const char* estimator_name(Estimator estimator);
std::string statistic_name(RateStatistic statistic, bool mean_of_logs);

/// Full description of one simulation campaign. The dataset/chain/risk RNG
/// streams are all derived from master_seed and the grid coordinates, so a
/// config determines its results exactly, independent of worker count.
struct ExperimentConfig {
  std::vector<long> dofs{5, 10, 20};
  std::vector<long> sample_sizes{10,   20,   40,   80,   160,  320,
                                 640,  1280, 2560, 5120, 10240};
  long replicates = 100;
  ChainConfig chain;
  PriorSpec prior = PriorSpec::uniform_ball(3);
  LossSpec loss = LossSpec::squared_half();
  Hypothesis u0 = ModelSpec::defaults().u0;
  double trunc = 1.0;
  std::uint64_t master_seed = 0;
  bool run_erm = true;
  bool run_bayes = true;
  RiskMode risk_mode = RiskMode::Analytic;
  long mc_risk_draws = 100000;
  int workers = 0;  // 0 = all hardware threads
  // Real per-row timings make byte-identical reruns impossible, so they are
  // opt-in; wall_ms is 0 when this is off.
  bool row_timings = false;
  bool dump_chains = false;
  bool dump_datasets = false;
  std::string dump_dir = ".";

  ModelSpec model_for(long dof) const;
  long estimator_count() const {
    return (run_erm ? 1 : 0) + (run_bayes ? 1 : 0);
  }
};

struct ExperimentRow {
  long dof = 0;
  long n = 0;
  long replicate = 0;
  Estimator estimator = Estimator::Erm;
  double risk = 0.0;
  double excess_risk = 0.0;
  // NaN means "not applicable" (ERM rows); serialized as an empty field.
  double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;  // dataset seed actually used (retries perturb it)
  long wall_ms = 0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
};

/// Runs the (dof, n, replicate) grid: simulate a dataset, fit least squares,
/// sample the generalized posterior, and score both estimators against the
/// analytic risk oracle. Rows come back in grid order (dof, n, replicate,
/// erm-before-bayes) regardless of scheduling. Replicates whose design stays
/// singular after 3 reseeded retries are dropped with a warning.
ExperimentTable run_experiment(const ExperimentConfig& config);

/// Aggregates the chosen statistic over replicates at each sample size for
/// one (dof, estimator) series, then fits log10-vs-log10 least squares.
/// Default aggregation is the mean before logging; mean_of_logs switches to
/// the geometric mean for sensitivity checks.
RateFit fit_loglog(const ExperimentTable& table, long dof, Estimator estimator,
                   RateStatistic statistic, bool mean_of_logs = false);

struct ConcentrationPoint {
  long dof = 0;
  long n = 0;
  double beta = 0.0;
  double eps_scale = 0.0;
  double threshold = 0.0;      // gamma_star + eps_scale * n^{-beta}
  double mean_tail_mass = 0.0; // replicate average of the posterior mass
                               // outside the risk level set
  double se = 0.0;             // standard error over replicates (not serialized)
  long replicates = 0;
};

/// Posterior concentration sweep: for each (dof, n) runs the same chains as
/// run_experiment and averages the posterior tail mass above the shrinking
/// risk threshold gamma_star + eps_scale * n^{-beta}.
std::vector<ConcentrationPoint> concentration_curve(
    const ExperimentConfig& config, double beta, double eps_scale);

}  // namespace genbayes
