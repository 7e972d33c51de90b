#include "experiment.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <utility>

#include <fmt/format.h>

#include "datagen.hpp"
#include "posterior.hpp"
#include "risk.hpp"
#include "util.hpp"

namespace genbayes {

namespace {

using Clock = std::chrono::steady_clock;

long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start)
      .count();
}

void validate(const ExperimentConfig& config) {
  if (config.dofs.empty()) throw ContractError("experiment: no dofs given");
  for (long dof : config.dofs) {
    if (dof < 3) {
      throw ContractError("experiment: dof must be >= 3, got " +
                          std::to_string(dof));
    }
    if (config.risk_mode == RiskMode::Mc && dof < 5) {
      throw ContractError("experiment: mc risk mode needs dof >= 5");
    }
  }
  if (config.sample_sizes.empty()) {
    throw ContractError("experiment: no sample sizes given");
  }
  long prev = 0;
  for (long n : config.sample_sizes) {
    if (n < 1) throw ContractError("experiment: sample size must be >= 1");
    if (n <= prev) {
      throw ContractError("experiment: sample sizes must be strictly increasing");
    }
    prev = n;
  }
  if (config.replicates < 1) {
    throw ContractError("experiment: replicates must be >= 1");
  }
  if (config.estimator_count() == 0) {
    throw ContractError("experiment: no estimators selected");
  }
  if (config.u0.dim() < 1) throw ContractError("experiment: empty u0");
  if (config.prior.center.size() != config.u0.dim()) {
    throw ContractError("experiment: prior/model dimension mismatch");
  }
  if (!(config.trunc > 0.0)) {
    throw ContractError("experiment: trunc must be positive");
  }
  if (!(config.loss.eta > 0.0)) {
    throw ContractError("experiment: eta must be positive");
  }
  if (config.chain.burn_in < 0 || config.chain.iterations < 1 ||
      config.chain.thin < 1) {
    throw ContractError("experiment: invalid chain protocol");
  }
  if (!config.chain.scale_is_auto() && !(config.chain.proposal_scale > 0.0)) {
    throw ContractError("experiment: proposal_scale must be positive or auto");
  }
  if (config.risk_mode == RiskMode::Mc && config.mc_risk_draws < 1000) {
    throw ContractError("experiment: mc risk mode needs >= 10^3 draws");
  }
}

struct ReplicateSetup {
  std::optional<Dataset> data;
  GramStats gram;
  Hypothesis erm;
  std::uint64_t seed = 0;

  bool ok() const { return data.has_value(); }
};

/// Simulate one replicate's dataset and least-squares fit, reseeding up to
/// 3 times if the design comes out singular.
ReplicateSetup make_replicate(const ExperimentConfig& config,
                              const ModelSpec& model, long dof, long n,
                              long rep) {
  ReplicateSetup setup;
  for (std::uint64_t attempt = 0; attempt <= 3; ++attempt) {
    const std::uint64_t seed = derive_seed(
        config.master_seed,
        {static_cast<std::uint64_t>(Stream::Dataset),
         static_cast<std::uint64_t>(dof), static_cast<std::uint64_t>(n),
         static_cast<std::uint64_t>(rep), attempt});
    Dataset data = generate_dataset(model, n, seed);
    GramStats gram = gram_statistics(data);
    try {
      setup.erm = erm_fit(gram);
    } catch (const SingularDesignError&) {
      continue;
    }
    setup.data.emplace(std::move(data));
    setup.gram = std::move(gram);
    setup.seed = seed;
    return setup;
  }
  warn(fmt::format(
      "design singular after 4 attempts; dropping dof={} n={} replicate={}",
      dof, n, rep));
  return setup;
}

Hypothesis project_into_ball(const Hypothesis& u, const PriorSpec& prior) {
  const Eigen::VectorXd delta = u.coeffs - prior.center;
  const double dist = delta.norm();
  if (dist <= prior.radius) return u;
  Hypothesis inside;
  inside.coeffs = prior.center + delta * (0.99 * prior.radius / dist);
  return inside;
}

ChainResult run_chain(const ExperimentConfig& config,
                      const ReplicateSetup& setup, long dof, long n, long rep) {
  ChainConfig chain = config.chain;
  chain.seed = derive_seed(config.master_seed,
                           {static_cast<std::uint64_t>(Stream::Chain),
                            static_cast<std::uint64_t>(dof),
                            static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(rep)});
  Rng rng(chain.seed);

  const Hypothesis init = project_into_ball(setup.erm, config.prior);
  const Proposal proposal =
      chain.scale_is_auto()
          ? auto_proposal_scale(setup.gram, n)
          : Proposal{chain.proposal_scale, Eigen::MatrixXd()};

  if (config.loss.kind == LossSpec::Kind::AbsPower) {
    const Dataset& data = *setup.data;
    auto target = [&config, &data, h = Hypothesis{}](
                      const Eigen::VectorXd& u) mutable {
      h.coeffs = u;
      return log_posterior_unnorm(config.loss, config.prior, data, h);
    };
    return metropolis_run(target, init, proposal, chain, rng);
  }
  auto target = [&config, &setup, h = Hypothesis{}](
                    const Eigen::VectorXd& u) mutable {
    h.coeffs = u;
    return log_posterior_gram(config.loss, config.prior, setup.gram, h);
  };
  return metropolis_run(target, init, proposal, chain, rng);
}

double score_risk(const ExperimentConfig& config, const RiskOracle& oracle,
                  const ModelSpec& model, const Hypothesis& u, long dof, long n,
                  long rep, std::uint64_t which) {
  if (config.risk_mode == RiskMode::Analytic) return true_risk(oracle, u);
  Rng rng(derive_seed(config.master_seed,
                      {static_cast<std::uint64_t>(Stream::RiskMc),
                       static_cast<std::uint64_t>(dof),
                       static_cast<std::uint64_t>(n),
                       static_cast<std::uint64_t>(rep), which}));
  return mc_risk(model, u, config.mc_risk_draws, rng).estimate;
}

struct TaskOut {
  std::optional<ExperimentRow> erm;
  std::optional<ExperimentRow> bayes;
};

struct GridShape {
  long sizes = 0;
  long replicates = 0;

  long count(long dofs) const { return dofs * sizes * replicates; }
  void decode(long task, long& di, long& si, long& rep) const {
    di = task / (sizes * replicates);
    const long rem = task % (sizes * replicates);
    si = rem / replicates;
    rep = rem % replicates;
  }
};

}  // namespace

ModelSpec ExperimentConfig::model_for(long dof) const {
  ModelSpec model;
  model.u0 = u0;
  model.dof = dof;
  model.trunc = trunc;
  return model;
}

const char* estimator_name(Estimator estimator) {
  return estimator == Estimator::Erm ? "erm" : "bayes";
}

std::string statistic_name(RateStatistic statistic, bool mean_of_logs) {
  std::string name =
      statistic == RateStatistic::MeanExcess ? "mean-excess" : "mean-risk";
  return mean_of_logs ? "log-" + name : name;
}

ExperimentTable run_experiment(const ExperimentConfig& config) {
  validate(config);

  std::map<long, RiskOracle> oracles;
  for (long dof : config.dofs) oracles.emplace(dof, build_oracle(config.model_for(dof)));

  const GridShape shape{static_cast<long>(config.sample_sizes.size()),
                        config.replicates};
  const long tasks = shape.count(static_cast<long>(config.dofs.size()));
  std::vector<TaskOut> outs(tasks);

  parallel_for(tasks, config.workers, [&](long task) {
    long di = 0, si = 0, rep = 0;
    shape.decode(task, di, si, rep);
    const long dof = config.dofs[di];
    const long n = config.sample_sizes[si];
    const ModelSpec model = config.model_for(dof);
    const RiskOracle& oracle = oracles.at(dof);

    const auto t0 = Clock::now();
    const ReplicateSetup setup = make_replicate(config, model, dof, n, rep);
    if (!setup.ok()) return;
    if (config.dump_datasets) {
      write_dataset_csv(
          fmt::format("{}/dataset-k{}-n{}-r{}.csv", config.dump_dir, dof, n, rep),
          *setup.data);
    }

    TaskOut& out = outs[task];
    if (config.run_erm) {
      ExperimentRow row;
      row.dof = dof;
      row.n = n;
      row.replicate = rep;
      row.estimator = Estimator::Erm;
      row.risk = score_risk(config, oracle, model, setup.erm, dof, n, rep, 0);
      row.excess_risk = excess_risk(oracle, setup.erm);
      row.seed = setup.seed;
      row.wall_ms = config.row_timings ? elapsed_ms(t0) : 0;
      out.erm = row;
    }

    if (config.run_bayes) {
      const auto t1 = Clock::now();
      const ChainResult chain = run_chain(config, setup, dof, n, rep);
      if (config.dump_chains) {
        write_chain_csv(
            fmt::format("{}/chain-k{}-n{}-r{}.csv", config.dump_dir, dof, n, rep),
            chain);
      }
      const Hypothesis estimate = posterior_mean(chain);
      ExperimentRow row;
      row.dof = dof;
      row.n = n;
      row.replicate = rep;
      row.estimator = Estimator::Bayes;
      row.risk = score_risk(config, oracle, model, estimate, dof, n, rep, 1);
      row.excess_risk = excess_risk(oracle, estimate);
      row.acceptance_rate = chain.acceptance_rate;
      row.seed = setup.seed;
      row.wall_ms = config.row_timings ? elapsed_ms(t1) : 0;
      out.bayes = row;
    }
  });

  ExperimentTable table;
  table.rows.reserve(tasks * config.estimator_count());
  for (const TaskOut& out : outs) {
    if (out.erm) table.rows.push_back(*out.erm);
    if (out.bayes) table.rows.push_back(*out.bayes);
  }
  return table;
}

RateFit fit_loglog(const ExperimentTable& table, long dof, Estimator estimator,
                   RateStatistic statistic, bool mean_of_logs) {
  std::map<long, std::vector<double>> by_n;
  for (const ExperimentRow& row : table.rows) {
    if (row.dof != dof || row.estimator != estimator) continue;
    by_n[row.n].push_back(statistic == RateStatistic::MeanExcess
                              ? row.excess_risk
                              : row.risk);
  }

  std::vector<std::pair<double, double>> points;
  points.reserve(by_n.size());
  for (const auto& [n, values] : by_n) {
    double stat = 0.0;
    if (mean_of_logs) {
      for (double v : values) {
        if (!(v > 0.0)) {
          throw ContractError(
              "fit_loglog: mean-of-logs needs strictly positive values");
        }
        stat += std::log10(v);
      }
      stat = std::pow(10.0, stat / static_cast<double>(values.size()));
    } else {
      for (double v : values) stat += v;
      stat /= static_cast<double>(values.size());
    }
    points.emplace_back(static_cast<double>(n), stat);
  }
  return fit_power_law(points);
}

std::vector<ConcentrationPoint> concentration_curve(
    const ExperimentConfig& config, double beta, double eps_scale) {
  validate(config);
  if (!(beta > 0.0)) {
    throw ContractError("concentration_curve: beta must be positive");
  }
  if (!(eps_scale > 0.0)) {
    throw ContractError("concentration_curve: eps_scale must be positive");
  }
  if (!config.run_bayes) {
    throw ContractError("concentration_curve: needs the bayes estimator");
  }

  std::map<long, RiskOracle> oracles;
  for (long dof : config.dofs) oracles.emplace(dof, build_oracle(config.model_for(dof)));

  const GridShape shape{static_cast<long>(config.sample_sizes.size()),
                        config.replicates};
  const long tasks = shape.count(static_cast<long>(config.dofs.size()));
  std::vector<double> masses(tasks, std::numeric_limits<double>::quiet_NaN());

  parallel_for(tasks, config.workers, [&](long task) {
    long di = 0, si = 0, rep = 0;
    shape.decode(task, di, si, rep);
    const long dof = config.dofs[di];
    const long n = config.sample_sizes[si];
    const ModelSpec model = config.model_for(dof);
    const RiskOracle& oracle = oracles.at(dof);

    const ReplicateSetup setup = make_replicate(config, model, dof, n, rep);
    if (!setup.ok()) return;
    const ChainResult chain = run_chain(config, setup, dof, n, rep);
    const double threshold =
        oracle.gamma_star +
        eps_scale * std::pow(static_cast<double>(n), -beta);
    Hypothesis h;
    masses[task] = tail_mass(
        chain,
        [&oracle, &h](const Eigen::VectorXd& u) {
          h.coeffs = u;
          return true_risk(oracle, h);
        },
        threshold);
  });

  std::vector<ConcentrationPoint> curve;
  for (std::size_t di = 0; di < config.dofs.size(); ++di) {
    for (std::size_t si = 0; si < config.sample_sizes.size(); ++si) {
      ConcentrationPoint point;
      point.dof = config.dofs[di];
      point.n = config.sample_sizes[si];
      point.beta = beta;
      point.eps_scale = eps_scale;
      point.threshold =
          oracles.at(point.dof).gamma_star +
          eps_scale * std::pow(static_cast<double>(point.n), -beta);

      double sum = 0.0, sumsq = 0.0;
      long count = 0;
      for (long rep = 0; rep < config.replicates; ++rep) {
        const long task =
            (static_cast<long>(di) * shape.sizes + static_cast<long>(si)) *
                shape.replicates +
            rep;
        const double mass = masses[task];
        if (std::isnan(mass)) continue;
        sum += mass;
        sumsq += mass * mass;
        ++count;
      }
      if (count == 0) continue;
      point.replicates = count;
      point.mean_tail_mass = sum / static_cast<double>(count);
      if (count > 1) {
        const double var =
            (sumsq - static_cast<double>(count) * point.mean_tail_mass *
                         point.mean_tail_mass) /
            static_cast<double>(count - 1);
        point.se = var > 0.0
                       ? std::sqrt(var / static_cast<double>(count))
                       : 0.0;
      }
      curve.push_back(point);
    }
  }
  return curve;
}

}  // namespace genbayes
