#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "datagen.hpp"
#include "risk.hpp"
#include "util.hpp"

namespace genbayes {

RateFit fit_power_law(const std::vector<std::pair<double, double>>& n_and_stat) {
  std::vector<double> distinct;
  for (const auto& [n, stat] : n_and_stat) {
    if (std::find(distinct.begin(), distinct.end(), n) == distinct.end()) {
      distinct.push_back(n);
    }
  }
  if (distinct.size() < 3) {
    throw ContractError("fit_power_law: need at least 3 distinct sample "
                        "sizes, got " +
                        std::to_string(distinct.size()));
  }
  RateFit fit;
  fit.points.reserve(n_and_stat.size());
  for (const auto& [n, stat] : n_and_stat) {
    if (!(n > 0.0)) throw ContractError("fit_power_law: sample size <= 0");
    if (!(stat > 0.0)) {
      throw ContractError(
          "fit_power_law: statistic " + format_double(stat) +
          " at n=" + format_double(n) + " is not positive, cannot take logs");
    }
    fit.points.emplace_back(std::log10(n), std::log10(stat));
  }

  const double m = static_cast<double>(fit.points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx <= 0.0) {
    throw ContractError("fit_power_law: sample sizes are not distinct");
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;

  double ssr = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double resid = y - (fit.intercept + fit.slope * x);
    ssr += resid * resid;
  }
  fit.slope_stderr =
      m > 2.0 ? std::sqrt(std::max(ssr, 0.0) / (m - 2.0) / sxx) : 0.0;
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return fit;
}

BoundReport theorem3_bound(long d, long k, double kappa) {
  if (d < 1) throw ContractError("theorem3_bound: d must be >= 1");
  if (k < 1) throw ContractError("theorem3_bound: k must be >= 1");
  if (!(kappa > 0.0)) throw ContractError("theorem3_bound: kappa must be > 0");
  BoundReport report;
  report.first_term =
      1.0 - 2.0 * std::sqrt(static_cast<double>(d) / static_cast<double>(k));
  report.second_term = 1.0 / (1.0 + kappa);
  report.value = std::min(report.first_term, report.second_term);
  report.vacuous = report.value <= 0.0;
  return report;
}

BoundReport theorem2_bound(double c, double r, const std::vector<double>& alphas,
                           double kappa) {
  if (!(c >= 1.0)) throw ContractError("theorem2_bound: C must be >= 1");
  if (!(r >= 4.0 * c)) throw ContractError("theorem2_bound: r must be >= 4C");
  if (alphas.empty()) {
    throw ContractError("theorem2_bound: alphas must be nonempty");
  }
  for (double a : alphas) {
    if (!(a > 0.0) || a > 1.0) {
      throw ContractError("theorem2_bound: every alpha must lie in (0,1]");
    }
  }
  if (!(kappa > 0.0)) throw ContractError("theorem2_bound: kappa must be > 0");

  const double min_alpha = *std::min_element(alphas.begin(), alphas.end());
  const double ratio = std::isinf(r) ? 0.0 : c / r;
  BoundReport report;
  report.first_term = (1.0 - 2.0 * std::sqrt(ratio)) / (2.0 - min_alpha);
  report.second_term = 1.0 / (1.0 + kappa);
  report.value = std::max(report.first_term, report.second_term);
  report.vacuous = report.value <= 0.0;
  return report;
}

std::vector<Hypothesis> make_bernstein_grid(const ModelSpec& model,
                                            const PriorSpec& prior) {
  const long d = model.d();
  if (d < 1) throw ContractError("make_bernstein_grid: empty model");
  if (prior.center.size() != d) {
    throw ContractError("make_bernstein_grid: prior/model dimension mismatch");
  }

  std::vector<Eigen::VectorXd> directions;
  for (long j = 0; j < d; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e(j) = 1.0;
    directions.push_back(e);
    directions.push_back(-e);
  }
  const Eigen::VectorXd diag =
      Eigen::VectorXd::Ones(d) / std::sqrt(static_cast<double>(d));
  directions.push_back(diag);
  directions.push_back(-diag);

  std::vector<Hypothesis> grid;
  for (const Eigen::VectorXd& w : directions) {
    for (int step = 1; step <= 10; ++step) {
      const double t = 0.05 * step;
      Hypothesis u;
      u.coeffs = model.u0.coeffs + t * w;
      if ((u.coeffs - prior.center).norm() <= prior.radius) {
        grid.push_back(std::move(u));
      }
    }
  }
  if (grid.empty()) {
    throw ContractError(
        "make_bernstein_grid: no ray point falls inside the prior ball");
  }
  return grid;
}

std::vector<BernsteinPoint> bernstein_probe(const ModelSpec& model,
                                            const std::vector<Hypothesis>& grid,
                                            long m, Rng& rng) {
  if (m < 100000) {
    throw ContractError("bernstein_probe: need at least 10^5 draws");
  }
  if (model.dof <= 4) {
    throw ContractError(
        "bernstein_probe: dof must exceed 4 for finite fourth moments");
  }
  if (grid.empty()) throw ContractError("bernstein_probe: empty grid");

  const long d = model.d();
  Eigen::MatrixXd x(m, d);
  Eigen::VectorXd eps(m);
  for (long i = 0; i < m; ++i) {
    x(i, 0) = 1.0;
    for (long j = 1; j < d; ++j) x(i, j) = sample_truncated_normal(rng, model.trunc);
    eps(i) = sample_student_t(rng, model.dof);
  }

  const RiskOracle oracle = build_oracle(model);
  std::vector<BernsteinPoint> points;
  points.reserve(grid.size());
  for (const Hypothesis& u : grid) {
    if (u.dim() != d) {
      throw ContractError("bernstein_probe: grid/model dimension mismatch");
    }
    const Eigen::VectorXd delta = u.coeffs - model.u0.coeffs;
    // l(Z,u) - l(Z,u0) = (eps - x.delta)^2 - eps^2 for the squared loss.
    const Eigen::ArrayXd proj = (x * delta).array();
    const Eigen::ArrayXd diff = proj.square() - 2.0 * eps.array() * proj;
    BernsteinPoint point;
    point.u = u;
    point.excess = excess_risk(oracle, u);
    point.second_moment = diff.square().mean();
    points.push_back(std::move(point));
  }
  return points;
}

double fit_alpha(const std::vector<BernsteinPoint>& points) {
  std::vector<std::pair<double, double>> pairs;
  for (const BernsteinPoint& p : points) {
    if (p.excess > 0.0 && p.second_moment > 0.0) {
      pairs.emplace_back(p.excess, p.second_moment);
    }
  }
  if (pairs.size() < 3) {
    throw ContractError("fit_alpha: need at least 3 points away from u0");
  }
  return fit_power_law(pairs).slope;
}

double envelope_supremum(const Eigen::VectorXd& x, double y,
                         const PriorSpec& prior) {
  if (x.size() != prior.center.size()) {
    throw ContractError("envelope_supremum: feature/prior dimension mismatch");
  }
  // The residual is affine in u, so its absolute value over the ball peaks
  // at a boundary point aligned with x.
  const double sup_resid = std::abs(y - x.dot(prior.center)) + prior.radius * x.norm();
  return sup_resid * sup_resid;
}

double envelope_probe(const ModelSpec& model, const PriorSpec& prior, double r,
                      long m, Rng& rng) {
  if (!(r > 0.0)) throw ContractError("envelope_probe: r must be positive");
  if (r >= static_cast<double>(model.dof)) {
    throw ContractError(
        "envelope_probe: r must be below dof — E|noise|^r diverges for r >= " +
        std::to_string(model.dof));
  }
  if (m < 1) throw ContractError("envelope_probe: m must be positive");
  const long d = model.d();
  if (prior.center.size() != d) {
    throw ContractError("envelope_probe: prior/model dimension mismatch");
  }

  Eigen::VectorXd x(d);
  double acc = 0.0;
  for (long i = 0; i < m; ++i) {
    x(0) = 1.0;
    for (long j = 1; j < d; ++j) x(j) = sample_truncated_normal(rng, model.trunc);
    const double y = x.dot(model.u0.coeffs) + sample_student_t(rng, model.dof);
    acc += std::pow(envelope_supremum(x, y, prior), r);
  }
  return std::pow(acc / static_cast<double>(m), 1.0 / r);
}

}  // namespace genbayes
