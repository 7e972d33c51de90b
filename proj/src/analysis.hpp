#pragma once

#include <utility>
#include <vector>

#include "dataset.hpp"
#include "hypothesis.hpp"
#include "rng.hpp"

namespace genbayes {

/// Least-squares line through (log10 n, log10 statistic) points.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log10 n, log10 stat)

  long n_points() const { return static_cast<long>(points.size()); }
};

/// OLS fit of log10(statistic) against log10(n). Needs >= 3 distinct n and
/// strictly positive statistics; the slope estimates the convergence
/// exponent (a statistic decaying like n^{-beta} gives slope -beta).
RateFit fit_power_law(const std::vector<std::pair<double, double>>& n_and_stat);

/// One theoretical learning-rate bound, kept in pieces so callers can show
/// which side of the combinator was active.
struct BoundReport {
  double value = 0.0;
  double first_term = 0.0;   // the complexity/moment term
  double second_term = 0.0;  // 1/(1+kappa)
  bool vacuous = false;      // value <= 0: no positive rate is certified
};

/// min(1 - 2*sqrt(d/k), 1/(1+kappa)). Can be vacuous for small k.
BoundReport theorem3_bound(long d, long k, double kappa);

/// max((1 - 2*sqrt(C/r)) / (2 - min alpha), 1/(1+kappa)), evaluated exactly
/// as stated; note the max combinator here against the min above — the two
/// forms are not equivalent and are both reported verbatim by the CLI.
/// r may be +infinity. Requires C >= 1, r >= 4C, alphas in (0,1], kappa > 0.
BoundReport theorem2_bound(double c, double r, const std::vector<double>& alphas,
                           double kappa);

/// One probe location: analytic excess risk paired with the Monte-Carlo
/// second moment of the loss difference against the optimum.
struct BernsteinPoint {
  Hypothesis u;
  double excess = 0.0;
  double second_moment = 0.0;
};

/// Rays from u0: +/- each coordinate axis and +/- the diagonal, at 10 radii
/// 0.05..0.5, all inside the prior ball. Spans about two decades of excess.
std::vector<Hypothesis> make_bernstein_grid(const ModelSpec& model,
                                            const PriorSpec& prior);

/// Estimates E[(l(Z,u) - l(Z,u0))^2] at each grid point from one shared pool
/// of m model draws (unhalved squared loss). Needs m >= 10^5 and dof > 4 so
/// the fourth moments exist.
std::vector<BernsteinPoint> bernstein_probe(const ModelSpec& model,
                                            const std::vector<Hypothesis>& grid,
                                            long m, Rng& rng);

/// Log-log slope of second_moment against excess over the probe points:
/// the empirical variance-bound exponent alpha.
double fit_alpha(const std::vector<BernsteinPoint>& points);

/// sup over the prior ball of the squared residual at one observation:
/// the residual is affine in u, so the sup has the closed form
/// (|y - x.center| + radius*||x||)^2.
double envelope_supremum(const Eigen::VectorXd& x, double y,
                         const PriorSpec& prior);

/// (E[sup_{u in ball} l(Z,u)^r])^{1/r} by Monte Carlo over m model draws.
/// Requires r < dof: higher moments diverge under t noise.
double envelope_probe(const ModelSpec& model, const PriorSpec& prior, double r,
                      long m, Rng& rng);

}  // namespace genbayes
