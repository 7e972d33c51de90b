#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <tuple>

#include <fmt/format.h>

#include "csvio.hpp"
#include "manifest.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace genbayes {

namespace {

// Probe identifiers inside the Probe seed stream, so the Monte-Carlo
// diagnostics draw independent randomness per probe and per dof.
constexpr std::uint64_t kBernsteinProbe = 1;
constexpr std::uint64_t kEnvelopeProbe = 2;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir + ": " + ec.message());
  }
}

void require_seed(const Config& config) {
  if (!config.seed_set) {
    throw ConfigError(
        "missing required key: master_seed (section [experiment])");
  }
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

Rng probe_rng(const Config& config, std::uint64_t probe, long dof) {
  return Rng(derive_seed(config.experiment.master_seed,
                         {static_cast<std::uint64_t>(Stream::Probe), probe,
                          static_cast<std::uint64_t>(dof)}));
}

std::string diagnose_bernstein(const Config& config, const std::string& out_dir,
                               Manifest& manifest) {
  require_seed(config);
  std::vector<BernsteinRow> rows;
  std::string summary = "bernstein variance-exponent probe\n";
  for (long dof : config.experiment.dofs) {
    const ModelSpec model = config.experiment.model_for(dof);
    const std::vector<Hypothesis> grid =
        make_bernstein_grid(model, config.experiment.prior);
    Rng rng = probe_rng(config, kBernsteinProbe, dof);
    const std::vector<BernsteinPoint> points =
        bernstein_probe(model, grid, config.diagnostics.bernstein_m, rng);
    for (const BernsteinPoint& point : points) {
      rows.push_back({dof, point.excess, point.second_moment});
    }
    summary += fmt::format("  dof={}: alpha={:.4f} over {} grid points\n", dof,
                           fit_alpha(points), points.size());
  }
  const std::string path = join_path(out_dir, "bernstein.csv");
  write_bernstein_csv(path, rows);
  manifest.outputs.push_back(path);
  return summary;
}

std::string diagnose_envelope(const Config& config, const std::string& out_dir,
                              Manifest& manifest) {
  require_seed(config);
  const double r = config.diagnostics.envelope_r;
  const long m = config.diagnostics.envelope_m;
  std::vector<EnvelopeRow> rows;
  std::string summary = fmt::format("envelope moment probe (r={})\n", r);
  for (long dof : config.experiment.dofs) {
    const ModelSpec model = config.experiment.model_for(dof);
    Rng rng = probe_rng(config, kEnvelopeProbe, dof);
    const double estimate =
        envelope_probe(model, config.experiment.prior, r, m, rng);
    rows.push_back({dof, r, m, estimate});
    summary += fmt::format("  dof={}: (E sup^r)^(1/r) = {:.6g}\n", dof, estimate);
  }
  const std::string path = join_path(out_dir, "envelope.csv");
  write_envelope_csv(path, rows);
  manifest.outputs.push_back(path);
  return summary;
}

std::string diagnose_concentration(const Config& config,
                                   const std::string& out_dir,
                                   Manifest& manifest) {
  require_seed(config);
  const std::vector<ConcentrationPoint> curve = concentration_curve(
      config.experiment, config.diagnostics.beta, config.diagnostics.eps_scale);
  const std::string path = join_path(out_dir, "concentration.csv");
  write_concentration_csv(path, curve);
  manifest.outputs.push_back(path);

  std::string summary =
      fmt::format("posterior tail mass above gamma* + {}*n^-{}\n",
                  format_double(config.diagnostics.eps_scale),
                  format_double(config.diagnostics.beta));
  for (const ConcentrationPoint& point : curve) {
    summary += fmt::format("  dof={} n={}: mean={:.4f} (se={:.4f}, {} reps)\n",
                           point.dof, point.n, point.mean_tail_mass, point.se,
                           point.replicates);
  }
  return summary;
}

std::string diagnose_bounds(const Config& config, const std::string& out_dir,
                            Manifest& manifest) {
  const DiagnosticsConfig& diag = config.diagnostics;
  const double c = diag.bounds_c > 0.0 ? diag.bounds_c
                                       : static_cast<double>(diag.bounds_d);
  std::vector<BoundRow> rows;
  std::string summary = fmt::format(
      "learning-rate bounds (d={}, kappa={}); note: the two statements "
      "combine their terms differently (min vs max) and both are reported "
      "verbatim\n",
      diag.bounds_d, format_double(diag.bounds_kappa));

  for (long dof : config.experiment.dofs) {
    const BoundReport three = theorem3_bound(diag.bounds_d, dof, diag.bounds_kappa);
    rows.push_back({dof, "theorem3", three});
    std::string line = fmt::format(
        "  dof={}: theorem3 = {:.6g}{}", dof, three.value,
        three.vacuous ? " (vacuous)" : "");

    const double r =
        diag.bounds_r > 0.0 ? diag.bounds_r : static_cast<double>(dof - 1);
    if (r >= 4.0 * c) {
      const BoundReport two = theorem2_bound(c, r, diag.alphas, diag.bounds_kappa);
      rows.push_back({dof, "theorem2", two});
      line += fmt::format(" | theorem2(C={}, r={}) = {:.6g} [max combinator]",
                          format_double(c), format_double(r), two.value);
    } else {
      line += fmt::format(" | theorem2 not evaluable: needs r >= 4C = {} (r={})",
                          format_double(4.0 * c), format_double(r));
    }
    summary += line + "\n";
  }
  const std::string path = join_path(out_dir, "bounds.csv");
  write_bounds_csv(path, rows);
  manifest.outputs.push_back(path);
  return summary;
}

}  // namespace

std::string command_run(Config config, const std::string& out_dir) {
  finalize_config(config);
  require_seed(config);
  ensure_dir(out_dir);
  config.experiment.dump_dir = out_dir;

  Manifest manifest;
  manifest.command = "run";
  manifest.config = &config;
  manifest.started = iso8601_utc_now();

  const ExperimentTable table = run_experiment(config.experiment);
  const std::string results_path = join_path(out_dir, "results.csv");
  write_results_csv(results_path, table);
  manifest.outputs.push_back(results_path);

  if (config.experiment.dump_datasets || config.experiment.dump_chains) {
    std::tuple<long, long, long> last{-1, -1, -1};
    for (const ExperimentRow& row : table.rows) {
      const std::tuple<long, long, long> key{row.dof, row.n, row.replicate};
      if (config.experiment.dump_datasets && key != last) {
        manifest.outputs.push_back(join_path(
            out_dir, fmt::format("dataset-k{}-n{}-r{}.csv", row.dof, row.n,
                                 row.replicate)));
      }
      last = key;
      if (config.experiment.dump_chains && row.estimator == Estimator::Bayes) {
        manifest.outputs.push_back(join_path(
            out_dir, fmt::format("chain-k{}-n{}-r{}.csv", row.dof, row.n,
                                 row.replicate)));
      }
    }
  }

  manifest.finished = iso8601_utc_now();
  write_manifest(join_path(out_dir, "manifest-run.json"), manifest);

  const long expected = static_cast<long>(config.experiment.dofs.size()) *
                        static_cast<long>(config.experiment.sample_sizes.size()) *
                        config.experiment.replicates *
                        config.experiment.estimator_count();
  std::string summary = fmt::format("wrote {} rows to {}",
                                    table.rows.size(), results_path);
  const long missing = expected - static_cast<long>(table.rows.size());
  if (missing > 0) {
    summary += fmt::format(" ({} rows missing from singular designs)", missing);
  }
  return summary;
}

std::string command_rates(const std::string& results_path,
                          const std::string& out_dir, RateStatistic statistic,
                          bool mean_of_logs) {
  const ExperimentTable table = read_results_csv(results_path);
  ensure_dir(out_dir);

  Manifest manifest;
  manifest.command = "rates";
  manifest.started = iso8601_utc_now();
  manifest.inputs.emplace_back(
      std::filesystem::path(results_path).filename().string(),
      sha256_file(results_path));

  // one fit per (dof, estimator) series, in first-appearance order
  std::vector<std::pair<long, Estimator>> series;
  for (const ExperimentRow& row : table.rows) {
    const std::pair<long, Estimator> key{row.dof, row.estimator};
    if (std::find(series.begin(), series.end(), key) == series.end()) {
      series.push_back(key);
    }
  }
  if (series.empty()) throw ContractError("results file has no data rows");

  const std::string stat_name = statistic_name(statistic, mean_of_logs);
  std::vector<RateRow> rates;
  std::string summary = fmt::format("rate fits ({})\n", stat_name);
  for (const auto& [dof, estimator] : series) {
    RateRow row;
    row.dof = dof;
    row.estimator = estimator;
    row.statistic = stat_name;
    row.fit = fit_loglog(table, dof, estimator, statistic, mean_of_logs);
    rates.push_back(row);

    const std::string plot_path = join_path(
        out_dir,
        fmt::format("rate-k{}-{}.csv", dof, estimator_name(estimator)));
    write_plot_csv(plot_path, row.fit);
    manifest.outputs.push_back(plot_path);
    summary += fmt::format(
        "  dof={} {}: slope={:.4f} (stderr={:.4f}, r^2={:.4f})\n", dof,
        estimator_name(estimator), row.fit.slope, row.fit.slope_stderr,
        row.fit.r_squared);
  }

  const std::string rates_path = join_path(out_dir, "rates.csv");
  write_rates_csv(rates_path, rates);
  manifest.outputs.insert(manifest.outputs.begin(), rates_path);

  manifest.finished = iso8601_utc_now();
  write_manifest(join_path(out_dir, "manifest-rates.json"), manifest);
  return summary;
}

std::string command_diagnose(Config config, const std::string& probe,
                             const std::string& out_dir) {
  finalize_config(config);
  ensure_dir(out_dir);

  Manifest manifest;
  manifest.command = "diagnose " + probe;
  manifest.config = &config;
  manifest.started = iso8601_utc_now();

  std::string summary;
  if (probe == "bernstein") {
    summary = diagnose_bernstein(config, out_dir, manifest);
  } else if (probe == "envelope") {
    summary = diagnose_envelope(config, out_dir, manifest);
  } else if (probe == "concentration") {
    summary = diagnose_concentration(config, out_dir, manifest);
  } else if (probe == "bounds") {
    summary = diagnose_bounds(config, out_dir, manifest);
  } else {
    throw ContractError("unknown diagnose probe '" + probe + "'");
  }

  manifest.finished = iso8601_utc_now();
  write_manifest(join_path(out_dir, fmt::format("manifest-{}.json", probe)),
                 manifest);
  return summary;
}

}  // namespace genbayes
