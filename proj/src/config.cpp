#include "config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "util.hpp"

namespace genbayes {

namespace {

[[noreturn]] void bad_key(const std::string& section, const std::string& key,
                          const std::string& where) {
  throw ConfigError(
      fmt::format("{}: unknown key '{}' in section [{}]", where, key, section));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& where, const std::string& what) {
  throw ConfigError(
      fmt::format("{}: invalid value '{}' for {}: {}", where, value, key, what));
}

double parse_real(const std::string& key, const std::string& value,
                  const std::string& where) {
  const std::optional<double> v = parse_double(value);
  if (!v) bad_value(key, value, where, "not a number");
  return *v;
}

double parse_positive(const std::string& key, const std::string& value,
                      const std::string& where) {
  const double v = parse_real(key, value, where);
  if (!(v > 0.0)) bad_value(key, value, where, "must be positive");
  return v;
}

long parse_integer(const std::string& key, const std::string& value,
                   const std::string& where, long min) {
  const std::optional<long> v = parse_long(value);
  if (!v) bad_value(key, value, where, "not an integer");
  if (*v < min) {
    bad_value(key, value, where, fmt::format("must be >= {}", min));
  }
  return *v;
}

bool parse_bool(const std::string& key, const std::string& value,
                const std::string& where) {
  if (value == "true") return true;
  if (value == "false") return false;
  bad_value(key, value, where, "expected true or false");
}

std::vector<std::string> split_list(const std::string& key,
                                    const std::string& value,
                                    const std::string& where) {
  std::vector<std::string> items;
  std::string current;
  std::stringstream stream(value);
  while (std::getline(stream, current, ',')) {
    std::string item{trim(current)};
    if (item.empty()) bad_value(key, value, where, "empty list item");
    items.push_back(std::move(item));
  }
  if (items.empty()) bad_value(key, value, where, "empty list");
  return items;
}

Eigen::VectorXd parse_vector(const std::string& key, const std::string& value,
                             const std::string& where) {
  const std::vector<std::string> items = split_list(key, value, where);
  Eigen::VectorXd v(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_real(key, items[i], where);
  }
  return v;
}

std::vector<long> parse_integer_list(const std::string& key,
                                     const std::string& value,
                                     const std::string& where, long min) {
  std::vector<long> out;
  for (const std::string& item : split_list(key, value, where)) {
    out.push_back(parse_integer(key, item, where, min));
  }
  return out;
}

void apply_model_key(Config& config, const std::string& key,
                     const std::string& value, const std::string& where) {
  ExperimentConfig& exp = config.experiment;
  if (key == "u0") {
    exp.u0.coeffs = parse_vector(key, value, where);
  } else if (key == "trunc") {
    exp.trunc = parse_positive(key, value, where);
  } else if (key == "loss") {
    if (value == "squared-half") {
      exp.loss.kind = LossSpec::Kind::SquaredHalf;
    } else if (value == "squared") {
      exp.loss.kind = LossSpec::Kind::Squared;
    } else if (value == "abs-power") {
      exp.loss.kind = LossSpec::Kind::AbsPower;
    } else {
      bad_value(key, value, where,
                "expected squared-half, squared, or abs-power");
    }
  } else if (key == "c1") {
    exp.loss.c1 = parse_positive(key, value, where);
  } else if (key == "c2") {
    exp.loss.c2 = parse_positive(key, value, where);
  } else if (key == "eta") {
    exp.loss.eta = parse_positive(key, value, where);
  } else {
    bad_key("model", key, where);
  }
}

void apply_prior_key(Config& config, const std::string& key,
                     const std::string& value, const std::string& where) {
  PriorSpec& prior = config.experiment.prior;
  if (key == "kind") {
    if (value == "uniform-ball") {
      prior.kind = PriorSpec::Kind::UniformBall;
    } else if (value == "truncated-gaussian") {
      prior.kind = PriorSpec::Kind::TruncatedGaussian;
    } else {
      bad_value(key, value, where,
                "expected uniform-ball or truncated-gaussian");
    }
  } else if (key == "center") {
    prior.center = parse_vector(key, value, where);
    config.prior_center_set = true;
  } else if (key == "radius") {
    prior.radius = parse_positive(key, value, where);
  } else if (key == "scale") {
    prior.scale = parse_positive(key, value, where);
  } else {
    bad_key("prior", key, where);
  }
}

void apply_chain_key(Config& config, const std::string& key,
                     const std::string& value, const std::string& where) {
  ChainConfig& chain = config.experiment.chain;
  if (key == "burn_in") {
    chain.burn_in = parse_integer(key, value, where, 0);
  } else if (key == "iterations") {
    chain.iterations = parse_integer(key, value, where, 1);
  } else if (key == "thin") {
    chain.thin = parse_integer(key, value, where, 1);
  } else if (key == "proposal_scale") {
    if (value == "auto") {
      chain.proposal_scale = std::numeric_limits<double>::quiet_NaN();
    } else {
      chain.proposal_scale = parse_positive(key, value, where);
    }
  } else {
    bad_key("chain", key, where);
  }
}

void apply_experiment_key(Config& config, const std::string& key,
                          const std::string& value, const std::string& where) {
  ExperimentConfig& exp = config.experiment;
  if (key == "dofs") {
    exp.dofs = parse_integer_list(key, value, where, 3);
  } else if (key == "sample_sizes") {
    exp.sample_sizes = parse_integer_list(key, value, where, 1);
  } else if (key == "replicates") {
    exp.replicates = parse_integer(key, value, where, 1);
  } else if (key == "master_seed") {
    const std::optional<std::uint64_t> seed = parse_u64(value);
    if (!seed) bad_value(key, value, where, "not an unsigned 64-bit integer");
    exp.master_seed = *seed;
    config.seed_set = true;
  } else if (key == "estimators") {
    exp.run_erm = false;
    exp.run_bayes = false;
    for (const std::string& item : split_list(key, value, where)) {
      if (item == "erm") {
        exp.run_erm = true;
      } else if (item == "bayes") {
        exp.run_bayes = true;
      } else {
        bad_value(key, item, where, "expected erm or bayes");
      }
    }
  } else if (key == "risk_mode") {
    if (value == "analytic") {
      exp.risk_mode = RiskMode::Analytic;
    } else if (value == "mc") {
      exp.risk_mode = RiskMode::Mc;
    } else {
      bad_value(key, value, where, "expected analytic or mc");
    }
  } else if (key == "mc_risk_draws") {
    exp.mc_risk_draws = parse_integer(key, value, where, 1000);
  } else if (key == "workers") {
    exp.workers = static_cast<int>(parse_integer(key, value, where, 0));
  } else if (key == "row_timings") {
    exp.row_timings = parse_bool(key, value, where);
  } else if (key == "dump_chains") {
    exp.dump_chains = parse_bool(key, value, where);
  } else if (key == "dump_datasets") {
    exp.dump_datasets = parse_bool(key, value, where);
  } else {
    bad_key("experiment", key, where);
  }
}

void apply_diagnostics_key(Config& config, const std::string& key,
                           const std::string& value, const std::string& where) {
  DiagnosticsConfig& diag = config.diagnostics;
  if (key == "beta") {
    diag.beta = parse_positive(key, value, where);
  } else if (key == "eps_scale") {
    diag.eps_scale = parse_positive(key, value, where);
  } else if (key == "bernstein_m") {
    diag.bernstein_m = parse_integer(key, value, where, 1);
  } else if (key == "envelope_m") {
    diag.envelope_m = parse_integer(key, value, where, 1);
  } else if (key == "envelope_r") {
    diag.envelope_r = parse_positive(key, value, where);
  } else if (key == "bounds_d") {
    diag.bounds_d = parse_integer(key, value, where, 1);
  } else if (key == "bounds_c") {
    diag.bounds_c = parse_positive(key, value, where);
  } else if (key == "bounds_r") {
    diag.bounds_r = parse_positive(key, value, where);
  } else if (key == "bounds_kappa") {
    diag.bounds_kappa = parse_positive(key, value, where);
  } else if (key == "alphas") {
    diag.alphas.clear();
    for (const std::string& item : split_list(key, value, where)) {
      const double a = parse_real(key, item, where);
      if (!(a > 0.0) || a > 1.0) {
        bad_value(key, item, where, "every alpha must lie in (0,1]");
      }
      diag.alphas.push_back(a);
    }
  } else {
    bad_key("diagnostics", key, where);
  }
}

std::string join_reals(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v(i));
  }
  return out;
}

template <class T>
std::string join_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string loss_name(LossSpec::Kind kind) {
  switch (kind) {
    case LossSpec::Kind::SquaredHalf: return "squared-half";
    case LossSpec::Kind::Squared: return "squared";
    case LossSpec::Kind::AbsPower: return "abs-power";
  }
  throw InternalError("unreachable loss kind");
}

std::string estimators_value(const ExperimentConfig& exp) {
  if (exp.run_erm && exp.run_bayes) return "erm,bayes";
  if (exp.run_erm) return "erm";
  if (exp.run_bayes) return "bayes";
  return "";
}

}  // namespace

void apply_config_key(Config& config, const std::string& section,
                      const std::string& key, const std::string& value,
                      const std::string& where) {
  if (section == "model") {
    apply_model_key(config, key, value, where);
  } else if (section == "prior") {
    apply_prior_key(config, key, value, where);
  } else if (section == "chain") {
    apply_chain_key(config, key, value, where);
  } else if (section == "experiment") {
    apply_experiment_key(config, key, value, where);
  } else if (section == "diagnostics") {
    apply_diagnostics_key(config, key, value, where);
  } else {
    throw ConfigError(fmt::format("{}: unknown section [{}]", where, section));
  }
}

Config parse_config_text(const std::string& text, const std::string& source) {
  Config config;
  std::stringstream stream(text);
  std::string line;
  std::string section;
  long line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string where = fmt::format("{}:{}", source, line_no);
    const std::string entry{trim(line)};
    if (entry.empty() || entry[0] == '#' || entry[0] == ';') continue;
    if (entry.front() == '[') {
      if (entry.back() != ']' || entry.size() < 3) {
        throw ConfigError(where + ": malformed section header");
      }
      section = std::string{trim(entry.substr(1, entry.size() - 2))};
      // validate the name eagerly so typos fail on their own line
      if (section != "model" && section != "prior" && section != "chain" &&
          section != "experiment" && section != "diagnostics") {
        throw ConfigError(
            fmt::format("{}: unknown section [{}]", where, section));
      }
      continue;
    }
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value");
    }
    const std::string key{trim(entry.substr(0, eq))};
    const std::string value{trim(entry.substr(eq + 1))};
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (section.empty()) {
      throw ConfigError(where + ": key outside any [section]");
    }
    apply_config_key(config, section, key, value, where);
  }
  finalize_config(config);
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

void set_config_value(Config& config, const std::string& dotted_key,
                      const std::string& value) {
  const std::size_t dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size()) {
    throw ConfigError("expected section.key, got '" + dotted_key + "'");
  }
  apply_config_key(config, dotted_key.substr(0, dot),
                   dotted_key.substr(dot + 1), value, "override");
}

std::string get_config_value(const Config& config,
                             const std::string& dotted_key) {
  // workers is settable but kept out of the manifest snapshot
  if (dotted_key == "experiment.workers") {
    return std::to_string(config.experiment.workers);
  }
  for (const auto& [key, value] : config_snapshot(config)) {
    if (key == dotted_key) return value;
  }
  throw ConfigError("unknown key '" + dotted_key + "'");
}

void finalize_config(Config& config) {
  ExperimentConfig& exp = config.experiment;
  if (exp.u0.dim() < 1) {
    throw ConfigError("model.u0 must have at least one coefficient");
  }
  if (!config.prior_center_set) {
    exp.prior.center = Eigen::VectorXd::Zero(exp.u0.dim());
  }
  if (exp.prior.center.size() != exp.u0.dim()) {
    throw ConfigError(fmt::format(
        "prior.center has {} entries but model.u0 has {}",
        exp.prior.center.size(), exp.u0.dim()));
  }
  long prev = 0;
  for (long n : exp.sample_sizes) {
    if (n <= prev) {
      throw ConfigError("experiment.sample_sizes must be strictly increasing");
    }
    prev = n;
  }
  if (!exp.run_erm && !exp.run_bayes) {
    throw ConfigError("experiment.estimators selects no estimator");
  }
}

std::vector<std::pair<std::string, std::string>> config_snapshot(
    const Config& config) {
  const ExperimentConfig& exp = config.experiment;
  const DiagnosticsConfig& diag = config.diagnostics;
  std::vector<std::pair<std::string, std::string>> snapshot;
  auto add = [&snapshot](const std::string& key, std::string value) {
    snapshot.emplace_back(key, std::move(value));
  };

  add("model.u0", join_reals(exp.u0.coeffs));
  add("model.trunc", format_double(exp.trunc));
  add("model.loss", loss_name(exp.loss.kind));
  add("model.c1", format_double(exp.loss.c1));
  add("model.c2", format_double(exp.loss.c2));
  add("model.eta", format_double(exp.loss.eta));

  add("prior.kind", exp.prior.kind == PriorSpec::Kind::UniformBall
                        ? "uniform-ball"
                        : "truncated-gaussian");
  add("prior.center", exp.prior.center.size() > 0 ? join_reals(exp.prior.center)
                                                  : std::string("auto"));
  add("prior.radius", format_double(exp.prior.radius));
  add("prior.scale", format_double(exp.prior.scale));

  add("chain.burn_in", std::to_string(exp.chain.burn_in));
  add("chain.iterations", std::to_string(exp.chain.iterations));
  add("chain.thin", std::to_string(exp.chain.thin));
  add("chain.proposal_scale", exp.chain.scale_is_auto()
                                  ? "auto"
                                  : format_double(exp.chain.proposal_scale));

  add("experiment.dofs", join_list(exp.dofs));
  add("experiment.sample_sizes", join_list(exp.sample_sizes));
  add("experiment.replicates", std::to_string(exp.replicates));
  add("experiment.master_seed",
      config.seed_set ? std::to_string(exp.master_seed) : "unset");
  add("experiment.estimators", estimators_value(exp));
  add("experiment.risk_mode",
      exp.risk_mode == RiskMode::Analytic ? "analytic" : "mc");
  add("experiment.mc_risk_draws", std::to_string(exp.mc_risk_draws));
  add("experiment.row_timings", exp.row_timings ? "true" : "false");
  add("experiment.dump_chains", exp.dump_chains ? "true" : "false");
  add("experiment.dump_datasets", exp.dump_datasets ? "true" : "false");

  add("diagnostics.beta", format_double(diag.beta));
  add("diagnostics.eps_scale", format_double(diag.eps_scale));
  add("diagnostics.bernstein_m", std::to_string(diag.bernstein_m));
  add("diagnostics.envelope_m", std::to_string(diag.envelope_m));
  add("diagnostics.envelope_r", format_double(diag.envelope_r));
  add("diagnostics.bounds_d", std::to_string(diag.bounds_d));
  add("diagnostics.bounds_c",
      diag.bounds_c > 0.0 ? format_double(diag.bounds_c) : "auto");
  add("diagnostics.bounds_r",
      diag.bounds_r > 0.0 ? format_double(diag.bounds_r) : "auto");
  add("diagnostics.bounds_kappa", format_double(diag.bounds_kappa));
  add("diagnostics.alphas", join_list(diag.alphas));
  return snapshot;
}

}  // namespace genbayes
