#include "csvio.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "util.hpp"

namespace genbayes {

namespace {

constexpr const char* kResultsHeader =
    "dof,n,replicate,estimator,risk,excess_risk,acceptance_rate,seed,wall_ms";

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out.good()) throw IoError("failed while writing " + path);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void bad_row(const std::string& path, long line_no,
                          const std::string& what) {
  throw IoError(fmt::format("{}:{}: {}", path, line_no, what));
}

}  // namespace

void write_results_csv(const std::string& path, const ExperimentTable& table) {
  std::ofstream out = open_out(path);
  out << kResultsHeader << "\n";
  for (const ExperimentRow& row : table.rows) {
    out << row.dof << ',' << row.n << ',' << row.replicate << ','
        << estimator_name(row.estimator) << ',' << format_double(row.risk)
        << ',' << format_double(row.excess_risk) << ',';
    if (!std::isnan(row.acceptance_rate)) {
      out << format_double(row.acceptance_rate);
    }
    out << ',' << row.seed << ',' << row.wall_ms << "\n";
  }
  finish(out, path);
}

ExperimentTable read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) {
    throw IoError(fmt::format("{}:1: unexpected header '{}'", path, line));
  }

  ExperimentTable table;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) bad_row(path, line_no, "empty row");
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 9) {
      bad_row(path, line_no,
              fmt::format("expected 9 fields, got {}", fields.size()));
    }
    const auto need_long = [&](const std::string& field, const char* col) {
      const std::optional<long> v = parse_long(field);
      if (!v) {
        bad_row(path, line_no,
                fmt::format("bad {} value '{}'", col, field));
      }
      return *v;
    };
    const auto need_double = [&](const std::string& field, const char* col) {
      const std::optional<double> v = parse_double(field);
      if (!v) {
        bad_row(path, line_no,
                fmt::format("bad {} value '{}'", col, field));
      }
      return *v;
    };

    ExperimentRow row;
    row.dof = need_long(fields[0], "dof");
    row.n = need_long(fields[1], "n");
    row.replicate = need_long(fields[2], "replicate");
    if (fields[3] == "erm") {
      row.estimator = Estimator::Erm;
    } else if (fields[3] == "bayes") {
      row.estimator = Estimator::Bayes;
    } else {
      bad_row(path, line_no, "unknown estimator '" + fields[3] + "'");
    }
    row.risk = need_double(fields[4], "risk");
    row.excess_risk = need_double(fields[5], "excess_risk");
    row.acceptance_rate = fields[6].empty()
                              ? std::numeric_limits<double>::quiet_NaN()
                              : need_double(fields[6], "acceptance_rate");
    const std::optional<std::uint64_t> seed = parse_u64(fields[7]);
    if (!seed) bad_row(path, line_no, "bad seed value '" + fields[7] + "'");
    row.seed = *seed;
    row.wall_ms = need_long(fields[8], "wall_ms");
    table.rows.push_back(row);
  }
  return table;
}

void write_rates_csv(const std::string& path, const std::vector<RateRow>& rows) {
  std::ofstream out = open_out(path);
  out << "dof,estimator,statistic,slope,slope_stderr,intercept,r_squared,"
         "n_points\n";
  for (const RateRow& row : rows) {
    out << row.dof << ',' << estimator_name(row.estimator) << ','
        << row.statistic << ',' << format_double(row.fit.slope) << ','
        << format_double(row.fit.slope_stderr) << ','
        << format_double(row.fit.intercept) << ','
        << format_double(row.fit.r_squared) << ',' << row.fit.n_points()
        << "\n";
  }
  finish(out, path);
}

void write_plot_csv(const std::string& path, const RateFit& fit) {
  std::ofstream out = open_out(path);
  out << "log10_n,log10_statistic,fitted\n";
  for (const auto& [x, y] : fit.points) {
    out << format_double(x) << ',' << format_double(y) << ','
        << format_double(fit.intercept + fit.slope * x) << "\n";
  }
  finish(out, path);
}

void write_concentration_csv(const std::string& path,
                             const std::vector<ConcentrationPoint>& curve) {
  std::ofstream out = open_out(path);
  out << "dof,n,beta,eps_scale,threshold,mean_tail_mass,replicates\n";
  for (const ConcentrationPoint& point : curve) {
    out << point.dof << ',' << point.n << ',' << format_double(point.beta)
        << ',' << format_double(point.eps_scale) << ','
        << format_double(point.threshold) << ','
        << format_double(point.mean_tail_mass) << ',' << point.replicates
        << "\n";
  }
  finish(out, path);
}

void write_bernstein_csv(const std::string& path,
                         const std::vector<BernsteinRow>& rows) {
  std::ofstream out = open_out(path);
  out << "dof,excess,second_moment\n";
  for (const BernsteinRow& row : rows) {
    out << row.dof << ',' << format_double(row.excess) << ','
        << format_double(row.second_moment) << "\n";
  }
  finish(out, path);
}

void write_envelope_csv(const std::string& path,
                        const std::vector<EnvelopeRow>& rows) {
  std::ofstream out = open_out(path);
  out << "dof,r,m,estimate\n";
  for (const EnvelopeRow& row : rows) {
    out << row.dof << ',' << format_double(row.r) << ',' << row.m << ','
        << format_double(row.estimate) << "\n";
  }
  finish(out, path);
}

void write_bounds_csv(const std::string& path,
                      const std::vector<BoundRow>& rows) {
  std::ofstream out = open_out(path);
  out << "dof,calculator,value,first_term,second_term,vacuous\n";
  for (const BoundRow& row : rows) {
    out << row.dof << ',' << row.calculator << ','
        << format_double(row.report.value) << ','
        << format_double(row.report.first_term) << ','
        << format_double(row.report.second_term) << ','
        << (row.report.vacuous ? "true" : "false") << "\n";
  }
  finish(out, path);
}

}  // namespace genbayes
