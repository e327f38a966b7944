#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "json.hpp"
#include "pmc/bifurcation.hpp"
#include "pmc/endpoint.hpp"
#include "pmc/errors.hpp"
#include "pmc/io.hpp"
#include "pmc/profile.hpp"
#include "pmc/timemap.hpp"

namespace pmc::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 7> kCommandNames = {
    "timemap", "gcurve", "lstar", "critical", "diagram", "solve", "verify"};

constexpr std::size_t kTimemapPoints = 101;
constexpr std::size_t kCurvePoints = 200;
constexpr std::size_t kProfilePoints = 401;
constexpr double kGcurveMin = 0.01;
constexpr double kGcurveMax = 10.0;

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return io::round_significant(value);
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

double require(const std::optional<double>& value, const char* flag, Command command) {
  if (!value) {
    throw DomainError(std::string(to_string(command)) + " requires " + flag);
  }
  return *value;
}

void require_format(const RunConfig& config, std::initializer_list<Format> allowed) {
  if (std::find(allowed.begin(), allowed.end(), config.output_format) == allowed.end()) {
    throw DomainError(std::string(to_string(config.command)) + " has no " +
                      std::string(to_string(config.output_format)) + " output");
  }
}

std::vector<double> linear_grid(const Range& range) {
  std::vector<double> grid(range.n);
  for (std::size_t i = 0; i < range.n; ++i) {
    grid[i] = range.n == 1 ? range.min
                           : range.min + (range.max - range.min) * static_cast<double>(i) /
                                             static_cast<double>(range.n - 1);
  }
  if (range.n > 1) grid.back() = range.max;
  return grid;
}

std::vector<double> log_grid(const Range& range) {
  std::vector<double> grid(range.n);
  const double lo = std::log(range.min);
  const double hi = std::log(range.max);
  for (std::size_t i = 0; i < range.n; ++i) {
    grid[i] = range.n == 1 ? range.min
                           : std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(range.n - 1));
  }
  grid.front() = range.min;
  if (range.n > 1) grid.back() = range.max;
  return grid;
}

void check_range(const Range& range, const char* what) {
  if (!(range.min < range.max) || range.n < 2 || !std::isfinite(range.min) ||
      !std::isfinite(range.max)) {
    std::ostringstream msg;
    msg << what << " range needs min < max and n >= 2";
    throw DomainError(msg.str());
  }
}

std::string run_timemap(const RunConfig& config) {
  const double lambda = require(config.lambda, "--lambda", config.command);
  const double end = timemap::max_deflection(lambda);
  Range range = config.alpha_range.value_or(Range{end / 1000.0, end, kTimemapPoints});
  if (config.n && !config.alpha_range) range.n = *config.n;
  check_range(range, "alpha");
  if (!(range.min > 0.0) || range.max > end) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "alpha range must lie in (0, " << end << "]";
    throw DomainError(msg.str());
  }

  std::vector<timemap::TimeMapSample> samples;
  for (double alpha : linear_grid(range)) samples.push_back(timemap::sample(alpha, lambda, config.tol));

  std::ostringstream out;
  switch (config.output_format) {
    case Format::csv:
      out << "alpha,T,T_prime,T_second\n";
      for (const auto& s : samples) {
        out << io::format_number(s.alpha) << ',' << io::format_number(s.T) << ','
            << (s.T_prime ? io::format_number(*s.T_prime) : "") << ','
            << (s.T_second ? io::format_number(*s.T_second) : "") << '\n';
      }
      break;
    case Format::json: {
      Json rows = Json::array();
      for (const auto& s : samples) {
        Json row;
        row["alpha"] = number(s.alpha);
        row["T"] = number(s.T);
        if (s.T_prime) row["T_prime"] = number(*s.T_prime);
        if (s.T_second) row["T_second"] = number(*s.T_second);
        rows.push_back(row);
      }
      Json doc;
      doc["lambda"] = number(lambda);
      doc["alpha_max"] = number(end);
      doc["rows"] = rows;
      out << dump(doc);
      break;
    }
    case Format::svg: {
      io::Plot plot;
      plot.title = "Time map, lambda = " + io::format_number(lambda);
      plot.x_label = "alpha";
      plot.y_label = "T(alpha; lambda)";
      plot.x_min = 0.0;
      plot.x_max = end;
      io::Series curve{"timemap", {}, false};
      double top = 0.0;
      for (const auto& s : samples) {
        curve.points.emplace_back(s.alpha, s.T);
        top = std::max(top, s.T);
      }
      plot.y_max = top * 1.1;
      plot.series.push_back(curve);
      out << io::render_svg(plot);
      break;
    }
  }
  return out.str();
}

std::string run_gcurve(const RunConfig& config) {
  Range range = config.lambda_range.value_or(Range{kGcurveMin, kGcurveMax, kCurvePoints});
  if (config.n && !config.lambda_range) range.n = *config.n;
  check_range(range, "lambda");
  if (!(range.min > 0.0)) throw DomainError("lambda range must be positive");

  const endpoint::EndpointCurve curve = endpoint::endpoint_curve(log_grid(range));
  std::ostringstream out;
  switch (config.output_format) {
    case Format::csv:
      out << "lambda,g\n";
      for (std::size_t i = 0; i < curve.lambda_grid.size(); ++i) {
        out << io::format_number(curve.lambda_grid[i]) << ',' << io::format_number(curve.g_values[i])
            << '\n';
      }
      break;
    case Format::json: {
      Json rows = Json::array();
      for (std::size_t i = 0; i < curve.lambda_grid.size(); ++i) {
        rows.push_back(Json{{"lambda", number(curve.lambda_grid[i])}, {"g", number(curve.g_values[i])}});
      }
      Json doc;
      doc["c"] = number(curve.c);
      doc["L_star"] = number(curve.L_star);
      doc["rows"] = rows;
      out << dump(doc);
      break;
    }
    case Format::svg: {
      io::Plot plot;
      plot.title = "Endpoint curve g(lambda), L* = " + io::format_number(curve.L_star);
      plot.x_label = "lambda";
      plot.y_label = "g(lambda)";
      plot.x_min = range.min;
      plot.x_max = range.max;
      plot.y_max = curve.L_star * 1.1;
      io::Series g{"gcurve", {}, false};
      for (std::size_t i = 0; i < curve.lambda_grid.size(); ++i) {
        g.points.emplace_back(curve.lambda_grid[i], curve.g_values[i]);
      }
      plot.series.push_back(g);
      plot.series.push_back({"lstar", {{range.min, curve.L_star}, {range.max, curve.L_star}}, true});
      out << io::render_svg(plot);
      break;
    }
  }
  return out.str();
}

std::string run_lstar(const RunConfig& config) {
  require_format(config, {Format::csv, Format::json});
  const endpoint::LStar peak = endpoint::compute_L_star();
  if (config.output_format == Format::json) {
    Json doc;
    doc["c"] = number(peak.c);
    doc["L_star"] = number(peak.L_star);
    return dump(doc);
  }
  return "c,L_star\n" + io::format_number(peak.c) + "," + io::format_number(peak.L_star) + "\n";
}

std::string run_critical(const RunConfig& config) {
  require_format(config, {Format::csv, Format::json});
  const double L = require(config.L, "--L", config.command);
  const bifurcation::CriticalSet cs = bifurcation::critical_set(L, config.tol);
  if (config.output_format == Format::json) return io::critical_json(cs);
  auto cell = [](const std::optional<double>& v) { return v ? io::format_number(*v) : ""; };
  return "L,regime,lambda_low,lambda_mid,lambda_sup\n" + io::format_number(cs.L) + "," +
         std::string(bifurcation::to_string(cs.regime)) + "," + cell(cs.lambda_low) + "," +
         cell(cs.lambda_mid) + "," + io::format_number(cs.lambda_sup) + "\n";
}

std::string run_diagram(const RunConfig& config) {
  const double L = require(config.L, "--L", config.command);
  if (!config.lambda_range) throw DomainError("diagram requires --lambda-min and --lambda-max");
  Range range = *config.lambda_range;
  check_range(range, "lambda");
  bifurcation::SweepOptions options;
  options.tol = config.tol;
  const auto diagram = bifurcation::sweep_diagram(L, range.min, range.max, range.n, options);
  switch (config.output_format) {
    case Format::csv: {
      std::ostringstream out;
      io::write_diagram_csv(diagram, out);
      return out.str();
    }
    case Format::json:
      return io::diagram_json(diagram);
    case Format::svg:
      return io::render_diagram_svg(diagram);
  }
  return {};
}

std::string run_solve(const RunConfig& config) {
  const double L = require(config.L, "--L", config.command);
  const double lambda = require(config.lambda, "--lambda", config.command);
  const std::size_t n = config.n.value_or(kProfilePoints);
  const bifurcation::CriticalSet cs = bifurcation::critical_set(L, config.tol);
  const std::vector<double> alphas = bifurcation::solve_alphas(lambda, cs, config.tol);

  std::vector<profile::SolutionProfile> profiles;
  for (double alpha : alphas) profiles.push_back(profile::reconstruct_profile(alpha, lambda, n));

  std::ostringstream out;
  switch (config.output_format) {
    case Format::csv:
      out << "solution,alpha,x,u\n";
      for (std::size_t k = 0; k < profiles.size(); ++k) {
        const auto& p = profiles[k];
        for (std::size_t j = 0; j < p.xs.size(); ++j) {
          out << k + 1 << ',' << io::format_number(p.alpha) << ',' << io::format_number(p.xs[j])
              << ',' << io::format_number(p.us[j]) << '\n';
        }
      }
      break;
    case Format::json: {
      Json solutions = Json::array();
      for (const auto& p : profiles) {
        const auto report = profile::verify_necessary_conditions(p);
        Json item;
        item["alpha"] = number(p.alpha);
        item["energy"] = number(p.energy);
        item["boundary_slope"] = number(profile::boundary_slope(p.alpha, lambda));
        item["residual_max"] = number(p.residual_max);
        item["energy_drift"] = number(report.energy_drift);
        item["conditions"] = Json{{"positivity", report.positivity},
                                  {"concavity", report.concavity},
                                  {"sup_bound", report.sup_bound},
                                  {"evenness", report.evenness},
                                  {"energy_conservation", report.energy_conservation}};
        Json xs = Json::array();
        Json us = Json::array();
        for (std::size_t j = 0; j < p.xs.size(); ++j) {
          xs.push_back(number(p.xs[j]));
          us.push_back(number(p.us[j]));
        }
        item["x"] = xs;
        item["u"] = us;
        solutions.push_back(item);
      }
      Json doc;
      doc["L"] = number(L);
      doc["lambda"] = number(lambda);
      doc["regime"] = std::string(bifurcation::to_string(cs.regime));
      doc["count"] = profiles.size();
      doc["solutions"] = solutions;
      out << dump(doc);
      break;
    }
    case Format::svg: {
      io::Plot plot;
      plot.title = "Solutions, L = " + io::format_number(L) + ", lambda = " + io::format_number(lambda);
      plot.x_label = "x";
      plot.y_label = "u(x)";
      plot.x_min = -L;
      plot.x_max = L;
      plot.y_max = timemap::max_deflection(lambda) * 1.05;
      for (std::size_t k = 0; k < profiles.size(); ++k) {
        io::Series s{"profile solution-" + std::to_string(k + 1), {}, false};
        for (std::size_t j = 0; j < profiles[k].xs.size(); ++j) {
          s.points.emplace_back(profiles[k].xs[j], profiles[k].us[j]);
        }
        plot.series.push_back(std::move(s));
      }
      out << io::render_svg(plot);
      break;
    }
  }
  return out.str();
}

// Returns the report and whether every criterion passed.
std::pair<std::string, bool> run_verify(const RunConfig& config, std::ostream& live) {
  require_format(config, {Format::csv});
  std::ostringstream report;
  std::ostream& sink = config.output_path.empty() ? live : report;
  const auto results = acceptance::run_all(sink);
  const auto passed = std::count_if(results.begin(), results.end(),
                                    [](const acceptance::CriterionResult& r) { return r.passed; });
  sink << passed << "/" << results.size() << " criteria passed\n";
  return {report.str(), passed == static_cast<long>(results.size())};
}

void write_artifact(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output_path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(config.output_path, std::ios::binary);
  if (!file) throw IoError("cannot open " + config.output_path + " for writing");
  file << text;
  if (!file) throw IoError("write failed for " + config.output_path);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (std::size_t i = 0; i < kCommandNames.size(); ++i) {
    if (kCommandNames[i] == name) return static_cast<Command>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Command command) { return kCommandNames[static_cast<std::size_t>(command)]; }

std::string_view to_string(Format format) {
  switch (format) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::svg: return "svg";
  }
  return "csv";
}

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-map analysis of the one-dimensional prescribed mean curvature problem",
               "pmc"};
  std::string command;
  std::optional<double> L, lambda, lambda_min, lambda_max, alpha_min, alpha_max;
  std::optional<std::size_t> n;
  double tol = 1e-10;
  std::optional<std::string> format;
  std::string output;

  app.add_option("command", command, "timemap | gcurve | lstar | critical | diagram | solve | verify")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(kCommandNames.begin(), kCommandNames.end())));
  app.add_option("--L", L, "half-length of the interval (-L, L)");
  app.add_option("--lambda", lambda, "forcing parameter lambda > 0");
  app.add_option("--lambda-min", lambda_min, "lower end of the lambda sweep");
  app.add_option("--lambda-max", lambda_max, "upper end of the lambda sweep");
  app.add_option("--alpha-min", alpha_min, "lower end of the alpha grid (timemap)");
  app.add_option("--alpha-max", alpha_max, "upper end of the alpha grid (timemap)");
  app.add_option("--n", n, "grid size, or profile samples for solve (odd)");
  app.add_option("--tol", tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "csv | json | svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--out", output, "output file (default: standard output)");
  app.set_config("--config", "", "key = value file supplying defaults for the flags above");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {std::nullopt, kExitOk};
  } catch (const CLI::ParseError& e) {
    err << "pmc: error: " << e.what() << '\n';
    return {std::nullopt, kExitInput};
  }

  RunConfig config;
  config.command = *parse_command(command);
  config.L = L;
  config.lambda = lambda;
  config.n = n;
  config.tol = tol;
  config.output_path = output;
  if (format) {
    config.output_format = *format == "json" ? Format::json : *format == "svg" ? Format::svg : Format::csv;
  } else {
    config.output_format = config.command == Command::critical ? Format::json : Format::csv;
  }

  auto make_range = [&](const std::optional<double>& lo, const std::optional<double>& hi,
                        const char* name, std::optional<Range>& target) -> bool {
    if (!lo && !hi) return true;
    if (!lo || !hi) {
      err << "pmc: error: --" << name << "-min and --" << name << "-max must be given together\n";
      return false;
    }
    target = Range{*lo, *hi, n.value_or(kCurvePoints)};
    return true;
  };
  if (!make_range(lambda_min, lambda_max, "lambda", config.lambda_range) ||
      !make_range(alpha_min, alpha_max, "alpha", config.alpha_range)) {
    return {std::nullopt, kExitInput};
  }
  if (config.alpha_range && !n) config.alpha_range->n = kTimemapPoints;
  return {config, kExitOk};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::string text;
    switch (config.command) {
      case Command::timemap: text = run_timemap(config); break;
      case Command::gcurve: text = run_gcurve(config); break;
      case Command::lstar: text = run_lstar(config); break;
      case Command::critical: text = run_critical(config); break;
      case Command::diagram: text = run_diagram(config); break;
      case Command::solve: text = run_solve(config); break;
      case Command::verify: {
        auto [report, passed] = run_verify(config, out);
        if (!config.output_path.empty()) write_artifact(config, report, out);
        if (!passed) {
          err << "pmc: error: acceptance suite reported failures\n";
          return kExitNumerical;
        }
        return kExitOk;
      }
    }
    write_artifact(config, text, out);
    return kExitOk;
  } catch (const DomainError& e) {
    err << "pmc: error: " << e.what() << '\n';
    return kExitInput;
  } catch (const RegimeError& e) {
    err << "pmc: error: " << e.what() << '\n';
    return kExitInput;
  } catch (const BadBracket& e) {
    err << "pmc: error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "pmc: error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "pmc: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseOutcome parsed = parse_args(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  return run(*parsed.config, out, err);
}

}  // namespace pmc::cli
