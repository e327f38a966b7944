#pragma once

// Command-line front end. parse_args turns argv into a RunConfig; run
// executes it and maps library errors onto exit codes:
//   0  success
//   1  invalid input (domain, regime, bracket or I/O errors, bad flags)
//   2  numerical failure (non-convergence, non-finite values, failed verification)

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace pmc::cli {

enum class Command { timemap, gcurve, lstar, critical, diagram, solve, verify };
enum class Format { csv, json, svg };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

struct Range {
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

struct RunConfig {
  Command command = Command::verify;
  std::optional<double> L;
  std::optional<double> lambda;
  std::optional<Range> lambda_range;
  std::optional<Range> alpha_range;
  std::optional<std::size_t> n;  // explicit --n; also the profile sample count for solve
  double tol = 1e-10;
  Format output_format = Format::csv;
  std::string output_path;  // empty: standard output
};

[[nodiscard]] std::optional<Command> parse_command(std::string_view name);
[[nodiscard]] std::string_view to_string(Command command);
[[nodiscard]] std::string_view to_string(Format format);

struct ParseOutcome {
  std::optional<RunConfig> config;  // empty when parsing ended the run
  int exit_code = kExitOk;
};

/// Parses `pmc <command> [--L x] [--lambda x] [--lambda-min x] [--lambda-max x]
/// [--alpha-min x] [--alpha-max x] [--n k] [--tol x] [--format csv|json|svg]
/// [--out path] [--config file]`. The config file holds `key = value` lines
/// with the same names as the flags; flags on the command line win.
/// Help text and parse errors go to out / err.
[[nodiscard]] ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out,
                                      std::ostream& err);

/// Executes config, writing the artifact to config.output_path or to out.
/// Diagnostics go to err as a single line.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmc::cli
