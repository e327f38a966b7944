#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace pmc::cli {
namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"pmc"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out;
  std::ostringstream err;
  const int code = main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pmc_cli_test_" + name);
}

TEST(Parse, CommandNames) {
  for (auto name : {"timemap", "gcurve", "lstar", "critical", "diagram", "solve", "verify"}) {
    const auto command = parse_command(name);
    ASSERT_TRUE(command.has_value()) << name;
    EXPECT_EQ(to_string(*command), name);
  }
  EXPECT_FALSE(parse_command("plot").has_value());
}

TEST(Parse, DefaultsAndFormats) {
  std::ostringstream out, err;
  const char* argv[] = {"pmc", "critical", "--L", "0.3"};
  const ParseOutcome parsed = parse_args(4, argv, out, err);
  ASSERT_TRUE(parsed.config.has_value());
  EXPECT_EQ(parsed.config->command, Command::critical);
  EXPECT_EQ(parsed.config->output_format, Format::json);
  EXPECT_EQ(parsed.config->tol, 1e-10);
  EXPECT_EQ(*parsed.config->L, 0.3);
  EXPECT_TRUE(parsed.config->output_path.empty());

  const char* argv2[] = {"pmc", "diagram", "--L", "0.3", "--lambda-min", "0.1", "--lambda-max", "2"};
  const ParseOutcome parsed2 = parse_args(8, argv2, out, err);
  ASSERT_TRUE(parsed2.config.has_value());
  EXPECT_EQ(parsed2.config->output_format, Format::csv);
  ASSERT_TRUE(parsed2.config->lambda_range.has_value());
  EXPECT_EQ(parsed2.config->lambda_range->n, 200u);
}

TEST(ExitCodes, ParseErrorsAreInputErrors) {
  EXPECT_EQ(invoke({}).code, kExitInput);
  EXPECT_EQ(invoke({"plot"}).code, kExitInput);
  EXPECT_EQ(invoke({"lstar", "--format", "xml"}).code, kExitInput);
  EXPECT_EQ(invoke({"lstar", "--tol", "-1"}).code, kExitInput);
  EXPECT_EQ(invoke({"timemap", "--lambda", "abc"}).code, kExitInput);
  EXPECT_EQ(invoke({"diagram", "--L", "0.3", "--lambda-min", "0.1"}).code, kExitInput);
}

TEST(ExitCodes, HelpSucceeds) {
  const Outcome r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("--lambda"), std::string::npos);
}

TEST(ExitCodes, DomainErrorsAreInputErrors) {
  const Outcome missing = invoke({"timemap"});
  EXPECT_EQ(missing.code, kExitInput);
  EXPECT_EQ(missing.err, "pmc: error: timemap requires --lambda\n");
  EXPECT_EQ(invoke({"timemap", "--lambda", "-1"}).code, kExitInput);
  EXPECT_EQ(invoke({"timemap", "--lambda", "1", "--alpha-min", "0.1", "--alpha-max", "0.6"}).code,
            kExitInput);
  EXPECT_EQ(invoke({"critical", "--L", "0"}).code, kExitInput);
  EXPECT_EQ(invoke({"critical", "--L", "0.3", "--format", "svg"}).code, kExitInput);
  EXPECT_EQ(invoke({"diagram", "--L", "0.3"}).code, kExitInput);
  EXPECT_EQ(invoke({"solve", "--L", "0.3", "--lambda", "1", "--n", "100"}).code, kExitInput);
}

TEST(ExitCodes, UnwritableOutputIsInputError) {
  const Outcome r = invoke({"lstar", "--out", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_EQ(r.err.rfind("pmc: error: ", 0), 0u);
  EXPECT_EQ(lines(r.err).size(), 1u);
}

TEST(ExitCodes, NumericalFailureIsTwo) {
  // A tolerance far below double resolution exhausts the quadrature budget.
  const Outcome budget = invoke({"timemap", "--lambda", "1", "--tol", "1e-300", "--n", "3"});
  EXPECT_EQ(budget.code, kExitNumerical);
  EXPECT_EQ(budget.err.rfind("pmc: numerical failure: ", 0), 0u);
  EXPECT_NE(budget.err.find("budget"), std::string::npos);
  // At lambda = 1e308 the kernel overflows.
  EXPECT_EQ(invoke({"timemap", "--lambda", "1e308", "--n", "2"}).code, kExitNumerical);
}

TEST(Lstar, CsvAndJson) {
  const Outcome csv = invoke({"lstar"});
  ASSERT_EQ(csv.code, kExitOk);
  const auto rows = lines(csv.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "c,L_star");
  EXPECT_EQ(rows[1].substr(rows[1].find(',') + 1), "0.349967641964");
  EXPECT_NEAR(std::stod(rows[1]), 0.612870561835, 1e-11);

  const auto doc = nlohmann::json::parse(invoke({"lstar", "--format", "json"}).out);
  EXPECT_NEAR(doc["L_star"].get<double>(), 0.349967641964, 1e-12);
}

TEST(Critical, DefaultJsonAndCsv) {
  const auto doc = nlohmann::json::parse(invoke({"critical", "--L", "0.3"}).out);
  EXPECT_EQ(doc["regime"], "Split");
  EXPECT_NEAR(doc["critical"]["lambda_low"].get<double>(), 0.245784346689, 1e-11);
  EXPECT_NEAR(doc["critical"]["lambda_mid"].get<double>(), 1.46221810421, 1e-10);
  EXPECT_NEAR(doc["critical"]["lambda_sup"].get<double>(), 2.15378843556, 1e-10);

  const auto rows = lines(invoke({"critical", "--L", "0.6", "--format", "csv"}).out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "L,regime,lambda_low,lambda_mid,lambda_sup");
  EXPECT_EQ(rows[1].rfind("0.6,Continuous,,,", 0), 0u);
}

TEST(Timemap, DefaultGridAndEndpointRow) {
  const Outcome r = invoke({"timemap", "--lambda", "1"});
  ASSERT_EQ(r.code, kExitOk);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 102u);
  EXPECT_EQ(rows[0], "alpha,T,T_prime,T_second");
  EXPECT_EQ(rows.back(), "0.5,0.333333333333,,");
}

TEST(Timemap, JsonOmitsEndpointDerivatives) {
  const auto doc = nlohmann::json::parse(
      invoke({"timemap", "--lambda", "1", "--alpha-min", "0.2", "--alpha-max", "0.5", "--n", "4",
              "--format", "json"})
          .out);
  ASSERT_EQ(doc["rows"].size(), 4u);
  EXPECT_NEAR(doc["rows"][0]["T_prime"].get<double>(), 0.452660114144, 1e-11);
  EXPECT_FALSE(doc["rows"][3].contains("T_prime"));
  EXPECT_EQ(doc["alpha_max"], 0.5);
}

TEST(Gcurve, DefaultLogGrid) {
  const auto rows = lines(invoke({"gcurve"}).out);
  ASSERT_EQ(rows.size(), 201u);
  EXPECT_EQ(rows[0], "lambda,g");
  EXPECT_EQ(rows[1].rfind("0.01,", 0), 0u);
  EXPECT_EQ(rows.back().rfind("10,", 0), 0u);
}

TEST(Gcurve, SvgPlot) {
  const Outcome r = invoke({"gcurve", "--format", "svg", "--n", "20"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("<svg", 0), 0u);
  EXPECT_NE(r.out.find("class=\"gcurve\""), std::string::npos);
}

TEST(Diagram, CsvRowsAndSvg) {
  const auto rows = lines(invoke({"diagram", "--L", "0.3", "--lambda-min", "0.1", "--lambda-max",
                                  "3", "--n", "9"})
                              .out);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], "lambda,alpha_1,alpha_2");
  EXPECT_EQ(rows.back(), "3,,");
  const Outcome svg = invoke({"diagram", "--L", "0.3", "--lambda-min", "0.1", "--lambda-max", "3",
                              "--n", "9", "--format", "svg"});
  EXPECT_NE(svg.out.find("branch lower"), std::string::npos);
}

TEST(Solve, CsvLongFormat) {
  const Outcome r = invoke({"solve", "--L", "0.3", "--lambda", "0.1", "--n", "21"});
  ASSERT_EQ(r.code, kExitOk);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 1u + 2u * 21u);
  EXPECT_EQ(rows[0], "solution,alpha,x,u");
  EXPECT_EQ(rows[1].rfind("1,", 0), 0u);
  EXPECT_EQ(rows.back().rfind("2,", 0), 0u);
  EXPECT_EQ(rows[1].substr(rows[1].rfind(',')), ",0");
}

TEST(Solve, JsonReportsConditionsAndInfiniteSlopeAsNull) {
  const auto doc = nlohmann::json::parse(
      invoke({"solve", "--L", "0.333333333333333333", "--lambda", "1", "--n", "51", "--format",
              "json"})
          .out);
  ASSERT_EQ(doc["count"], 2);
  const auto& upper = doc["solutions"][1];
  EXPECT_NEAR(upper["alpha"].get<double>(), 0.5, 1e-10);
  EXPECT_TRUE(upper["boundary_slope"].is_null());
  EXPECT_TRUE(upper["conditions"]["sup_bound"].get<bool>());
  EXPECT_EQ(upper["x"].size(), 51u);
  EXPECT_TRUE(doc["solutions"][0]["boundary_slope"].is_number());
}

TEST(Solve, NoSolutionsBeyondSaddleNode) {
  const Outcome r = invoke({"solve", "--L", "0.3", "--lambda", "5"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "solution,alpha,x,u\n");
}

TEST(Output, RepeatedRunsAreByteIdentical) {
  for (auto args : {std::initializer_list<const char*>{"critical", "--L", "0.3"},
                    std::initializer_list<const char*>{"diagram", "--L", "0.6", "--lambda-min", "0.1",
                                                       "--lambda-max", "1", "--n", "7", "--format",
                                                       "json"}}) {
    EXPECT_EQ(invoke(args).out, invoke(args).out);
  }
}

TEST(Output, FileMatchesStandardOutput) {
  const auto path = scratch("lstar.csv");
  const std::string path_text = path.string();
  ASSERT_EQ(invoke({"lstar", "--out", path_text.c_str()}).code, kExitOk);
  std::ifstream in(path, std::ios::binary);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(written, invoke({"lstar"}).out);
  std::filesystem::remove(path);
}

TEST(Config, FileSuppliesDefaultsFlagsWin) {
  const auto path = scratch("config.ini");
  {
    std::ofstream cfg(path);
    cfg << "L = 0.6\nformat = csv\n";
  }
  const std::string path_text = path.string();
  const auto from_file = lines(invoke({"critical", "--config", path_text.c_str()}).out);
  ASSERT_EQ(from_file.size(), 2u);
  EXPECT_EQ(from_file[1].rfind("0.6,Continuous", 0), 0u);

  const auto overridden = lines(invoke({"critical", "--config", path_text.c_str(), "--L", "0.3"}).out);
  ASSERT_EQ(overridden.size(), 2u);
  EXPECT_EQ(overridden[1].rfind("0.3,Split", 0), 0u);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace pmc::cli
