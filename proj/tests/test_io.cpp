#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pmc/bifurcation.hpp"
#include "pmc/errors.hpp"
#include "pmc/io.hpp"

namespace pmc::io {
namespace {

using bifurcation::BifurcationDiagram;

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t hits = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) {
    ++hits;
  }
  return hits;
}

BifurcationDiagram small_split_diagram() {
  return bifurcation::sweep_diagram(0.3, 0.1, 3.0, 12, {.threads = 1});
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(RoundSignificant, MatchesFormattedDigits) {
  for (double v : {0.349967641964123, 1.46221810421234, 2.0 / 3.0, 12345.678901234}) {
    EXPECT_EQ(format_number(round_significant(v)), format_number(v));
    EXPECT_NEAR(round_significant(v), v, 1e-11 * std::abs(v));
  }
}

TEST(DiagramCsv, HeaderAndRowCount) {
  const BifurcationDiagram d = small_split_diagram();
  std::ostringstream out;
  write_diagram_csv(d, out);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("lambda,alpha_1,alpha_2\n", 0), 0u);
  EXPECT_EQ(count(text, "\n"), d.rows.size() + 1);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(DiagramCsv, RoundTripToTwelveDigits) {
  const BifurcationDiagram d = small_split_diagram();
  std::ostringstream out;
  write_diagram_csv(d, out);
  std::istringstream in(out.str());
  const auto rows = read_diagram_csv(in);
  ASSERT_EQ(rows.size(), d.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(rows[i].lambda, d.rows[i].lambda, 1e-11 * d.rows[i].lambda);
    ASSERT_EQ(rows[i].alphas.size(), d.rows[i].alphas.size());
    for (std::size_t k = 0; k < rows[i].alphas.size(); ++k) {
      EXPECT_NEAR(rows[i].alphas[k], d.rows[i].alphas[k], 1e-11);
    }
  }
}

TEST(DiagramCsv, RejectsMalformedInput) {
  std::istringstream bad_header("lambda,alpha\n0.1,0.2\n");
  EXPECT_THROW((void)read_diagram_csv(bad_header), IoError);
  std::istringstream bad_number("lambda,alpha_1,alpha_2\n0.1,abc,\n");
  EXPECT_THROW((void)read_diagram_csv(bad_number), IoError);
}

TEST(DiagramJson, KeysInOrderWithFolds) {
  const auto doc = nlohmann::ordered_json::parse(diagram_json(small_split_diagram()));
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"L", "regime", "critical", "rows"}));
  EXPECT_EQ(doc["regime"], "Split");
  EXPECT_TRUE(doc["critical"].contains("lambda_low"));
  EXPECT_TRUE(doc["critical"].contains("lambda_mid"));
  EXPECT_TRUE(doc["critical"].contains("lambda_sup"));
  EXPECT_EQ(doc["rows"].size(), 12u);
  EXPECT_TRUE(doc["rows"][0].contains("lambda"));
  EXPECT_EQ(doc["rows"][0]["alphas"].size(), 2u);
}

TEST(CriticalJson, OmitsFoldsInContinuousRegime) {
  const auto doc = nlohmann::json::parse(critical_json(bifurcation::critical_set(0.6)));
  EXPECT_EQ(doc["regime"], "Continuous");
  EXPECT_FALSE(doc["critical"].contains("lambda_low"));
  EXPECT_FALSE(doc["critical"].contains("lambda_mid"));
  EXPECT_NEAR(doc["critical"]["lambda_sup"].get<double>(), 0.752758893456, 1e-11);
  EXPECT_FALSE(doc.contains("rows"));
}

TEST(RenderSvg, StructureOfDiagram) {
  const std::string svg = render_diagram_svg(small_split_diagram());
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("width=\"800\""), std::string::npos);
  EXPECT_NE(svg.find("height=\"600\""), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_GE(count(svg, "class=\"branch lower\""), 1u);
  EXPECT_GE(count(svg, "class=\"branch upper\""), 1u);
  EXPECT_GE(count(svg, "class=\"branch single\""), 1u);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
}

TEST(RenderSvg, DiagramBeyondSaddleNodeHasNoBranches) {
  const BifurcationDiagram d = bifurcation::sweep_diagram(0.3, 3.0, 10.0, 5, {.threads = 1});
  for (const auto& row : d.rows) ASSERT_TRUE(row.alphas.empty());
  const std::string svg = render_diagram_svg(d);
  EXPECT_EQ(count(svg, "class=\"branch"), 0u);
  EXPECT_NE(svg.find("<line"), std::string::npos);
}

TEST(RenderSvg, EmptyDiagramRejected) {
  BifurcationDiagram d;
  d.L = 0.3;
  EXPECT_THROW((void)render_diagram_svg(d), DomainError);
}

TEST(RenderSvg, SinglePointSeriesIsCircle) {
  Plot plot;
  plot.title = "t";
  plot.series.push_back({"dot", {{0.5, 0.5}}, false});
  const std::string svg = render_svg(plot);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
  EXPECT_EQ(count(svg, "<polyline"), 0u);
}

TEST(RenderSvg, Deterministic) {
  const BifurcationDiagram d = small_split_diagram();
  EXPECT_EQ(render_diagram_svg(d), render_diagram_svg(d));
}

TEST(EmitSvg, BadPathThrowsIoError) {
  EXPECT_THROW(emit_diagram_svg(small_split_diagram(), "/nonexistent-dir/out.svg"), IoError);
}

}  // namespace
}  // namespace pmc::io
