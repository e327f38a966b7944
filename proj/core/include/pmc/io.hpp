#pragma once

// Serialization of results: CSV (LF, 12 significant digits), JSON with a
// fixed key order, and self-contained 800x600 SVG plots.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pmc/bifurcation.hpp"

namespace pmc::io {

inline constexpr int kSignificantDigits = 12;

/// printf("%.12g"); "nan"/"inf" spelled out for non-finite values.
[[nodiscard]] std::string format_number(double value);

/// value rounded to 12 significant digits, so JSON dumps print the same digits as CSV.
[[nodiscard]] double round_significant(double value);

/// Header `lambda,alpha_1,alpha_2`, one row per lambda, empty cells for absent branches.
void write_diagram_csv(const bifurcation::BifurcationDiagram& diagram, std::ostream& out);

/// Inverse of write_diagram_csv.
[[nodiscard]] std::vector<bifurcation::DiagramRow> read_diagram_csv(std::istream& in);

/// {"L", "regime", "critical", "rows"}; absent fold values are omitted.
[[nodiscard]] std::string diagram_json(const bifurcation::BifurcationDiagram& diagram);

/// {"L", "regime", "critical"}.
[[nodiscard]] std::string critical_json(const bifurcation::CriticalSet& critical);

struct Series {
  std::string css_class;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<Series> series;
};

[[nodiscard]] std::string render_svg(const Plot& plot);

/// lambda on the horizontal axis, alpha = ||u||_inf on the vertical one.
/// Consecutive rows with equal solution count form one segment; each branch
/// of a segment is drawn as its own polyline (class "branch lower", "branch
/// upper" or "branch single"), so a change in count breaks the curves.
[[nodiscard]] std::string render_diagram_svg(const bifurcation::BifurcationDiagram& diagram);

/// Writes render_diagram_svg to path. Throws IoError on failure and
/// DomainError for a diagram without rows.
void emit_diagram_svg(const bifurcation::BifurcationDiagram& diagram, const std::string& path);

}  // namespace pmc::io
