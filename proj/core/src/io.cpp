#include "pmc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "pmc/errors.hpp"
#include "pmc/timemap.hpp"

namespace pmc::io {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

Json number(double value) { return round_significant(value); }

Json critical_object(const bifurcation::CriticalSet& critical) {
  Json out = Json::object();
  if (critical.lambda_low) out["lambda_low"] = number(*critical.lambda_low);
  if (critical.lambda_mid) out["lambda_mid"] = number(*critical.lambda_mid);
  out["lambda_sup"] = number(critical.lambda_sup);
  return out;
}

// Tick step of the form {1, 2, 5} * 10^k giving roughly `target` ticks.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2.0 * mag;
  if (r < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, value);
  return buf;
}

double round_significant(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

void write_diagram_csv(const bifurcation::BifurcationDiagram& diagram, std::ostream& out) {
  out << "lambda,alpha_1,alpha_2\n";
  for (const auto& row : diagram.rows) {
    out << format_number(row.lambda);
    for (std::size_t k = 0; k < 2; ++k) {
      out << ',';
      if (k < row.alphas.size()) out << format_number(row.alphas[k]);
    }
    out << '\n';
  }
}

namespace {

double parse_cell(const std::string& cell, const std::string& line) {
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw IoError("read_diagram_csv: bad number '" + cell + "' in row '" + line + "'");
  }
  return value;
}

}  // namespace

std::vector<bifurcation::DiagramRow> read_diagram_csv(std::istream& in) {
  std::vector<bifurcation::DiagramRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != "lambda,alpha_1,alpha_2") {
    throw IoError("read_diagram_csv: missing header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 3 || cells[0].empty()) {
      throw IoError("read_diagram_csv: malformed row '" + line + "'");
    }
    bifurcation::DiagramRow row;
    row.lambda = parse_cell(cells[0], line);
    for (std::size_t k = 1; k < 3; ++k) {
      if (!cells[k].empty()) row.alphas.push_back(parse_cell(cells[k], line));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string diagram_json(const bifurcation::BifurcationDiagram& diagram) {
  Json out;
  out["L"] = number(diagram.L);
  out["regime"] = std::string(bifurcation::to_string(diagram.critical.regime));
  out["critical"] = critical_object(diagram.critical);
  Json rows = Json::array();
  for (const auto& row : diagram.rows) {
    Json alphas = Json::array();
    for (double a : row.alphas) alphas.push_back(number(a));
    rows.push_back(Json{{"lambda", number(row.lambda)}, {"alphas", alphas}});
  }
  out["rows"] = rows;
  return out.dump(2) + "\n";
}

std::string critical_json(const bifurcation::CriticalSet& critical) {
  Json out;
  out["L"] = number(critical.L);
  out["regime"] = std::string(bifurcation::to_string(critical.regime));
  out["critical"] = critical_object(critical);
  return out.dump(2) + "\n";
}

std::string render_svg(const Plot& plot) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double x_span = plot.x_max > plot.x_min ? plot.x_max - plot.x_min : 1.0;
  const double y_span = plot.y_max > plot.y_min ? plot.y_max - plot.y_min : 1.0;
  auto px = [&](double x) { return kLeft + (x - plot.x_min) / x_span * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - plot.y_min) / y_span * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop + plot_h) << "\" x2=\""
      << coord(kLeft + plot_w) << "\" y2=\"" << coord(kTop + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop) << "\" x2=\"" << coord(kLeft)
      << "\" y2=\"" << coord(kTop + plot_h) << "\"/>\n";
  svg << "</g>\n";

  svg << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"12\">\n";
  const double xs = tick_step(x_span, 8);
  for (double t = std::ceil(plot.x_min / xs) * xs; t <= plot.x_max + 1e-9 * x_span; t += xs) {
    const double x = px(t);
    svg << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(kTop + plot_h) << "\" x2=\""
        << coord(x) << "\" y2=\"" << coord(kTop + plot_h + 5) << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << coord(x) << "\" y=\"" << coord(kTop + plot_h + 20)
        << "\" text-anchor=\"middle\">" << format_number(std::abs(t) < 1e-12 * xs ? 0.0 : t)
        << "</text>\n";
  }
  const double ys = tick_step(y_span, 6);
  for (double t = std::ceil(plot.y_min / ys) * ys; t <= plot.y_max + 1e-9 * y_span; t += ys) {
    const double y = py(t);
    svg << "<line x1=\"" << coord(kLeft - 5) << "\" y1=\"" << coord(y) << "\" x2=\""
        << coord(kLeft) << "\" y2=\"" << coord(y) << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(y + 4)
        << "\" text-anchor=\"end\">" << format_number(std::abs(t) < 1e-12 * ys ? 0.0 : t)
        << "</text>\n";
  }
  svg << "</g>\n";

  svg << "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"14\">\n";
  svg << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"" << coord(kHeight - 15)
      << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  svg << "<text x=\"20\" y=\"" << coord(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << coord(kTop + plot_h / 2)
      << ")\">" << escape(plot.y_label) << "</text>\n";
  svg << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"25\" text-anchor=\"middle\">"
      << escape(plot.title) << "</text>\n";
  svg << "</g>\n";

  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::size_t colour = 0;
  for (const Series& s : plot.series) {
    if (s.points.empty()) continue;
    const char* stroke = s.dashed ? "#888888" : kPalette[colour++ % 4];
    if (s.points.size() == 1) {
      svg << "<circle class=\"" << escape(s.css_class) << "\" cx=\"" << coord(px(s.points[0].first))
          << "\" cy=\"" << coord(py(s.points[0].second)) << "\" r=\"2.5\" fill=\"" << stroke
          << "\"/>\n";
      continue;
    }
    svg << "<polyline class=\"" << escape(s.css_class) << "\" fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"" << (s.dashed ? "1" : "2") << '"';
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) svg << ' ';
      svg << coord(px(s.points[i].first)) << ',' << coord(py(s.points[i].second));
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_diagram_svg(const bifurcation::BifurcationDiagram& diagram) {
  if (diagram.rows.empty()) throw DomainError("render_diagram_svg: diagram has no rows");
  Plot plot;
  plot.title = "Bifurcation diagram, L = " + format_number(diagram.L) + " (" +
               std::string(bifurcation::to_string(diagram.critical.regime)) + ")";
  plot.x_label = "lambda";
  plot.y_label = "||u||_inf = alpha";
  plot.x_min = diagram.rows.front().lambda;
  plot.x_max = diagram.rows.back().lambda;
  plot.y_min = 0.0;
  plot.y_max = 0.0;

  Series bound{"bound", {}, true};
  for (const auto& row : diagram.rows) {
    const double cap = timemap::max_deflection(row.lambda);
    bound.points.emplace_back(row.lambda, cap);
    plot.y_max = std::max(plot.y_max, cap);
  }
  plot.y_max = std::min(1.0, plot.y_max * 1.05);
  plot.series.push_back(bound);

  std::size_t start = 0;
  while (start < diagram.rows.size()) {
    const std::size_t count = diagram.rows[start].alphas.size();
    std::size_t stop = start;
    while (stop < diagram.rows.size() && diagram.rows[stop].alphas.size() == count) ++stop;
    for (std::size_t k = 0; k < count; ++k) {
      Series branch;
      branch.css_class = count == 1 ? "branch single" : (k == 0 ? "branch lower" : "branch upper");
      for (std::size_t i = start; i < stop; ++i) {
        branch.points.emplace_back(diagram.rows[i].lambda, diagram.rows[i].alphas[k]);
      }
      plot.series.push_back(std::move(branch));
    }
    start = stop;
  }
  return render_svg(plot);
}

void emit_diagram_svg(const bifurcation::BifurcationDiagram& diagram, const std::string& path) {
  const std::string svg = render_diagram_svg(diagram);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("emit_diagram_svg: cannot open " + path);
  out << svg;
  if (!out) throw IoError("emit_diagram_svg: write failed for " + path);
}

}  // namespace pmc::io
