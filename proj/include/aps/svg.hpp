#pragma once

#include <string>
#include <vector>

namespace aps::svg {

enum class Style { line, bars, points };

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  Style style = Style::line;
  std::string color = "#1f77b4";
};

/// Dashed reference line; horizontal when `horizontal`, else vertical.
struct RefLine {
  double value = 0.0;
  std::string label;
  bool horizontal = true;
  std::string color = "#555555";
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<RefLine> lines;
  double width = 720;
  double height = 420;
};

/// Standalone SVG document. Every data point is also written as an element
/// carrying data-x / data-y attributes formatted exactly like the CSV
/// output ("{}" shortest round-trip), so the figure can be checked against
/// its data file.
std::string render(const Figure& fig);

}  // namespace aps::svg
