#include "aps/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace aps::svg {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) hi = lo + 1.0;
  }
};

}  // namespace

std::string render(const Figure& fig) {
  constexpr double left = 70, right = 20, top = 40, bottom = 55;
  const double pw = fig.width - left - right;
  const double ph = fig.height - top - bottom;

  Range xr, yr;
  for (const auto& s : fig.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
    if (s.style == Style::bars) yr.add(0.0);
  }
  for (const auto& l : fig.lines) (l.horizontal ? yr : xr).add(l.value);
  xr.finish();
  yr.finish();
  const auto sx = [&](double v) { return left + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto sy = [&](double v) { return top + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      fig.width, fig.height, fig.width, fig.height);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", fig.width, fig.height);
  out += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     fig.width / 2, escape(fig.title));
  out += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      left, top, pw, ph);
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n",
                       sx(xv), top + ph + 16, xv);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n",
                       left - 6, sy(yv) + 4, yv);
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, fig.height - 12, escape(fig.x_label));
  out += fmt::format(
      "<text x=\"16\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1f})\">{}</text>\n",
      top + ph / 2, top + ph / 2, escape(fig.y_label));

  for (const auto& s : fig.series) {
    out += fmt::format("<g class=\"series\" data-name=\"{}\">\n", escape(s.name));
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style == Style::line && n > 1) {
      out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < n; ++i)
        out += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", sx(s.x[i]), sy(s.y[i]));
      out += "\"/>\n";
    }
    double bar_w = 4.0;
    if (s.style == Style::bars && n > 1)
      bar_w = std::max(1.0, 0.8 * std::abs(sx(s.x[1]) - sx(s.x[0])));
    for (std::size_t i = 0; i < n; ++i) {
      const auto data = fmt::format("data-x=\"{}\" data-y=\"{}\"", s.x[i], s.y[i]);
      if (s.style == Style::bars) {
        const double y0 = sy(0.0), y1 = sy(s.y[i]);
        out += fmt::format(
            "<rect class=\"pt\" {} x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
            "fill=\"{}\" fill-opacity=\"0.6\"/>\n",
            data, sx(s.x[i]) - bar_w / 2, std::min(y0, y1), bar_w, std::abs(y0 - y1), s.color);
      } else {
        const double r = s.style == Style::points ? 3.5 : 0.0;
        out += fmt::format("<circle class=\"pt\" {} cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"{}\"/>\n",
                           data, sx(s.x[i]), sy(s.y[i]), r, s.color);
      }
    }
    out += "</g>\n";
  }

  for (const auto& l : fig.lines) {
    if (l.horizontal) {
      const double y = sy(l.value);
      out += fmt::format(
          "<line class=\"ref\" data-value=\"{}\" x1=\"{:.1f}\" x2=\"{:.1f}\" y1=\"{:.2f}\" "
          "y2=\"{:.2f}\" stroke=\"{}\" stroke-dasharray=\"6,4\"/>\n",
          l.value, left, left + pw, y, y, l.color);
      out += fmt::format("<text x=\"{:.1f}\" y=\"{:.2f}\" text-anchor=\"end\" fill=\"{}\">{}</text>\n",
                         left + pw - 4, y - 4, l.color, escape(l.label));
    } else {
      const double x = sx(l.value);
      out += fmt::format(
          "<line class=\"ref\" data-value=\"{}\" x1=\"{:.2f}\" x2=\"{:.2f}\" y1=\"{:.1f}\" "
          "y2=\"{:.1f}\" stroke=\"{}\" stroke-dasharray=\"6,4\"/>\n",
          l.value, x, x, top, top + ph, l.color);
      out += fmt::format("<text x=\"{:.2f}\" y=\"{:.1f}\" fill=\"{}\">{}</text>\n", x + 3, top + 14,
                         l.color, escape(l.label));
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace aps::svg
