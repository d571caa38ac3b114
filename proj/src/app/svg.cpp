#include "discovery/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "discovery/app/csv.hpp"

namespace discovery::app {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

// Fixed precision keeps the document stable across platforms' shortest forms.
std::string coord(double v) {
  const double rounded = std::round(v * 100.0) / 100.0;
  return format_double(rounded == 0.0 ? 0.0 : rounded);
}

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  const double a = std::fabs(v);
  if (a >= 1e5 || a < 1e-3) {
    const int exp10 = static_cast<int>(std::floor(std::log10(a)));
    const double mant = std::round(v / std::pow(10.0, exp10) * 100.0) / 100.0;
    return format_double(mant) + "e" + std::to_string(exp10);
  }
  return format_double(std::round(v * 1e6) / 1e6);
}

const char* dasharray(LineStyle style) {
  switch (style) {
    case LineStyle::Solid: return nullptr;
    case LineStyle::Dashed: return "8 5";
    case LineStyle::Dotted: return "2 4";
    case LineStyle::DashDot: return "9 4 2 4";
  }
  return nullptr;
}

}  // namespace

LineStyle style_for_policy(const std::string& policy) {
  if (policy.rfind("good_ucb", 0) == 0) return LineStyle::Solid;
  if (policy == "ocl") return LineStyle::Dashed;
  if (policy == "uniform") return LineStyle::Dotted;
  return LineStyle::DashDot;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) ticks.push_back(v);
  return ticks;
}

std::string render_svg(const Plot& plot) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = 0.0, y_hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series x and y lengths differ");
    for (double v : s.x) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (double v : s.y) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0;
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!std::isfinite(y_hi) || !(y_hi > y_lo)) y_hi = y_lo + 1.0;
  x_lo = std::min(x_lo, 0.0);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" + coord(kHeight) +
         "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + coord(kWidth) + "\" height=\"" + coord(kHeight) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + coord(kLeft + pw / 2) + "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\">" + xml_escape(plot.title) + "</text>\n";

  // Grid, ticks and tick labels.
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double v : nice_ticks(x_lo, x_hi)) {
    const std::string x = coord(px(v));
    svg += "<line x1=\"" + x + "\" y1=\"" + coord(kTop) + "\" x2=\"" + x + "\" y2=\"" + coord(kTop + ph) +
           "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + coord(kTop + ph + 16) + "\" text-anchor=\"middle\">" + tick_label(v) +
           "</text>\n";
  }
  for (double v : nice_ticks(y_lo, y_hi)) {
    const std::string y = coord(py(v));
    svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + y + "\" x2=\"" + coord(kLeft + pw) + "\" y2=\"" + y +
           "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + coord(kLeft - 6) + "\" y=\"" + coord(py(v) + 4) + "\" text-anchor=\"end\">" +
           tick_label(v) + "</text>\n";
  }
  svg += "</g>\n";
  svg += "<rect x=\"" + coord(kLeft) + "\" y=\"" + coord(kTop) + "\" width=\"" + coord(pw) + "\" height=\"" +
         coord(ph) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + coord(kLeft + pw / 2) + "\" y=\"" + coord(kHeight - 12) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" + xml_escape(plot.x_label) +
         "</text>\n";
  svg += "<text x=\"18\" y=\"" + coord(kTop + ph / 2) + "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 " + coord(kTop + ph / 2) + ")\">" +
         xml_escape(plot.y_label) + "</text>\n";

  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    std::string style = "fill=\"none\" stroke=\"black\" stroke-width=\"1.6\"";
    if (const char* d = dasharray(s.style)) style += std::string(" stroke-dasharray=\"") + d + "\"";
    if (!s.x.empty()) {
      svg += "<polyline " + style + " points=\"";
      for (std::size_t j = 0; j < s.x.size(); ++j) {
        if (j > 0) svg += ' ';
        svg += coord(px(s.x[j])) + "," + coord(py(s.y[j]));
      }
      svg += "\"/>\n";
    }
    const double ly = kTop + 14 + 20 * static_cast<double>(i);
    const double lx = kLeft + pw + 14;
    svg += "<line x1=\"" + coord(lx) + "\" y1=\"" + coord(ly) + "\" x2=\"" + coord(lx + 36) + "\" y2=\"" +
           coord(ly) + "\" " + style + "/>\n";
    svg += "<text x=\"" + coord(lx + 44) + "\" y=\"" + coord(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace discovery::app
