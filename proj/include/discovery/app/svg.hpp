#pragma once

#include <string>
#include <vector>

namespace discovery::app {

enum class LineStyle { Solid, Dashed, Dotted, DashDot };

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  LineStyle style = LineStyle::Solid;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Line style used for a policy name as produced by policy_name():
/// Good-UCB solid, OCL dashed, uniform dotted, open-loop dash-dot.
LineStyle style_for_policy(const std::string& policy);

/// Standalone SVG document (no scripts, no external references).
std::string render_svg(const Plot& plot);

/// Escapes &, <, >, " and ' for use in XML text and attributes.
std::string xml_escape(const std::string& text);

/// Roughly `target` round tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

}  // namespace discovery::app
