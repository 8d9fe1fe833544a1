#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enskit {

struct SvgSeries {
  std::string label;
  std::string color;  // any CSS color
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained line chart (fixed 640x420 canvas): one polyline per
/// series, axes with five ticks each, a legend, and an optional dashed
/// vertical marker line. `log_x` plots x on a log10 axis (ignored when any
/// x <= 0). Non-finite points are dropped. Output is deterministic for
/// identical inputs.
std::string line_chart_svg(const std::string& title,
                           const std::string& x_label,
                           const std::string& y_label,
                           std::span<const SvgSeries> series,
                           std::optional<double> dashed_vline = {},
                           bool log_x = false);

}  // namespace enskit
