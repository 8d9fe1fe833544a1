#include "enskit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace enskit {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 610.0, kTop = 48.0, kBottom = 370.0;

// Short fixed-precision form for human-facing tick labels; polyline
// coordinates below use it too, which keeps files compact and stable.
std::string num(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double place(double v, double pix_lo, double pix_hi) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo)
                         : (v - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
  double tick_value(int i, int n) const {
    const double t = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(n - 1);
    return log ? std::pow(10.0, t) : t;
  }
};

Axis fit_axis(std::span<const SvgSeries> series, bool take_x, bool want_log,
              std::optional<double> extra) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  bool log_ok = want_log;
  auto visit = [&](double v) {
    if (!std::isfinite(v)) return;
    if (v <= 0.0) log_ok = false;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (const SvgSeries& s : series) {
    for (double v : take_x ? s.x : s.y) visit(v);
  }
  if (extra && take_x) visit(*extra);
  if (!(lo <= hi)) {  // no finite data at all
    lo = 0.0;
    hi = 1.0;
    log_ok = false;
  }
  Axis axis;
  axis.log = log_ok;
  if (axis.log) {
    lo = std::log10(lo);
    hi = std::log10(hi);
  }
  if (hi - lo < 1e-12) {  // degenerate span: pad around the single value
    lo -= 0.5;
    hi += 0.5;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  axis.lo = lo;
  axis.hi = hi;
  return axis;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           std::span<const SvgSeries> series,
                           std::optional<double> dashed_vline, bool log_x) {
  const Axis ax = fit_axis(series, true, log_x, dashed_vline);
  const Axis ay = fit_axis(series, false, false, {});

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" +
         title + "</text>\n";

  // Frame and ticks.
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(kRight - kLeft) + "\" height=\"" + num(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i < kTicks; ++i) {
    const double xv = ax.tick_value(i, kTicks);
    const double xp = ax.place(xv, kLeft, kRight);
    svg += "<line x1=\"" + num(xp) + "\" y1=\"" + num(kBottom) + "\" x2=\"" +
           num(xp) + "\" y2=\"" + num(kBottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(xp) + "\" y=\"" + num(kBottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           num(xv) + "</text>\n";
    const double yv = ay.tick_value(i, kTicks);
    const double yp = ay.place(yv, kBottom, kTop);
    svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(yp) + "\" x2=\"" +
           num(kLeft) + "\" y2=\"" + num(yp) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(yp + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           num(yv) + "</text>\n";
  }
  svg += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"" +
         num(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" +
         x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + num((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 18 " +
         num((kTop + kBottom) / 2) + ")\">" + y_label + "</text>\n";

  if (dashed_vline && std::isfinite(*dashed_vline) &&
      (!ax.log || *dashed_vline > 0.0)) {
    const double xp = ax.place(*dashed_vline, kLeft, kRight);
    svg += "<line x1=\"" + num(xp) + "\" y1=\"" + num(kTop) + "\" x2=\"" +
           num(xp) + "\" y2=\"" + num(kBottom) +
           "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
  }

  double legend_y = kTop + 14.0;
  for (const SvgSeries& s : series) {
    std::string points;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (ax.log && s.x[i] <= 0.0) continue;
      if (!points.empty()) points += " ";
      points += num(ax.place(s.x[i], kLeft, kRight)) + "," +
                num(ay.place(s.y[i], kBottom, kTop));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    svg += "<line x1=\"" + num(kRight - 120) + "\" y1=\"" + num(legend_y) +
           "\" x2=\"" + num(kRight - 96) + "\" y2=\"" + num(legend_y) +
           "\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + num(kRight - 90) + "\" y=\"" + num(legend_y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label +
           "</text>\n";
    legend_y += 16.0;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace enskit
