#pragma once

// Minimal self-contained SVG plotting: line charts (optionally log-scale y),
// stacked panels, and spider/radar charts.  Emits plain well-formed XML with
// polylines, axes, tick labels, and legends — enough to visualize solver
// trajectories without any plotting dependency.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace potg::svg {

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  std::string color;  // empty -> palette color by index
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool log_y = false;          // plot log10(max(y, log_floor))
  double log_floor = 1e-12;
  bool legend = true;          // suppressed automatically for crowded charts
};

namespace detail {

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {
      "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors;
}

inline std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

inline Range nice_range(double lo, double hi) {
  if (!(lo < hi)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    return Range{lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return Range{lo - pad, hi + pad};
}

// Renders one chart into `out`, occupying the viewport rows [top, top+height).
inline void render_chart(std::string& out, const ChartSpec& spec, double width, double height,
                         double top) {
  const double ml = 64.0, mr = 16.0, mt = 28.0, mb = 40.0;  // margins
  const double px = ml, py = top + mt;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : spec.series)
    for (std::size_t k = 0; k < s.xs.size() && k < s.ys.size(); ++k) {
      const double y = spec.log_y ? std::log10(std::max(s.ys[k], spec.log_floor)) : s.ys[k];
      xmin = std::min(xmin, s.xs[k]);
      xmax = std::max(xmax, s.xs[k]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!std::isfinite(xmin)) { xmin = 0.0; xmax = 1.0; ymin = 0.0; ymax = 1.0; }
  const Range xr = nice_range(xmin, xmax);
  const Range yr = nice_range(ymin, ymax);
  const auto to_px = [&](double x) { return px + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto to_py = [&](double y) { return py + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<text x=\"" + num(px) + "\" y=\"" + num(top + 16.0) +
         "\" font-size=\"13\" font-weight=\"bold\">" + escape(spec.title) + "</text>\n";
  // frame
  out += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"#444444\"/>\n";
  // ticks: 5 per axis
  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double gx = to_px(fx);
    out += "<line x1=\"" + num(gx) + "\" y1=\"" + num(py + ph) + "\" x2=\"" + num(gx) + "\" y2=\"" +
           num(py + ph + 4.0) + "\" stroke=\"#444444\"/>\n";
    out += "<text x=\"" + num(gx) + "\" y=\"" + num(py + ph + 16.0) +
           "\" text-anchor=\"middle\">" + num(fx) + "</text>\n";
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    const double gy = to_py(fy);
    out += "<line x1=\"" + num(px - 4.0) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(px) + "\" y2=\"" +
           num(gy) + "\" stroke=\"#444444\"/>\n";
    const std::string label = spec.log_y ? ("1e" + num(fy)) : num(fy);
    out += "<text x=\"" + num(px - 8.0) + "\" y=\"" + num(gy + 4.0) + "\" text-anchor=\"end\">" +
           escape(label) + "</text>\n";
  }
  out += "<text x=\"" + num(px + pw / 2.0) + "\" y=\"" + num(py + ph + 32.0) +
         "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  out += "<text x=\"" + num(px - 48.0) + "\" y=\"" + num(py + ph / 2.0) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 " + num(px - 48.0) + " " +
         num(py + ph / 2.0) + ")\">" + escape(spec.y_label) + "</text>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& ser = spec.series[s];
    const std::string color =
        ser.color.empty() ? palette()[s % palette().size()] : ser.color;
    std::string points;
    for (std::size_t k = 0; k < ser.xs.size() && k < ser.ys.size(); ++k) {
      const double y = spec.log_y ? std::log10(std::max(ser.ys[k], spec.log_floor)) : ser.ys[k];
      points += num(to_px(ser.xs[k])) + "," + num(to_py(y)) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.2\" points=\"" +
           points + "\"/>\n";
  }

  if (spec.legend && spec.series.size() > 1 && spec.series.size() <= 12) {
    double ly = py + 8.0;
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
      const auto& ser = spec.series[s];
      const std::string color =
          ser.color.empty() ? palette()[s % palette().size()] : ser.color;
      out += "<line x1=\"" + num(px + pw - 120.0) + "\" y1=\"" + num(ly) + "\" x2=\"" +
             num(px + pw - 100.0) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
      out += "<text x=\"" + num(px + pw - 94.0) + "\" y=\"" + num(ly + 4.0) + "\">" +
             escape(ser.label) + "</text>\n";
      ly += 14.0;
    }
  } else if (spec.series.size() > 12) {
    out += "<text x=\"" + num(px + pw - 8.0) + "\" y=\"" + num(py + 14.0) +
           "\" text-anchor=\"end\" fill=\"#666666\">" + num(static_cast<double>(spec.series.size())) +
           " series</text>\n";
  }
  out += "</g>\n";
}

}  // namespace detail

// One or more charts stacked vertically in a single SVG document.
inline std::string stacked_charts(const std::vector<ChartSpec>& charts, double width = 640.0,
                                  double panel_height = 240.0) {
  const double total = panel_height * static_cast<double>(std::max<std::size_t>(charts.size(), 1));
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(width) +
                    "\" height=\"" + detail::num(total) + "\" viewBox=\"0 0 " + detail::num(width) +
                    " " + detail::num(total) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < charts.size(); ++i)
    detail::render_chart(out, charts[i], width, panel_height, panel_height * static_cast<double>(i));
  out += "</svg>\n";
  return out;
}

inline std::string line_chart(const ChartSpec& chart, double width = 640.0, double height = 320.0) {
  return stacked_charts({chart}, width, height);
}

// Spider/radar chart: one axis per category, one closed polygon per entity.
// Values are expected in [0, 1] (probability masses); larger radius = larger value.
inline std::string spider_chart(const std::string& title, const std::vector<std::string>& axes,
                                const std::vector<std::pair<std::string, std::vector<double>>>& polygons,
                                double size = 420.0) {
  const double cx = size / 2.0, cy = size / 2.0 + 10.0;
  const double radius = size / 2.0 - 60.0;
  const std::size_t k = axes.size();
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(size) +
                    "\" height=\"" + detail::num(size + 20.0) + "\" viewBox=\"0 0 " +
                    detail::num(size) + " " + detail::num(size + 20.0) + "\">\n" +
                    "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
                    "<g font-family=\"sans-serif\" font-size=\"11\">\n" +
                    "<text x=\"" + detail::num(cx) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\" font-weight=\"bold\">" +
                    detail::escape(title) + "</text>\n";
  const auto point = [&](std::size_t axis, double r) {
    constexpr double pi = std::numbers::pi;
    const double angle = -pi / 2.0 + 2.0 * pi * static_cast<double>(axis) / static_cast<double>(k);
    return std::pair<double, double>{cx + r * std::cos(angle), cy + r * std::sin(angle)};
  };
  // grid rings at 25/50/75/100%
  for (int ring = 1; ring <= 4; ++ring) {
    std::string pts;
    for (std::size_t a = 0; a <= k; ++a) {
      const auto [gx, gy] = point(a % k, radius * ring / 4.0);
      pts += detail::num(gx) + "," + detail::num(gy) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"#dddddd\" points=\"" + pts + "\"/>\n";
  }
  for (std::size_t a = 0; a < k; ++a) {
    const auto [gx, gy] = point(a, radius);
    const auto [tx, ty] = point(a, radius + 18.0);
    out += "<line x1=\"" + detail::num(cx) + "\" y1=\"" + detail::num(cy) + "\" x2=\"" +
           detail::num(gx) + "\" y2=\"" + detail::num(gy) + "\" stroke=\"#bbbbbb\"/>\n";
    out += "<text x=\"" + detail::num(tx) + "\" y=\"" + detail::num(ty + 4.0) +
           "\" text-anchor=\"middle\">" + detail::escape(axes[a]) + "</text>\n";
  }
  for (std::size_t e = 0; e < polygons.size(); ++e) {
    const std::string color = detail::palette()[e % detail::palette().size()];
    std::string pts;
    for (std::size_t a = 0; a <= k; ++a) {
      const double v = std::clamp(polygons[e].second[a % k], 0.0, 1.0);
      const auto [gx, gy] = point(a % k, radius * v);
      pts += detail::num(gx) + "," + detail::num(gy) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.6\" points=\"" + pts +
           "\"/>\n";
    out += "<line x1=\"16\" y1=\"" + detail::num(34.0 + 14.0 * static_cast<double>(e)) +
           "\" x2=\"36\" y2=\"" + detail::num(34.0 + 14.0 * static_cast<double>(e)) + "\" stroke=\"" +
           color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"40\" y=\"" + detail::num(38.0 + 14.0 * static_cast<double>(e)) + "\">" +
           detail::escape(polygons[e].first) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace potg::svg
