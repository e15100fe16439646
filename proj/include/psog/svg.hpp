#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "psog/errors.hpp"
#include "psog/results.hpp"

namespace psog {

namespace detail {

/// Linear dark-to-bright ramp; per-channel monotone, so perceived brightness
/// strictly increases with value.
inline std::string ramp_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(16 + t * (255 - 16)));
  const int g = static_cast<int>(std::lround(16 + t * (255 - 16)));
  const int b = static_cast<int>(std::lround(64 + t * (160 - 64)));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

inline constexpr const char* kSentinelColor = "#ff00ff"; // non-finite cells

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace detail

/// 2-D metric slice for plotting: cells are row-major over (y, x).
struct HeatmapSurface {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x_values;
  std::vector<double> y_values;
  std::vector<double> cells;
};

/// Self-contained SVG heatmap: brighter cells = larger values, axis ticks at
/// the grid values, a min/max legend, and a tooltip (<title>) per cell with
/// the exact value. Non-finite cells use a sentinel color.
inline std::string emit_heatmap_svg(const HeatmapSurface& surface) {
  const std::size_t nx = surface.x_values.size();
  const std::size_t ny = surface.y_values.size();
  if (nx == 0 || ny == 0 || surface.cells.size() != nx * ny)
    throw ContractError("emit_heatmap_svg: cell matrix must be y_values x x_values");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : surface.cells)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const bool any_finite = std::isfinite(lo);
  const double span = (any_finite && hi > lo) ? hi - lo : 1.0;

  const int cell = 18;
  const int left = 70, top = 40, right = 150, bottom = 60;
  const int wpx = left + static_cast<int>(nx) * cell + right;
  const int hpx = top + static_cast<int>(ny) * cell + bottom;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(wpx) +
         "\" height=\"" + std::to_string(hpx) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(left) + "\" y=\"20\" font-size=\"13\">" +
         detail::xml_escape(surface.title) + "</text>\n";

  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double v = surface.cells[iy * nx + ix];
      const std::string color = std::isfinite(v)
                                    ? detail::ramp_color(any_finite ? (v - lo) / span : 0.5)
                                    : detail::kSentinelColor;
      const int x = left + static_cast<int>(ix) * cell;
      const int y = top + static_cast<int>(iy) * cell;
      svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
             std::to_string(cell) + "\" height=\"" + std::to_string(cell) + "\" fill=\"" + color +
             "\"><title>" + surface.x_label + "=" + format_g9(surface.x_values[ix]) + ", " +
             surface.y_label + "=" + format_g9(surface.y_values[iy]) + ": " + format_g9(v) +
             "</title></rect>\n";
    }
  }

  // Axis ticks at the grid values (thinned when dense).
  const std::size_t x_step = std::max<std::size_t>(1, nx / 12);
  for (std::size_t ix = 0; ix < nx; ix += x_step) {
    const int x = left + static_cast<int>(ix) * cell + cell / 2;
    const int y = top + static_cast<int>(ny) * cell;
    svg += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y + 14) +
           "\" text-anchor=\"middle\">" + format_g9(surface.x_values[ix]) + "</text>\n";
  }
  const std::size_t y_step = std::max<std::size_t>(1, ny / 12);
  for (std::size_t iy = 0; iy < ny; iy += y_step) {
    const int y = top + static_cast<int>(iy) * cell + cell / 2 + 4;
    svg += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" + std::to_string(y) +
           "\" text-anchor=\"end\">" + format_g9(surface.y_values[iy]) + "</text>\n";
  }
  svg += "<text x=\"" + std::to_string(left + static_cast<int>(nx) * cell / 2) + "\" y=\"" +
         std::to_string(top + static_cast<int>(ny) * cell + 36) +
         "\" text-anchor=\"middle\">" + detail::xml_escape(surface.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + std::to_string(top + static_cast<int>(ny) * cell / 2) +
         "\" transform=\"rotate(-90 16 " + std::to_string(top + static_cast<int>(ny) * cell / 2) +
         ")\" text-anchor=\"middle\">" + detail::xml_escape(surface.y_label) + "</text>\n";

  // Legend: vertical gradient bar with min/max labels.
  const int lx = left + static_cast<int>(nx) * cell + 30;
  const int lh = std::max(60, static_cast<int>(ny) * cell);
  const int steps = 24;
  for (int i = 0; i < steps; ++i) {
    const double t = 1.0 - (static_cast<double>(i) + 0.5) / steps;
    svg += "<rect x=\"" + std::to_string(lx) + "\" y=\"" +
           std::to_string(top + i * lh / steps) + "\" width=\"14\" height=\"" +
           std::to_string(lh / steps + 1) + "\" fill=\"" + detail::ramp_color(t) + "\"/>\n";
  }
  svg += "<text x=\"" + std::to_string(lx + 20) + "\" y=\"" + std::to_string(top + 10) + "\">" +
         (any_finite ? format_g9(hi) : "n/a") + "</text>\n";
  svg += "<text x=\"" + std::to_string(lx + 20) + "\" y=\"" + std::to_string(top + lh) + "\">" +
         (any_finite ? format_g9(lo) : "n/a") + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

struct CurveFamily {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  struct Curve {
    std::string label;
    std::vector<double> y;
  };
  std::vector<Curve> curves;
};

/// Self-contained SVG line plot (one polyline per curve, legend at right).
inline std::string emit_curves_svg(const CurveFamily& family) {
  if (family.x.empty() || family.curves.empty())
    throw ContractError("emit_curves_svg: need at least one curve over a nonempty grid");
  for (const auto& c : family.curves)
    if (c.y.size() != family.x.size())
      throw ContractError("emit_curves_svg: curve '" + c.label + "' does not match the grid");

  double xlo = family.x.front(), xhi = family.x.back();
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  for (const auto& c : family.curves)
    for (double v : c.y)
      if (std::isfinite(v)) {
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
      }
  if (!std::isfinite(ylo)) {
    ylo = 0.0;
    yhi = 1.0;
  }
  if (yhi == ylo) yhi = ylo + 1.0;
  if (xhi == xlo) xhi = xlo + 1.0;

  const int left = 60, top = 36, w = 420, h = 280, right = 150, bottom = 50;
  const auto X = [&](double x) { return left + (x - xlo) / (xhi - xlo) * w; };
  const auto Y = [&](double y) { return top + h - (y - ylo) / (yhi - ylo) * h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(left + w + right) + "\" height=\"" + std::to_string(top + h + bottom) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(left) + "\" y=\"20\" font-size=\"13\">" +
         detail::xml_escape(family.title) + "</text>\n";
  svg += "<rect x=\"" + std::to_string(left) + "\" y=\"" + std::to_string(top) + "\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(h) +
         "\" fill=\"none\" stroke=\"#888\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = xlo + (xhi - xlo) * i / 4.0;
    const double yv = ylo + (yhi - ylo) * i / 4.0;
    svg += "<text x=\"" + format_g9(X(xv)) + "\" y=\"" + std::to_string(top + h + 16) +
           "\" text-anchor=\"middle\">" + format_g9(xv) + "</text>\n";
    svg += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" + format_g9(Y(yv) + 4) +
           "\" text-anchor=\"end\">" + format_g9(yv) + "</text>\n";
  }
  svg += "<text x=\"" + std::to_string(left + w / 2) + "\" y=\"" +
         std::to_string(top + h + 38) + "\" text-anchor=\"middle\">" +
         detail::xml_escape(family.x_label) + "</text>\n";
  svg += "<text x=\"14\" y=\"" + std::to_string(top + h / 2) + "\" transform=\"rotate(-90 14 " +
         std::to_string(top + h / 2) + ")\" text-anchor=\"middle\">" +
         detail::xml_escape(family.y_label) + "</text>\n";

  for (std::size_t ci = 0; ci < family.curves.size(); ++ci) {
    const double t = family.curves.size() > 1
                         ? static_cast<double>(ci) / (family.curves.size() - 1)
                         : 0.5;
    const std::string color = detail::ramp_color(0.15 + 0.7 * t);
    std::string pts;
    for (std::size_t j = 0; j < family.x.size(); ++j) {
      if (!std::isfinite(family.curves[ci].y[j])) continue;
      pts += format_g9(X(family.x[j])) + "," + format_g9(Y(family.curves[ci].y[j])) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\"/>\n";
    const int ly = top + 10 + static_cast<int>(ci) * 16;
    svg += "<rect x=\"" + std::to_string(left + w + 16) + "\" y=\"" + std::to_string(ly - 9) +
           "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
    svg += "<text x=\"" + std::to_string(left + w + 34) + "\" y=\"" + std::to_string(ly + 1) +
           "\">" + detail::xml_escape(family.curves[ci].label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

} // namespace psog
