#include "svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace exonav::cli {
namespace {

constexpr double kPanel = 320.0;
constexpr double kMargin = 48.0;
constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#ff7f0e", "#9467bd", "#8c564b"};

struct Projection {
  const char* name;
  const char* u_label;
  const char* v_label;
  std::function<std::array<double, 2>(const Point3&)> map;
};

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double nice_step(double range) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

void panel(std::ostringstream& svg, const Projection& proj,
           const std::vector<PlotSeries>& series, double x0, double y0) {
  double umin = std::numeric_limits<double>::infinity();
  double vmin = umin;
  double umax = -umin;
  double vmax = -umin;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      const auto [u, v] = proj.map(p);
      umin = std::min(umin, u);
      umax = std::max(umax, u);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (!std::isfinite(umin)) {
    umin = vmin = -1.0;
    umax = vmax = 1.0;
  }
  // Equal scale on both axes, padded.
  double span = std::max({umax - umin, vmax - vmin, 1e-6}) * 1.1;
  const double uc = 0.5 * (umin + umax);
  const double vc = 0.5 * (vmin + vmax);
  umin = uc - span / 2;
  vmin = vc - span / 2;
  const double scale = kPanel / span;
  auto px = [&](double u) { return x0 + (u - umin) * scale; };
  auto py = [&](double v) { return y0 + kPanel - (v - vmin) * scale; };

  svg << "<g class=\"panel\" id=\"" << proj.name << "\">\n";
  svg << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\""
      << fmt(kPanel) << "\" height=\"" << fmt(kPanel)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<text x=\"" << fmt(x0 + kPanel / 2) << "\" y=\"" << fmt(y0 - 8)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << proj.name << "</text>\n";

  const double step = nice_step(span);
  for (double t = std::ceil(umin / step) * step; t <= umin + span + 1e-12; t += step) {
    const double x = px(t);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y0 + kPanel)
        << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(y0 + kPanel + 5)
        << "\" stroke=\"#444\"/>\n";
    svg << "<text class=\"tick\" x=\"" << fmt(x) << "\" y=\"" << fmt(y0 + kPanel + 17)
        << "\" text-anchor=\"middle\" font-size=\"9\">" << fmt(std::abs(t) < 1e-12 ? 0.0 : t)
        << "</text>\n";
  }
  for (double t = std::ceil(vmin / step) * step; t <= vmin + span + 1e-12; t += step) {
    const double y = py(t);
    svg << "<line x1=\"" << fmt(x0 - 5) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(x0) << "\" y2=\"" << fmt(y) << "\" stroke=\"#444\"/>\n";
    svg << "<text class=\"tick\" x=\"" << fmt(x0 - 7) << "\" y=\"" << fmt(y + 3)
        << "\" text-anchor=\"end\" font-size=\"9\">" << fmt(std::abs(t) < 1e-12 ? 0.0 : t)
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt(x0 + kPanel / 2) << "\" y=\"" << fmt(y0 + kPanel + 32)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << proj.u_label << " [mm]</text>\n";
  svg << "<text x=\"" << fmt(x0 - 36) << "\" y=\"" << fmt(y0 + kPanel / 2)
      << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 "
      << fmt(x0 - 36) << ' ' << fmt(y0 + kPanel / 2) << ")\">" << proj.v_label
      << " [mm]</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    svg << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\""
        << kColors[i % kColors.size()] << "\" points=\"";
    for (const auto& p : series[i].points) {
      const auto [u, v] = proj.map(p);
      svg << fmt(px(u)) << ',' << fmt(py(v)) << ' ';
    }
    svg << "\"/>\n";
  }
  svg << "</g>\n";
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series,
                       const std::string& title) {
  const double c = std::cos(kPi / 6.0);
  const double s = std::sin(kPi / 6.0);
  const std::array<Projection, 3> projections{{
      {"XY", "X0", "Y0", [](const Point3& p) { return std::array{p.x(), p.y()}; }},
      {"XZ", "X0", "Z0", [](const Point3& p) { return std::array{p.x(), p.z()}; }},
      {"isometric", "u", "v",
       [c, s](const Point3& p) {
         return std::array{(p.x() - p.y()) * c, p.z() + (p.x() + p.y()) * s};
       }},
  }};

  const double width = 3 * (kPanel + 2 * kMargin);
  const double height = kPanel + 2 * kMargin + 40 + 16.0 * static_cast<double>(series.size());
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' '
      << fmt(height) << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fmt(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
  for (std::size_t i = 0; i < projections.size(); ++i) {
    panel(svg, projections[i], series,
          kMargin + static_cast<double>(i) * (kPanel + 2 * kMargin), kMargin);
  }
  double ly = kPanel + 2 * kMargin + 20;
  for (std::size_t i = 0; i < series.size(); ++i, ly += 16) {
    svg << "<line x1=\"" << fmt(kMargin) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
        << fmt(kMargin + 24) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\""
        << kColors[i % kColors.size()] << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt(kMargin + 30) << "\" y=\"" << fmt(ly)
        << "\" font-size=\"11\">" << escape(series[i].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace exonav::cli
