#include "tropasym/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tropasym/errors.hpp"

namespace tropasym {
namespace {

constexpr double kCanvas = 560.0;  // drawing area in px, excluding margins
constexpr double kMargin = 40.0;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string escape_xml(const std::string& s) {
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

// Viridis endpoints: yellow at t = 0, purple at t = 1.
std::string gradient_colour(double t) {
  const double r = 253 + (68 - 253) * t, g = 231 + (1 - 231) * t, b = 37 + (84 - 37) * t;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(r)), static_cast<int>(std::lround(g)),
                static_cast<int>(std::lround(b)));
  return buf;
}

struct Box {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();
  void add(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
};

}  // namespace

RegionRaster rasterize_region(std::span<const ProjectivePoint> gens, std::size_t grid) {
  if (gens.empty()) throw InputError("plot: no generators");
  for (const auto& g : gens)
    if (g.size() != 3) throw InputError("plot: only TP^2 (n = 3) can be drawn, got n = " + std::to_string(g.size()));
  if (grid < 1) throw InputError("plot: grid must be at least 1");

  std::vector<FloatPoint> fgens;
  Box box;
  for (const auto& g : gens) {
    fgens.push_back(to_float(g));
    box.add(fgens.back()[1], fgens.back()[2]);
  }
  RegionRaster r;
  r.x0 = box.xmin - 1.0;
  r.y0 = box.ymin - 1.0;
  const double w = box.xmax - box.xmin + 2.0, h = box.ymax - box.ymin + 2.0;
  r.step = std::max(w, h) / static_cast<double>(grid);
  r.cols = static_cast<std::size_t>(std::llround(w / r.step)) + 1;
  r.rows = static_cast<std::size_t>(std::llround(h / r.step)) + 1;
  r.inside.assign(r.cols * r.rows, false);
  for (std::size_t row = 0; row < r.rows; ++row) {
    for (std::size_t col = 0; col < r.cols; ++col) {
      const double p[3] = {0.0, r.x0 + col * r.step, r.y0 + row * r.step};
      r.inside[row * r.cols + col] = span_distance(normalize_float(p), fgens) <= kRegionTolerance;
    }
  }
  return r;
}

std::vector<std::pair<double, double>> tropical_segment(const FloatPoint& a, const FloatPoint& b) {
  if (a.size() != 3 || b.size() != 3) throw InputError("tropical_segment: points must lie in TP^2");
  // Points of the segment are max(a, t + b) for real t; the shape only
  // changes where t crosses some a_i - b_i.
  std::vector<double> ts = {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  std::sort(ts.begin(), ts.end());
  std::vector<std::pair<double, double>> out;
  for (double t : ts) {
    double v[3];
    for (int i = 0; i < 3; ++i) v[i] = std::max(a[i], t + b[i]);
    out.emplace_back(v[1] - v[0], v[2] - v[0]);
  }
  out.insert(out.begin(), {a[1], a[2]});
  out.emplace_back(b[1], b[2]);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string eigenspace_svg(std::span<const ProjectivePoint> gens, std::span<const PerronSample> trajectory,
                           std::size_t grid, const std::string& title) {
  const RegionRaster raster = rasterize_region(gens, grid);
  for (const auto& s : trajectory)
    if (s.point.size() != 3) throw InputError("plot: trajectory points must lie in TP^2");

  Box view;
  view.add(raster.x0, raster.y0);
  view.add(raster.x0 + (raster.cols - 1) * raster.step, raster.y0 + (raster.rows - 1) * raster.step);
  for (const auto& s : trajectory) view.add(s.point[1], s.point[2]);
  const double span = std::max(view.xmax - view.xmin, view.ymax - view.ymin);
  const double scale = kCanvas / (span + raster.step);
  const double width = (view.xmax - view.xmin + raster.step) * scale + 2 * kMargin;
  const double height = (view.ymax - view.ymin + raster.step) * scale + 2 * kMargin;
  // Plane y grows upwards; SVG y grows downwards.
  auto px = [&](double x) { return kMargin + (x - view.xmin + 0.5 * raster.step) * scale; };
  auto py = [&](double y) { return height - kMargin - (y - view.ymin + 0.5 * raster.step) * scale; };

  std::ostringstream svg;
  svg.precision(17);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
  if (!title.empty()) svg << "  <title>" << escape_xml(title) << "</title>\n";
  svg << "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"white\"/>\n";

  svg << "  <g class=\"region\" fill=\"#9ecae1\" stroke=\"none\" data-x0=\"" << raster.x0 << "\" data-y0=\""
      << raster.y0 << "\" data-step=\"" << raster.step << "\">\n";
  const double cell = raster.step * scale;
  for (std::size_t row = 0; row < raster.rows; ++row) {
    std::size_t col = 0;
    while (col < raster.cols) {
      if (!raster.at(col, row)) {
        ++col;
        continue;
      }
      std::size_t end = col;
      while (end < raster.cols && raster.at(end, row)) ++end;
      const double cx = raster.x0 + col * raster.step, cy = raster.y0 + row * raster.step;
      svg << "    <rect data-row=\"" << row << "\" data-col=\"" << col << "\" data-len=\"" << end - col << "\" x=\""
          << fmt(px(cx) - 0.5 * cell) << "\" y=\"" << fmt(py(cy) - 0.5 * cell) << "\" width=\""
          << fmt((end - col) * cell) << "\" height=\"" << fmt(cell) << "\"/>\n";
      col = end;
    }
  }
  svg << "  </g>\n";

  std::vector<FloatPoint> fgens;
  for (const auto& g : gens) fgens.push_back(to_float(g));
  svg << "  <g class=\"segments\" fill=\"none\" stroke=\"#3182bd\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < fgens.size(); ++i) {
    for (std::size_t j = i + 1; j < fgens.size(); ++j) {
      svg << "    <polyline points=\"";
      bool first = true;
      for (const auto& [x, y] : tropical_segment(fgens[i], fgens[j])) {
        svg << (first ? "" : " ") << fmt(px(x)) << "," << fmt(py(y));
        first = false;
      }
      svg << "\"/>\n";
    }
  }
  svg << "  </g>\n";

  svg << "  <g class=\"trajectory\" stroke=\"none\">\n";
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const double t = trajectory.size() > 1 ? static_cast<double>(i) / (trajectory.size() - 1) : 1.0;
    svg << "    <circle data-k=\"" << trajectory[i].k << "\" cx=\"" << fmt(px(trajectory[i].point[1])) << "\" cy=\""
        << fmt(py(trajectory[i].point[2])) << "\" r=\"4\" fill=\"" << gradient_colour(t) << "\"/>\n";
  }
  svg << "  </g>\n";

  svg << "  <g class=\"generators\" fill=\"none\" stroke=\"red\" stroke-width=\"2\">\n";
  for (const auto& g : fgens)
    svg << "    <circle cx=\"" << fmt(px(g[1])) << "\" cy=\"" << fmt(py(g[2])) << "\" r=\"8\"/>\n";
  svg << "  </g>\n";

  svg << "  <g class=\"axes\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n"
      << "    <text x=\"" << fmt(width / 2) << "\" y=\"" << fmt(height - 10) << "\" text-anchor=\"middle\">x2 - x1 ["
      << fmt(view.xmin) << ", " << fmt(view.xmax) << "]</text>\n"
      << "    <text x=\"14\" y=\"" << fmt(height / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fmt(height / 2) << ")\">x3 - x1 [" << fmt(view.ymin) << ", " << fmt(view.ymax) << "]</text>\n"
      << "  </g>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace tropasym
