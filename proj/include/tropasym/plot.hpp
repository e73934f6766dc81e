#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tropasym/perron.hpp"
#include "tropasym/tropical_core.hpp"

namespace tropasym {

/// Membership grid of a TP^2 eigenspace in plane coordinates (x2, x3).
/// Grid point (col, row) sits at (x0 + col * step, y0 + row * step).
struct RegionRaster {
  double x0 = 0.0;
  double y0 = 0.0;
  double step = 1.0;
  std::size_t cols = 0;
  std::size_t rows = 0;
  /// inside[row * cols + col].
  std::vector<bool> inside;

  bool at(std::size_t col, std::size_t row) const { return inside[row * cols + col]; }
};

/// Float membership tolerance used for the shaded region.
inline constexpr double kRegionTolerance = 1e-9;

/// Rasterizes span(gens) over the generators' bounding box padded by 1.
/// The longer side gets `grid` steps; both sides use the same step.
/// Throws InputError unless every generator lives in TP^2.
RegionRaster rasterize_region(std::span<const ProjectivePoint> gens, std::size_t grid = 400);

/// Vertices, in plane coordinates, of the tropical segment between two points of TP^2.
std::vector<std::pair<double, double>> tropical_segment(const FloatPoint& a, const FloatPoint& b);

/// SVG 1.1 document: shaded eigenspace, tropical segments between
/// generators, circled generators and the trajectory coloured yellow to
/// purple by increasing k. Region cells are emitted as one <rect> per
/// horizontal run, tagged with data-row, data-col and data-len.
std::string eigenspace_svg(std::span<const ProjectivePoint> gens, std::span<const PerronSample> trajectory,
                           std::size_t grid = 400, const std::string& title = "");

}  // namespace tropasym
