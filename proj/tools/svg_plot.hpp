#pragma once

#include <string>
#include <vector>

#include "exonav/types.hpp"

namespace exonav::cli {

struct PlotSeries {
  std::string label;
  std::vector<Point3> points;
};

/// Three orthographic panels (XY, XZ, isometric) with mm ticks.
std::string render_svg(const std::vector<PlotSeries>& series,
                       const std::string& title);

}  // namespace exonav::cli
