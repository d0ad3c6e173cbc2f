#pragma once

#include <string>
#include <vector>

namespace fklab {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
  std::vector<double> y_lo, y_hi;  // optional error bars
  bool line = false;               // polyline instead of markers
};

struct PlotSpec {
  std::string title, x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<PlotSeries> series;
};

// Self-contained SVG with axes, ticks, markers, error bars and a legend.
std::string render_svg(const PlotSpec& spec);

}  // namespace fklab
