#pragma once

#include <string>
#include <vector>

namespace blockdyn::svg {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct Point {
  double x, y;
  std::string color;
};

// Line chart with axes, ticks and a legend; log_y switches to log10 scale
// (nonpositive values are dropped).
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       bool log_y = false);

// Scatter in a square viewport with the four diagonal ray directions drawn.
std::string scatter_plane(const std::string& title, const std::vector<Point>& points,
                          double half_extent);

// Two-color sign heatmap over [-extent, extent]^2 plus the diagonal rays;
// cells has rows*cols entries (+1/-1), row-major from the top.
std::string sign_heatmap(const std::string& title, const std::vector<int>& cells,
                         int rows, int cols, double extent);

}  // namespace blockdyn::svg
