#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace satseek {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 900;
  int height = 540;
  // Series longer than this are thinned before rendering.
  std::size_t max_points = 4000;
};

// Minimal standalone SVG line plot (axes, ticks, legend, polylines).
void write_svg_plot(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
                    const PlotOptions& options);

}  // namespace satseek
