#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sltm {

struct Series {
    std::string label;
    std::string color = "#1f6fb2";
    std::vector<std::pair<double, double>> points;
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 900;
    int height = 560;
};

// Self-contained SVG line plot with axes, ticks, grid and a legend. Non-finite
// points break the polyline. Throws if no series holds a finite point.
std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series);

} // namespace sltm
