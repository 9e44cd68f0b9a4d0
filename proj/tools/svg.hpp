#pragma once

#include <string>
#include <vector>

namespace dimlab::cli {

struct Series {
    std::string label;
    std::vector<double> x, y;
    bool markers = false;  // dots instead of a polyline
};

// Minimal line plot: axes, ticks at the data range ends, one polyline per series.
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series);

}  // namespace dimlab::cli
