#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rac::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Writes a plain-text SVG line plot: auto-scaled axes covering the data
/// extrema, one polyline per series, and a small legend. No display or
/// raster dependency.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

}  // namespace rac::svg
