#pragma once

// Minimal static SVG line plots, two stacked panels (levels and voltages).
// Plotting is best-effort output for eyeballing runs, nothing downstream
// parses it.

#include <string>
#include <vector>

namespace ltvi {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
    bool dashed = false;
};

void write_two_panel_svg(const std::string& path, const std::string& top_title,
                         const std::vector<SvgSeries>& top, const std::string& bottom_title,
                         const std::vector<SvgSeries>& bottom);

}  // namespace ltvi
