#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mcc {

struct SvgSeries {
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    double width = 1.5;
    bool dashed = false;
    std::string label;
};

struct SvgBand {
    std::vector<double> x, lo, hi;
    std::string fill = "#a6c8ff";
    double opacity = 0.5;
    std::string label;
};

// Standalone SVG line chart with an optional filled band; no external
// plotting dependency.
void write_line_chart(std::ostream& os, const std::string& title, const std::vector<SvgBand>& bands,
                      const std::vector<SvgSeries>& series, int width = 760, int height = 480);

} // namespace mcc
