#pragma once

// Minimal SVG line plots for eyeballing sweep output. CSV files are the real output.

#include <iosfwd>
#include <string>
#include <vector>

namespace usc {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Plot {
    std::string name;    ///< file stem
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;
};

/// NaN samples break the polyline instead of being drawn.
void write_svg(std::ostream &os, const Plot &plot);

} // namespace usc
