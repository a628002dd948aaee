#ifndef NEURODYN_SVG_PLOT_HPP
#define NEURODYN_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace neurodyn::svg {

/// One curve or point cloud. Non-finite samples are dropped rather than
/// rendered. An empty color picks from the default palette by position.
struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    bool scatter = false;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    double width = 560.0;
    double height = 360.0;
};

/// Render one panel as a standalone SVG document. Output is a pure
/// function of the input (all numbers go through the same shortest
/// round-trip formatter as the CSV writers), so reruns are bit-identical.
std::string render(const Plot& plot);

/// Lay panels out left-to-right in rows of `columns`.
std::string render_panels(const std::vector<Plot>& panels, int columns);

void write_svg(const std::string& svg_text, const std::string& path);

} // namespace neurodyn::svg

#endif
