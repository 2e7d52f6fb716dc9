#pragma once

#include <string>
#include <vector>

#include "pptour/types.hpp"

namespace pptour {

struct TracePlotOptions {
    int width = 840;
    int height = 420;
    std::string title;
};

/// Deterministic SVG of index traces: x = frame position, y in [0,1], one
/// polyline per index, vertical markers at anchor/leg positions, legend.
std::string render_trace_svg(const std::vector<std::string>& index_names, const Matrix& values,
                             const std::vector<std::size_t>& markers,
                             const TracePlotOptions& opt = {});

struct ScatterPlotOptions {
    int width = 480;
    int height = 480;
    double radius = 2.0;
    double opacity = 0.5;
    std::string xlabel = "y1";
    std::string ylabel = "y2";
    std::string title;
};

std::string render_scatter_svg(const MatrixN2& points, const ScatterPlotOptions& opt = {});

} // namespace pptour
