#pragma once

#include <optional>
#include <string>

#include "cround/scheme.hpp"

namespace cround {

struct Viewport {
    double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
};

Viewport parse_viewport(const std::string& text);  // "x0,y0,x1,y1"

struct SvgStats {
    int polygons = 0;
    int outlines = 0;
};

// One <polygon> per tile piece overlapping the viewport, clipped to it. With
// inflate and highlight set, the r-neighbourhood of every tile of that colour
// is drawn as a <path> of offset edges and vertex arcs. d != 2 throws.
std::string render_svg(const Scheme& scheme, const Viewport& view, std::optional<double> inflate = std::nullopt,
                       std::optional<Color> highlight = std::nullopt, SvgStats* stats = nullptr);

}  // namespace cround
