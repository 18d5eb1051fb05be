#pragma once

#include "wcm/mesh.hpp"

#include <string>

namespace wcm {

struct RenderStyle {
    bool stroke = true;              // outline each triangle
    int width = 800;                 // image width in px; height follows the bbox
    double light_acute = 0.92;       // lightness at or below 60 degrees
    double light_before_jump = 0.65; // lightness approaching 90 degrees from below
    double light_at_jump = 0.45;     // lightness at exactly 90 degrees
    double light_max = 0.05;         // lightness at 180 degrees
};

// Fill lightness in [0,1] for a triangle whose largest angle is max_angle
// (radians). Piecewise linear, nonincreasing, with a downward jump at 90
// degrees so right/obtuse cells stand apart from acute ones.
double shade_lightness(double max_angle, const RenderStyle& style = {});

// Grayscale SVG of a triangle mesh; each cell's fill darkness tracks its
// largest angle. Throws Error on 3D input. Output is byte-stable for a
// given mesh and style.
std::string render_svg(const SimplicialMesh& m, const RenderStyle& style = {});

} // namespace wcm
