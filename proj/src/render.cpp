#include "wcm/render.hpp"
#include "wcm/errors.hpp"
#include "wcm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wcm {

namespace {

constexpr double kDeg60 = 1.0471975511965976;
constexpr double kDeg90 = 1.5707963267948966;
constexpr double kDeg180 = 3.141592653589793;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string gray_hex(double lightness) {
    const int g = static_cast<int>(std::lround(255.0 * std::clamp(lightness, 0.0, 1.0)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", g, g, g);
    return buf;
}

} // namespace

double shade_lightness(double max_angle, const RenderStyle& style) {
    if (max_angle <= kDeg60) return style.light_acute;
    if (max_angle < kDeg90) {
        const double t = (max_angle - kDeg60) / (kDeg90 - kDeg60);
        return style.light_acute + t * (style.light_before_jump - style.light_acute);
    }
    const double t = std::clamp((max_angle - kDeg90) / (kDeg180 - kDeg90), 0.0, 1.0);
    return style.light_at_jump + t * (style.light_max - style.light_at_jump);
}

std::string render_svg(const SimplicialMesh& m, const RenderStyle& style) {
    if (m.dim != 2) throw Error("SVG rendering supports 2D meshes only");
    if (m.vertices.empty()) throw Error("cannot render an empty mesh");

    double xmin = m.vertices[0].x, xmax = xmin;
    double ymin = m.vertices[0].y, ymax = ymin;
    for (const Point& p : m.vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double spanx = std::max(xmax - xmin, 1e-12);
    const double spany = std::max(ymax - ymin, 1e-12);
    const double margin = style.width / 40.0;
    const double scale = (style.width - 2.0 * margin) / spanx;
    const long height = std::lround(2.0 * margin + scale * spany);

    auto px = [&](const Point& p) { return margin + (p.x - xmin) * scale; };
    auto py = [&](const Point& p) { return margin + (ymax - p.y) * scale; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(style.width) + " " + std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
        const auto pts = cell_points(m, c);
        const auto angles = vertex_angles(pts[0], pts[1], pts[2]);
        const double worst = std::max({angles[0], angles[1], angles[2]});
        out += "<polygon points=\"";
        for (int i = 0; i < 3; ++i) {
            if (i) out += ' ';
            out += fmt(px(pts[static_cast<size_t>(i)])) + "," + fmt(py(pts[static_cast<size_t>(i)]));
        }
        out += "\" fill=\"" + gray_hex(shade_lightness(worst, style)) + "\"";
        if (style.stroke) out += " stroke=\"#000000\" stroke-width=\"1\"";
        out += "/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace wcm
