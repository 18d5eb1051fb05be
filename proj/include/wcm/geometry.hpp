#pragma once

#include <array>
#include <cmath>
#include <span>

namespace wcm {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

using Point = Vec3;

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

// Twice the signed area of triangle abc in the xy plane.
inline double signed_area2(const Point& a, const Point& b, const Point& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Six times the signed volume of tetrahedron abcd.
inline double signed_volume6(const Point& a, const Point& b, const Point& c, const Point& d) {
    return dot(b - a, cross(c - a, d - a));
}

// A k-simplex counts as degenerate when k! * volume / diameter^k falls below this.
inline constexpr double kDegenerateNormVol = 1e-12;

// Circumcenter, circumradius and per-vertex signed heights of one simplex.
// For a degenerate simplex the circumcenter is meaningless; heights and radius
// are reported so that every height/radius ratio evaluates to exactly -1.
struct SimplexGeometry {
    Point circumcenter;
    double circumradius = 0.0;
    std::array<double, 4> heights{};
    bool degenerate = false;
};

// Longest edge of the simplex.
double simplex_diameter(std::span<const Point> pts);

// Unsigned k-dimensional volume (length/area/volume).
double simplex_volume(std::span<const Point> pts);

// k! * volume / diameter^k; the degeneracy measure.
double normalized_volume(std::span<const Point> pts);

bool is_degenerate(std::span<const Point> pts);

// Equidistant point in the affine hull of the vertices. Throws DegenerateSimplex.
Point circumcenter(std::span<const Point> pts);
double circumradius(std::span<const Point> pts);

// Non-throwing combined query. Heights are signed distances from the
// circumcenter to each opposite-facet hyperplane, positive when the
// circumcenter lies on the same side as the vertex.
SimplexGeometry simplex_geometry(std::span<const Point> pts);

// Signed height of vertex i. Throws DegenerateSimplex when the simplex or the
// opposite facet is degenerate.
double signed_height(std::span<const Point> pts, int i);

// True when every vertex lies strictly outside the equatorial ball of its
// opposite facet (ball centered at the facet circumcenter with the facet
// circumradius). If margin is given it receives min_i |dist - R_facet|.
bool equatorial_ball_test(std::span<const Point> pts, double* margin = nullptr);

// True when every k-face contains its own circumcenter strictly inside,
// decided by strict positivity of the circumcenter's barycentric coordinates.
bool is_k_well_centered(std::span<const Point> pts, int k);

// k-well-centered for every k = 1..n.
bool is_completely_well_centered(std::span<const Point> pts);

// Interior angles of triangle abc, in vertex order, each in [0, pi].
// Distinct collinear points give (0, pi, 0) style results. When two vertices
// coincide the opposite vertex gets angle 0 and the coincident pair pi/2 each;
// a fully collapsed triangle reports (0, pi/2, pi/2).
std::array<double, 3> vertex_angles(const Point& a, const Point& b, const Point& c);

// Radius of the inscribed ball: k * volume / sum of facet volumes.
double inradius(std::span<const Point> pts);

} // namespace wcm
