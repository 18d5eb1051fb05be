#pragma once

// Shared test utilities: deterministic sampling, independent geometric
// oracles, fixture builders, and a Laplacian-smoothing baseline.

#include "wcm/connectivity.hpp"
#include "wcm/geometry.hpp"
#include "wcm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace testutil {

using wcm::Point;
using wcm::SimplicialMesh;
using wcm::Triangulation;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double u() { return (eng() >> 11) * 0x1.0p-53; }
    double u(double a, double b) { return a + (b - a) * u(); }
};

inline std::vector<Point> random_simplex(Rng& rng, int n, double min_norm_vol = 1e-6) {
    std::vector<Point> pts(static_cast<size_t>(n) + 1);
    do {
        for (auto& p : pts) {
            p.x = rng.u();
            p.y = rng.u();
            p.z = n == 3 ? rng.u() : 0.0;
        }
    } while (wcm::normalized_volume(pts) < min_norm_vol);
    return pts;
}

// --- circumcenter oracles: direct perpendicular-bisector solves -----------

inline Point circumcenter_2d_oracle(const Point& a, const Point& b, const Point& c) {
    const double a11 = b.x - a.x, a12 = b.y - a.y;
    const double a21 = c.x - a.x, a22 = c.y - a.y;
    const double r1 = 0.5 * (b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y);
    const double r2 = 0.5 * (c.x * c.x + c.y * c.y - a.x * a.x - a.y * a.y);
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0) throw std::runtime_error("degenerate oracle input");
    return {(r1 * a22 - r2 * a12) / det, (a11 * r2 - a21 * r1) / det, 0.0};
}

inline double det3(const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline Point solve3(const double m[3][3], const double r[3]) {
    const double d = det3(m);
    if (d == 0.0) throw std::runtime_error("degenerate oracle input");
    double mx[3][3], my[3][3], mz[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            mx[i][j] = j == 0 ? r[i] : m[i][j];
            my[i][j] = j == 1 ? r[i] : m[i][j];
            mz[i][j] = j == 2 ? r[i] : m[i][j];
        }
    return {det3(mx) / d, det3(my) / d, det3(mz) / d};
}

inline Point circumcenter_3d_oracle(const Point& a, const Point& b, const Point& c, const Point& d) {
    const Point q[3] = {b, c, d};
    double m[3][3], r[3];
    for (int i = 0; i < 3; ++i) {
        m[i][0] = q[i].x - a.x;
        m[i][1] = q[i].y - a.y;
        m[i][2] = q[i].z - a.z;
        r[i] = 0.5 * (wcm::norm2(q[i]) - wcm::norm2(a));
    }
    return solve3(m, r);
}

// Triangle embedded in 3D: two bisector planes plus the triangle's plane.
inline Point circumcenter_tri3d_oracle(const Point& a, const Point& b, const Point& c) {
    const wcm::Vec3 n = wcm::cross(b - a, c - a);
    double m[3][3] = {{b.x - a.x, b.y - a.y, b.z - a.z},
                      {c.x - a.x, c.y - a.y, c.z - a.z},
                      {n.x, n.y, n.z}};
    double r[3] = {0.5 * (wcm::norm2(b) - wcm::norm2(a)), 0.5 * (wcm::norm2(c) - wcm::norm2(a)),
                   wcm::dot(n, a)};
    return solve3(m, r);
}

// --- exhaustive triangulation oracle: maximal crossing-free edge sets -----

inline double cross2(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline std::vector<int> convex_hull_indices(const std::vector<Point>& pts) {
    std::vector<int> idx(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        return pts[static_cast<size_t>(i)].x != pts[static_cast<size_t>(j)].x
                   ? pts[static_cast<size_t>(i)].x < pts[static_cast<size_t>(j)].x
                   : pts[static_cast<size_t>(i)].y < pts[static_cast<size_t>(j)].y;
    });
    auto build = [&](const std::vector<int>& order) {
        std::vector<int> h;
        for (int i : order) {
            while (h.size() >= 2 &&
                   cross2(pts[static_cast<size_t>(h[h.size() - 2])], pts[static_cast<size_t>(h.back())],
                          pts[static_cast<size_t>(i)]) <= 0.0)
                h.pop_back();
            h.push_back(i);
        }
        return h;
    };
    std::vector<int> lower = build(idx);
    std::reverse(idx.begin(), idx.end());
    std::vector<int> upper = build(idx);
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    return lower;
}

inline bool strictly_crossing(const Point& a, const Point& b, const Point& c, const Point& d) {
    const double d1 = cross2(a, b, c), d2 = cross2(a, b, d);
    const double d3 = cross2(c, d, a), d4 = cross2(c, d, b);
    return ((d1 > 0) != (d2 > 0)) && d1 != 0 && d2 != 0 && ((d3 > 0) != (d4 > 0)) && d3 != 0 &&
           d4 != 0;
}

inline bool point_on_segment(const Point& p, const Point& a, const Point& b) {
    if (cross2(a, b, p) != 0.0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
           p.y <= std::max(a.y, b.y) && !(p.x == a.x && p.y == a.y) && !(p.x == b.x && p.y == b.y);
}

inline bool point_in_triangle_strict(const Point& p, const Point& a, const Point& b, const Point& c) {
    const double d1 = cross2(a, b, p), d2 = cross2(b, c, p), d3 = cross2(c, a, p);
    return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

// Every triangulation of a small planar point set, found independently of the
// flip-graph search: pick maximal crossing-free edge sets of the right size
// that contain the hull, then read off the empty triangles.
inline std::set<Triangulation> enumerate_by_edges(const std::vector<Point>& pts) {
    const int n = static_cast<int>(pts.size());
    const auto hull = convex_hull_indices(pts);
    const int h = static_cast<int>(hull.size());
    const int edge_target = 3 * n - 3 - h;
    const int tri_target = 2 * n - 2 - h;

    std::set<std::array<int, 2>> hull_edges;
    for (int i = 0; i < h; ++i) {
        int a = hull[static_cast<size_t>(i)], b = hull[static_cast<size_t>((i + 1) % h)];
        if (a > b) std::swap(a, b);
        hull_edges.insert({a, b});
    }

    std::vector<std::array<int, 2>> candidates;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool blocked = false;
            for (int k = 0; k < n && !blocked; ++k)
                if (k != i && k != j)
                    blocked = point_on_segment(pts[static_cast<size_t>(k)], pts[static_cast<size_t>(i)],
                                               pts[static_cast<size_t>(j)]);
            if (!blocked) candidates.push_back({i, j});
        }

    std::set<Triangulation> out;
    std::vector<std::array<int, 2>> chosen;

    auto emit = [&]() {
        std::set<std::array<int, 2>> edges(chosen.begin(), chosen.end());
        for (const auto& e : hull_edges)
            if (!edges.count(e)) return;
        Triangulation tri;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    if (!edges.count({i, j}) || !edges.count({j, k}) || !edges.count({i, k})) continue;
                    bool empty = true;
                    for (int v = 0; v < n && empty; ++v)
                        if (v != i && v != j && v != k)
                            empty = !point_in_triangle_strict(pts[static_cast<size_t>(v)],
                                                              pts[static_cast<size_t>(i)],
                                                              pts[static_cast<size_t>(j)],
                                                              pts[static_cast<size_t>(k)]);
                    if (empty) tri.push_back({i, j, k});
                }
        if (static_cast<int>(tri.size()) != tri_target) return;
        double area = 0.0;
        for (const auto& t : tri)
            area += std::abs(cross2(pts[static_cast<size_t>(t[0])], pts[static_cast<size_t>(t[1])],
                                    pts[static_cast<size_t>(t[2])])) *
                    0.5;
        double hull_area = 0.0;
        for (int i = 1; i + 1 < h; ++i)
            hull_area += cross2(pts[static_cast<size_t>(hull[0])], pts[static_cast<size_t>(hull[static_cast<size_t>(i)])],
                                pts[static_cast<size_t>(hull[static_cast<size_t>(i + 1)])]) *
                         0.5;
        hull_area = std::abs(hull_area);
        if (std::abs(area - hull_area) > 1e-9 * hull_area) return;
        std::sort(tri.begin(), tri.end());
        out.insert(tri);
    };

    auto rec = [&](auto&& self, size_t start) -> void {
        if (static_cast<int>(chosen.size()) == edge_target) {
            emit();
            return;
        }
        if (static_cast<int>(candidates.size() - start) <
            edge_target - static_cast<int>(chosen.size()))
            return;
        for (size_t i = start; i < candidates.size(); ++i) {
            const auto& e = candidates[i];
            bool ok = true;
            for (const auto& f : chosen)
                if (strictly_crossing(pts[static_cast<size_t>(e[0])], pts[static_cast<size_t>(e[1])],
                                      pts[static_cast<size_t>(f[0])], pts[static_cast<size_t>(f[1])])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(e);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// --- fixture meshes --------------------------------------------------------

inline SimplicialMesh make_mesh_2d(std::vector<Point> vertices,
                                   std::vector<std::array<int, 3>> tris) {
    SimplicialMesh m;
    m.dim = 2;
    m.vertices = std::move(vertices);
    for (const auto& t : tris) m.cells.push_back({t[0], t[1], t[2], -1});
    wcm::validate_cells(m);
    wcm::orient_positive(m);
    wcm::recompute_boundary(m);
    return m;
}

inline SimplicialMesh equilateral_mesh() {
    return make_mesh_2d({{0, 0, 0}, {1, 0, 0}, {0.5, 0.8660254037844386, 0}}, {{0, 1, 2}});
}

inline SimplicialMesh right_triangle_mesh() {
    return make_mesh_2d({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

// Unit square split by one diagonal.
inline SimplicialMesh square2() {
    return make_mesh_2d({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}});
}

// Four right triangles fanned around the square's center.
inline SimplicialMesh square4() {
    return make_mesh_2d({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0.5, 0.5, 0}},
                        {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
}

inline SimplicialMesh hex_fan(double hub_x = 0.0, double hub_y = 0.0) {
    std::vector<Point> pts{{hub_x, hub_y, 0}};
    for (int i = 0; i < 6; ++i) {
        const double a = 3.141592653589793 * i / 3.0;
        pts.push_back({std::cos(a), std::sin(a), 0});
    }
    std::vector<std::array<int, 3>> tris;
    for (int i = 0; i < 6; ++i) tris.push_back({0, 1 + i, 1 + (i + 1) % 6});
    return make_mesh_2d(std::move(pts), std::move(tris));
}

// Structured offset-row grid of the square [0,w] x [0,h] (w, h even).
// Even rows carry points at integer x; odd rows at half-integer x only, so
// the interior rows are staggered and the diagonals alternate direction.
// Interior valence is 5-7. The side columns are triangulated with cap
// triangles spanning two rows, except at the corners where the cap is split
// with a boundary midpoint so the corner region admits an all-acute star.
inline SimplicialMesh offset_grid(int w = 8, int h = 8) {
    std::vector<Point> pts;
    std::vector<std::vector<int>> row_ids(static_cast<size_t>(h) + 1);
    std::vector<std::vector<double>> row_xs(static_cast<size_t>(h) + 1);
    for (int r = 0; r <= h; ++r) {
        if (r % 2 == 0)
            for (int i = 0; i <= w; ++i) row_xs[static_cast<size_t>(r)].push_back(i);
        else
            for (int i = 0; i < w; ++i) row_xs[static_cast<size_t>(r)].push_back(i + 0.5);
        for (double x : row_xs[static_cast<size_t>(r)]) {
            row_ids[static_cast<size_t>(r)].push_back(static_cast<int>(pts.size()));
            pts.push_back({x, static_cast<double>(r), 0});
        }
    }
    std::vector<std::array<int, 3>> tris;
    // Caps along the side columns, one per interior odd row.
    for (int r = 3; r < h - 1; r += 2) {
        const auto& below = row_ids[static_cast<size_t>(r - 1)];
        const auto& above = row_ids[static_cast<size_t>(r + 1)];
        const auto& odd = row_ids[static_cast<size_t>(r)];
        tris.push_back({below.front(), above.front(), odd.front()});
        tris.push_back({below.back(), above.back(), odd.back()});
    }
    // Zigzag strips between adjacent rows. In the strips next to the top and
    // bottom rows the end triangles belong to the corner fans added below.
    for (int r = 0; r < h; ++r) {
        const auto& lo = row_ids[static_cast<size_t>(r)];
        const auto& hi = row_ids[static_cast<size_t>(r + 1)];
        const auto& lox = row_xs[static_cast<size_t>(r)];
        const auto& hix = row_xs[static_cast<size_t>(r + 1)];
        const bool even_above = r == 1;      // strip under even row 2
        const bool even_below = r == h - 2;  // strip over even row h-2
        size_t i = 0, j = 0;
        while (i + 1 < lo.size() || j + 1 < hi.size()) {
            const bool can_lo = i + 1 < lo.size();
            const bool can_hi = j + 1 < hi.size();
            bool advance_lo;
            if (!can_hi)
                advance_lo = true;
            else if (!can_lo)
                advance_lo = false;
            else
                advance_lo = lox[i + 1] <= hix[j + 1];
            if (advance_lo) {
                if (!(even_below && (i == 0 || i == lo.size() - 2)))
                    tris.push_back({lo[i], lo[i + 1], hi[j]});
                ++i;
            } else {
                if (!(even_above && (j == 0 || j == hi.size() - 2)))
                    tris.push_back({lo[i], hi[j + 1], hi[j]});
                ++j;
            }
        }
    }
    // Corner fans: a boundary midpoint on the side column splits the corner
    // cap into a corner triangle plus two triangles reaching one even-row
    // vertex inward.
    const int left1 = static_cast<int>(pts.size());
    pts.push_back({0, 1, 0});
    const int right1 = static_cast<int>(pts.size());
    pts.push_back({static_cast<double>(w), 1, 0});
    const int left7 = static_cast<int>(pts.size());
    pts.push_back({0, static_cast<double>(h - 1), 0});
    const int right7 = static_cast<int>(pts.size());
    pts.push_back({static_cast<double>(w), static_cast<double>(h - 1), 0});
    const auto& row0 = row_ids[0];
    const auto& row1 = row_ids[1];
    const auto& row2 = row_ids[2];
    const auto& rowh = row_ids[static_cast<size_t>(h)];
    const auto& rowh1 = row_ids[static_cast<size_t>(h - 1)];
    const auto& rowh2 = row_ids[static_cast<size_t>(h - 2)];
    auto fan = [&](int corner, int mid, int a, int b, int inner) {
        tris.push_back({corner, a, mid});
        tris.push_back({mid, a, b});
        tris.push_back({mid, b, inner});
    };
    fan(row0.front(), left1, row1.front(), row2[1], row2.front());
    fan(row0.back(), right1, row1.back(), row2[row2.size() - 2], row2.back());
    fan(rowh.front(), left7, rowh1.front(), rowh2[1], rowh2.front());
    fan(rowh.back(), right7, rowh1.back(), rowh2[rowh2.size() - 2], rowh2.back());
    return make_mesh_2d(std::move(pts), std::move(tris));
}

inline SimplicialMesh single_tet() {
    SimplicialMesh m;
    m.dim = 3;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.cells.push_back({0, 1, 2, 3});
    wcm::validate_cells(m);
    wcm::orient_positive(m);
    wcm::recompute_boundary(m);
    return m;
}

// (n x n x n)-subcube grid, six tetrahedra per subcube around the main
// diagonal, compatible across neighboring subcubes.
inline SimplicialMesh kuhn_cube(int n = 3) {
    SimplicialMesh m;
    m.dim = 3;
    const int s = n + 1;
    auto id = [&](int i, int j, int k) { return (i * s + j) * s + k; };
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            for (int k = 0; k < s; ++k)
                m.vertices.push_back({static_cast<double>(i), static_cast<double>(j),
                                      static_cast<double>(k)});
    const int axes[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (const auto& perm : axes) {
                    int v[3] = {i, j, k};
                    std::array<int, 4> cell{};
                    cell[0] = id(v[0], v[1], v[2]);
                    for (int step = 0; step < 3; ++step) {
                        ++v[perm[step]];
                        cell[static_cast<size_t>(step) + 1] = id(v[0], v[1], v[2]);
                    }
                    m.cells.push_back(cell);
                }
    wcm::validate_cells(m);
    wcm::orient_positive(m);
    wcm::recompute_boundary(m);
    return m;
}

// Uniform coordinate noise of amplitude scale x mean edge length applied to
// every interior vertex.
inline void perturb_interior(SimplicialMesh& m, Rng& rng, double scale) {
    const double amp = scale * wcm::mean_edge_length(m);
    for (size_t v = 0; v < m.vertices.size(); ++v) {
        if (m.boundary[v]) continue;
        m.vertices[v].x += amp * rng.u(-1.0, 1.0);
        m.vertices[v].y += amp * rng.u(-1.0, 1.0);
        if (m.dim == 3) m.vertices[v].z += amp * rng.u(-1.0, 1.0);
    }
}

// Simultaneous-update Laplacian smoothing of the interior vertices.
inline void laplacian_smooth(SimplicialMesh& m, int iterations) {
    const auto nb = wcm::vertex_neighbors(m);
    for (int it = 0; it < iterations; ++it) {
        std::vector<Point> next = m.vertices;
        for (size_t v = 0; v < m.vertices.size(); ++v) {
            if (m.boundary[v] || nb[v].empty()) continue;
            Point avg{0, 0, 0};
            for (int u : nb[v]) avg += m.vertices[static_cast<size_t>(u)];
            next[v] = avg / static_cast<double>(nb[v].size());
        }
        m.vertices = std::move(next);
    }
}

} // namespace testutil
