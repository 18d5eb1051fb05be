#include "wcm/connectivity.hpp"
#include "wcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace wcm {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kBoundaryAngleEps = 1e-9;   // slack on the >= pi/2 test
constexpr double kInsphereEps = 1e-9;        // relative empty-circumball slack

std::set<int> lonely_ids(const SimplicialMesh& m) {
    std::set<int> out;
    for (const LonelyVertex& lv : find_lonely_vertices(m)) out.insert(lv.vertex);
    return out;
}

double cell_max_angle(const SimplicialMesh& m, int c) {
    const auto p = cell_points(m, c);
    const auto a = vertex_angles(p[0], p[1], p[2]);
    return std::max({a[0], a[1], a[2]});
}

// positive when p lies strictly inside the circumcircle of ccw triangle abc
double incircle_det(const Point& a, const Point& b, const Point& c, const Point& p) {
    const double ax = a.x - p.x, ay = a.y - p.y;
    const double bx = b.x - p.x, by = b.y - p.y;
    const double cx = c.x - p.x, cy = c.y - p.y;
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

double hull_area(std::span<const Point> pts) {
    std::vector<Point> p(pts.begin(), pts.end());
    std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::vector<Point> h(2 * p.size());
    size_t k = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && signed_area2(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
        h[k++] = p[i];
    }
    const size_t lower = k + 1;
    for (size_t i = p.size() - 1; i-- > 0;) {
        while (k >= lower && signed_area2(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    double area2 = 0.0;
    for (size_t i = 1; i + 1 < h.size(); ++i) area2 += signed_area2(h[0], h[i], h[i + 1]);
    return 0.5 * area2;
}

// Interior edges of a planar mesh: sorted edge -> the two incident cells.
std::map<std::array<int, 2>, std::vector<int>> edge_cells(const SimplicialMesh& m) {
    std::map<std::array<int, 2>, std::vector<int>> out;
    for (size_t c = 0; c < m.cells.size(); ++c)
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                const int u = m.cells[c][static_cast<size_t>(a)];
                const int v = m.cells[c][static_cast<size_t>(b)];
                out[{std::min(u, v), std::max(u, v)}].push_back(static_cast<int>(c));
            }
    return out;
}

int opposite_vertex(const std::array<int, 4>& cell, int a, int b) {
    for (int j = 0; j < 3; ++j)
        if (cell[static_cast<size_t>(j)] != a && cell[static_cast<size_t>(j)] != b) return cell[static_cast<size_t>(j)];
    return -1;
}

std::array<int, 4> oriented_triangle(const SimplicialMesh& m, int a, int b, int c) {
    const Point& pa = m.vertices[static_cast<size_t>(a)];
    const Point& pb = m.vertices[static_cast<size_t>(b)];
    const Point& pc = m.vertices[static_cast<size_t>(c)];
    if (signed_area2(pa, pb, pc) < 0.0) return {a, c, b, -1};
    return {a, b, c, -1};
}

bool is_subset(const std::set<int>& a, const std::set<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

double boundary_angle(const SimplicialMesh& m, int v) {
    double sum = 0.0;
    for (size_t c = 0; c < m.cells.size(); ++c) {
        const auto& cell = m.cells[c];
        int at = -1;
        for (int j = 0; j <= m.dim; ++j)
            if (cell[static_cast<size_t>(j)] == v) at = j;
        if (at < 0) continue;
        const auto p = cell_points(m, static_cast<int>(c));
        const auto ang = vertex_angles(p[0], p[1], p[2]);
        sum += ang[static_cast<size_t>(at)];
    }
    return sum;
}

std::vector<LonelyVertex> find_lonely_vertices(const SimplicialMesh& m) {
    std::vector<LonelyVertex> out;
    const auto neighbors = vertex_neighbors(m);
    if (m.dim == 3) {
        for (size_t v = 0; v < m.vertices.size(); ++v) {
            const int deg = static_cast<int>(neighbors[v].size());
            if (deg < 7) out.push_back({static_cast<int>(v), LonelyKind::Vertex3D, static_cast<double>(deg)});
        }
        return out;
    }
    for (size_t v = 0; v < m.vertices.size(); ++v) {
        if (!m.boundary[v]) {
            const int deg = static_cast<int>(neighbors[v].size());
            if (deg < 5) out.push_back({static_cast<int>(v), LonelyKind::Interior2D, static_cast<double>(deg)});
            continue;
        }
        const double theta = boundary_angle(m, static_cast<int>(v));
        if (theta < kPi / 2.0 - kBoundaryAngleEps) continue;
        const int required = static_cast<int>(std::ceil(theta / (kPi / 2.0 - kBoundaryAngleEps))) - 1;
        int interior_nb = 0;
        for (int u : neighbors[v])
            if (!m.boundary[static_cast<size_t>(u)]) ++interior_nb;
        if (interior_nb < required) out.push_back({static_cast<int>(v), LonelyKind::Boundary2D, theta});
    }
    return out;
}

int repair_connectivity_2d(SimplicialMesh& m) {
    if (m.dim != 2) throw Error("connectivity repair is only defined for planar meshes");
    int flips = 0;
    while (true) {
        const std::set<int> before = lonely_ids(m);
        if (before.empty()) break;

        bool found = false;
        int best_reduction = 0;
        double best_gain = -std::numeric_limits<double>::infinity();
        int best_ca = -1, best_cb = -1;
        std::array<int, 4> best_t1{}, best_t2{};

        for (const auto& [edge, cells] : edge_cells(m)) {
            if (cells.size() != 2) continue;
            const int a = edge[0], b = edge[1];
            const int ca = cells[0], cb = cells[1];
            const int c = opposite_vertex(m.cells[static_cast<size_t>(ca)], a, b);
            const int d = opposite_vertex(m.cells[static_cast<size_t>(cb)], a, b);
            const Point& pc = m.vertices[static_cast<size_t>(c)];
            const Point& pd = m.vertices[static_cast<size_t>(d)];
            const double sa = signed_area2(pc, pd, m.vertices[static_cast<size_t>(a)]);
            const double sb = signed_area2(pc, pd, m.vertices[static_cast<size_t>(b)]);
            if (!((sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0))) continue;

            SimplicialMesh cand = m;
            cand.cells[static_cast<size_t>(ca)] = oriented_triangle(m, c, d, a);
            cand.cells[static_cast<size_t>(cb)] = oriented_triangle(m, c, d, b);
            const std::set<int> after = lonely_ids(cand);
            if (after.size() >= before.size() || !is_subset(after, before)) continue;

            const int reduction = static_cast<int>(before.size() - after.size());
            const double gain =
                std::max(cell_max_angle(m, ca), cell_max_angle(m, cb)) -
                std::max(cell_max_angle(cand, ca), cell_max_angle(cand, cb));
            if (reduction > best_reduction || (reduction == best_reduction && gain > best_gain)) {
                found = true;
                best_reduction = reduction;
                best_gain = gain;
                best_ca = ca;
                best_cb = cb;
                best_t1 = cand.cells[static_cast<size_t>(ca)];
                best_t2 = cand.cells[static_cast<size_t>(cb)];
            }
        }
        if (!found) break;
        m.cells[static_cast<size_t>(best_ca)] = best_t1;
        m.cells[static_cast<size_t>(best_cb)] = best_t2;
        ++flips;
    }
    return flips;
}

std::vector<std::array<int, 2>> local_delaunay_violations(const SimplicialMesh& m) {
    std::map<std::array<int, 3>, std::vector<int>> facets;
    for (size_t c = 0; c < m.cells.size(); ++c)
        for (int skip = 0; skip <= m.dim; ++skip) {
            std::array<int, 3> f{-1, -1, -1};
            int k = 0;
            for (int j = 0; j <= m.dim; ++j)
                if (j != skip) f[static_cast<size_t>(k++)] = m.cells[c][static_cast<size_t>(j)];
            std::sort(f.begin(), f.begin() + m.dim);
            facets[f].push_back(static_cast<int>(c));
        }

    std::vector<std::array<int, 2>> out;
    for (const auto& [facet, cells] : facets) {
        if (cells.size() != 2) continue;
        bool violated = false;
        for (int side = 0; side < 2 && !violated; ++side) {
            const int cell = cells[static_cast<size_t>(side)];
            const int other = cells[static_cast<size_t>(1 - side)];
            int opp = -1;
            for (int j = 0; j <= m.dim; ++j) {
                const int v = m.cells[static_cast<size_t>(other)][static_cast<size_t>(j)];
                if (std::find(facet.begin(), facet.begin() + m.dim, v) == facet.begin() + m.dim) opp = v;
            }
            const auto p = cell_points(m, cell);
            const SimplexGeometry g = simplex_geometry(std::span<const Point>(p.data(), static_cast<size_t>(m.dim + 1)));
            if (g.degenerate) {
                violated = true;
                break;
            }
            const double d = dist(m.vertices[static_cast<size_t>(opp)], g.circumcenter);
            if (d < g.circumradius * (1.0 - kInsphereEps)) violated = true;
        }
        if (violated) out.push_back({cells[0], cells[1]});
    }
    return out;
}

bool is_locally_delaunay(const SimplicialMesh& m) {
    return local_delaunay_violations(m).empty();
}

SimplicialMesh delaunay_2d(std::span<const Point> pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 3) throw DegenerateInput("need at least 3 points");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (pts[static_cast<size_t>(i)] == pts[static_cast<size_t>(j)])
                throw DegenerateInput("duplicate points");

    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const Point& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span = std::max(xmax - xmin, ymax - ymin);
    const double diam2 = span * span;
    bool has_area = false;
    for (int i = 0; i < n && !has_area; ++i)
        for (int j = i + 1; j < n && !has_area; ++j)
            for (int k = j + 1; k < n && !has_area; ++k)
                if (std::abs(signed_area2(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)], pts[static_cast<size_t>(k)])) > 1e-12 * diam2)
                    has_area = true;
    if (!has_area) throw DegenerateInput("points are collinear");

    // Incremental insertion with an enclosing super triangle.
    std::vector<Point> all(pts.begin(), pts.end());
    const double cx = 0.5 * (xmin + xmax);
    const double cy = 0.5 * (ymin + ymax);
    const double big = 1000.0 * span;
    all.push_back({cx - 3.0 * big, cy - big, 0.0});
    all.push_back({cx + 3.0 * big, cy - big, 0.0});
    all.push_back({cx, cy + 3.0 * big, 0.0});

    auto ccw = [&](int a, int b, int c) -> std::array<int, 3> {
        if (signed_area2(all[static_cast<size_t>(a)], all[static_cast<size_t>(b)], all[static_cast<size_t>(c)]) < 0.0)
            return {a, c, b};
        return {a, b, c};
    };

    std::vector<std::array<int, 3>> tris;
    tris.push_back(ccw(n, n + 1, n + 2));

    for (int i = 0; i < n; ++i) {
        const Point& p = all[static_cast<size_t>(i)];
        std::vector<std::array<int, 3>> keep;
        std::map<std::array<int, 2>, int> edge_count;
        for (const auto& t : tris) {
            if (incircle_det(all[static_cast<size_t>(t[0])], all[static_cast<size_t>(t[1])], all[static_cast<size_t>(t[2])], p) > 0.0) {
                for (int e = 0; e < 3; ++e) {
                    const int u = t[static_cast<size_t>(e)];
                    const int v = t[static_cast<size_t>((e + 1) % 3)];
                    ++edge_count[{std::min(u, v), std::max(u, v)}];
                }
            } else {
                keep.push_back(t);
            }
        }
        if (edge_count.empty()) throw DegenerateInput("point insertion found no cavity");
        // Boundary edges of the cavity appear exactly once.
        for (const auto& t : tris) {
            if (incircle_det(all[static_cast<size_t>(t[0])], all[static_cast<size_t>(t[1])], all[static_cast<size_t>(t[2])], p) <= 0.0) continue;
            for (int e = 0; e < 3; ++e) {
                const int u = t[static_cast<size_t>(e)];
                const int v = t[static_cast<size_t>((e + 1) % 3)];
                if (edge_count[{std::min(u, v), std::max(u, v)}] == 1) keep.push_back(ccw(u, v, i));
            }
        }
        tris.swap(keep);
    }

    SimplicialMesh m;
    m.dim = 2;
    m.vertices.assign(pts.begin(), pts.end());
    for (const auto& t : tris) {
        if (t[0] >= n || t[1] >= n || t[2] >= n) continue;
        m.cells.push_back({t[0], t[1], t[2], -1});
    }
    if (m.cells.empty()) throw DegenerateInput("triangulation is empty");
    std::sort(m.cells.begin(), m.cells.end());

    std::vector<char> used(static_cast<size_t>(n), 0);
    for (const auto& cell : m.cells)
        for (int j = 0; j < 3; ++j) used[static_cast<size_t>(cell[static_cast<size_t>(j)])] = 1;
    if (std::find(used.begin(), used.end(), 0) != used.end())
        throw DegenerateInput("a point was not triangulated");

    validate_cells(m);
    orient_positive(m);
    recompute_boundary(m);

    double area = 0.0;
    for (size_t c = 0; c < m.cells.size(); ++c) area += cell_signed_measure(m, static_cast<int>(c));
    const double hull = hull_area(pts);
    if (!(std::abs(area - hull) <= 1e-9 * hull))
        throw DegenerateInput("triangulation does not cover the hull");
    if (!is_locally_delaunay(m)) throw DegenerateInput("local Delaunay verification failed");
    return m;
}

Triangulation canonical_cells(const SimplicialMesh& m) {
    if (m.dim != 2) throw Error("canonical cells are only defined for planar meshes");
    Triangulation t;
    for (const auto& cell : m.cells) {
        std::array<int, 3> tri{cell[0], cell[1], cell[2]};
        std::sort(tri.begin(), tri.end());
        t.push_back(tri);
    }
    std::sort(t.begin(), t.end());
    return t;
}

TriangulationSet enumerate_triangulations(std::span<const Point> pts) {
    if (pts.size() > 10) throw TooManyPoints("triangulation enumeration supports at most 10 points");
    TriangulationSet out;
    out.points.assign(pts.begin(), pts.end());

    const Triangulation start = canonical_cells(delaunay_2d(pts));
    std::set<Triangulation> seen{start};
    std::deque<Triangulation> queue{start};
    while (!queue.empty()) {
        const Triangulation t = queue.front();
        queue.pop_front();
        out.triangulations.push_back(t);

        std::map<std::array<int, 2>, std::vector<int>> edges;
        for (size_t i = 0; i < t.size(); ++i)
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b)
                    edges[{t[i][static_cast<size_t>(a)], t[i][static_cast<size_t>(b)]}].push_back(static_cast<int>(i));

        for (const auto& [edge, owners] : edges) {
            if (owners.size() != 2) continue;
            const int a = edge[0], b = edge[1];
            int c = -1, d = -1;
            for (int v : t[static_cast<size_t>(owners[0])])
                if (v != a && v != b) c = v;
            for (int v : t[static_cast<size_t>(owners[1])])
                if (v != a && v != b) d = v;
            const double sa = signed_area2(pts[static_cast<size_t>(c)], pts[static_cast<size_t>(d)], pts[static_cast<size_t>(a)]);
            const double sb = signed_area2(pts[static_cast<size_t>(c)], pts[static_cast<size_t>(d)], pts[static_cast<size_t>(b)]);
            if (!((sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0))) continue;

            Triangulation next = t;
            std::array<int, 3> t1{a, c, d};
            std::array<int, 3> t2{b, c, d};
            std::sort(t1.begin(), t1.end());
            std::sort(t2.begin(), t2.end());
            next[static_cast<size_t>(owners[0])] = t1;
            next[static_cast<size_t>(owners[1])] = t2;
            std::sort(next.begin(), next.end());
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    return out;
}

double triangulation_max_angle(std::span<const Point> pts, const Triangulation& t) {
    double worst = 0.0;
    for (const auto& tri : t) {
        const auto a = vertex_angles(pts[static_cast<size_t>(tri[0])], pts[static_cast<size_t>(tri[1])], pts[static_cast<size_t>(tri[2])]);
        worst = std::max({worst, a[0], a[1], a[2]});
    }
    return worst;
}

double triangulation_cos_deviation(std::span<const Point> pts, const Triangulation& t) {
    double worst = 0.0;
    for (const auto& tri : t) {
        const auto a = vertex_angles(pts[static_cast<size_t>(tri[0])], pts[static_cast<size_t>(tri[1])], pts[static_cast<size_t>(tri[2])]);
        for (double ang : a) worst = std::max(worst, std::abs(2.0 * std::cos(ang) - 1.0));
    }
    return worst;
}

std::vector<size_t> argmin_triangulations(const TriangulationSet& ts, EnergyFamily criterion) {
    if (criterion != EnergyFamily::Emax && criterion != EnergyFamily::Ecos)
        throw Error("triangulation optimality supports Emax and Ecos only");
    std::vector<double> value(ts.triangulations.size());
    for (size_t i = 0; i < ts.triangulations.size(); ++i)
        value[i] = criterion == EnergyFamily::Emax
                       ? triangulation_max_angle(ts.points, ts.triangulations[i])
                       : triangulation_cos_deviation(ts.points, ts.triangulations[i]);
    const double best = *std::min_element(value.begin(), value.end());
    std::vector<size_t> out;
    for (size_t i = 0; i < value.size(); ++i)
        if (value[i] == best) out.push_back(i);
    return out;
}

OptimalTriangulations optimal_triangulation(std::span<const Point> pts, EnergyFamily criterion) {
    OptimalTriangulations out;
    out.all = enumerate_triangulations(pts);
    out.best = argmin_triangulations(out.all, criterion);
    return out;
}

} // namespace wcm
