#include "wcm/geometry.hpp"
#include "wcm/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace wcm {

namespace {

// Orthonormal basis of the affine hull spanned by the edge vectors
// e_i = pts[i+1] - pts[0], built with modified Gram-Schmidt.
// e_i = sum_{j<=i} r[j][i] q_j, so r is upper triangular with
// r[i][i] >= 0 and prod_i r[i][i] = k! * volume.
struct Basis {
    int k = 0;
    Vec3 q[3];
    double r[3][3] = {};
    double diam = 0.0;
    double norm_vol = 0.0;
    bool degenerate = true;
};

Basis make_basis(std::span<const Point> pts) {
    Basis b;
    b.k = static_cast<int>(pts.size()) - 1;
    b.diam = simplex_diameter(pts);
    if (b.diam <= 0.0) return b;

    double prod = 1.0;
    for (int i = 0; i < b.k; ++i) {
        Vec3 v = pts[i + 1] - pts[0];
        for (int j = 0; j < i; ++j) {
            b.r[j][i] = dot(b.q[j], v);
            v -= b.q[j] * b.r[j][i];
        }
        const double len = norm(v);
        b.r[i][i] = len;
        prod *= len;
        if (len > 0.0)
            b.q[i] = v / len;
        else {
            b.norm_vol = 0.0;
            return b;
        }
    }
    double scale = 1.0;
    for (int i = 0; i < b.k; ++i) scale *= b.diam;
    b.norm_vol = prod / scale;
    b.degenerate = b.norm_vol < kDegenerateNormVol;
    return b;
}

// Circumcenter coordinates y in the q basis: the equidistance conditions
// <e_i, x> = |e_i|^2 / 2 give the lower-triangular system r^T y = rhs.
void circumcenter_coords(std::span<const Point> pts, const Basis& b, double y[3]) {
    for (int i = 0; i < b.k; ++i) {
        double acc = 0.5 * norm2(pts[i + 1] - pts[0]);
        for (int j = 0; j < i; ++j) acc -= b.r[j][i] * y[j];
        y[i] = acc / b.r[i][i];
    }
}

Point circumcenter_from_basis(std::span<const Point> pts, const Basis& b, double* radius) {
    double y[3] = {};
    circumcenter_coords(pts, b, y);
    Point c = pts[0];
    double r2 = 0.0;
    for (int j = 0; j < b.k; ++j) {
        c += b.q[j] * y[j];
        r2 += y[j] * y[j];
    }
    if (radius) *radius = std::sqrt(r2);
    return c;
}

// Barycentric coordinates of the circumcenter with respect to the vertices;
// the simplex contains its circumcenter strictly iff all are positive.
bool circumcenter_strictly_inside(std::span<const Point> pts) {
    const Basis b = make_basis(pts);
    if (b.degenerate) return false;
    double y[3] = {};
    circumcenter_coords(pts, b, y);
    double mu[3] = {};
    double sum = 0.0;
    for (int i = b.k - 1; i >= 0; --i) {
        double acc = y[i];
        for (int j = i + 1; j < b.k; ++j) acc -= b.r[i][j] * mu[j];
        mu[i] = acc / b.r[i][i];
        sum += mu[i];
        if (mu[i] <= 0.0) return false;
    }
    return 1.0 - sum > 0.0;
}

void facet_points(std::span<const Point> pts, int skip, Point out[3], int& count) {
    count = 0;
    for (int j = 0; j < static_cast<int>(pts.size()); ++j)
        if (j != skip) out[count++] = pts[j];
}

// Circumcenter and circumradius of the facet opposite vertex `skip`.
// A facet that is a single point is its own circumcenter with radius 0.
bool facet_circumsphere(std::span<const Point> pts, int skip, Point& cf, double& rf) {
    Point f[3];
    int m = 0;
    facet_points(pts, skip, f, m);
    if (m == 1) {
        cf = f[0];
        rf = 0.0;
        return true;
    }
    const std::span<const Point> fs(f, static_cast<size_t>(m));
    const Basis fb = make_basis(fs);
    if (fb.degenerate) return false;
    cf = circumcenter_from_basis(fs, fb, &rf);
    return true;
}

} // namespace

double simplex_diameter(std::span<const Point> pts) {
    double d = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, dist(pts[i], pts[j]));
    return d;
}

double simplex_volume(std::span<const Point> pts) {
    const Basis b = make_basis(pts);
    double prod = 1.0;
    for (int i = 0; i < b.k; ++i) prod *= b.r[i][i];
    double fact = 1.0;
    for (int i = 2; i <= b.k; ++i) fact *= i;
    return prod / fact;
}

double normalized_volume(std::span<const Point> pts) {
    return make_basis(pts).norm_vol;
}

bool is_degenerate(std::span<const Point> pts) {
    return make_basis(pts).degenerate;
}

Point circumcenter(std::span<const Point> pts) {
    const Basis b = make_basis(pts);
    if (b.degenerate) throw DegenerateSimplex("circumcenter of a degenerate simplex");
    return circumcenter_from_basis(pts, b, nullptr);
}

double circumradius(std::span<const Point> pts) {
    const Basis b = make_basis(pts);
    if (b.degenerate) throw DegenerateSimplex("circumradius of a degenerate simplex");
    double r = 0.0;
    circumcenter_from_basis(pts, b, &r);
    return r;
}

SimplexGeometry simplex_geometry(std::span<const Point> pts) {
    SimplexGeometry g;
    const int n = static_cast<int>(pts.size()) - 1;
    const Basis b = make_basis(pts);
    if (!b.degenerate) {
        g.circumcenter = circumcenter_from_basis(pts, b, &g.circumradius);
        bool ok = true;
        for (int i = 0; i <= n && ok; ++i) {
            Point cf;
            double rf = 0.0;
            if (!facet_circumsphere(pts, i, cf, rf)) {
                ok = false;
                break;
            }
            const Vec3 w = g.circumcenter - cf;
            const double h = norm(w);
            const double side = dot(pts[i] - cf, w);
            g.heights[i] = side > 0.0 ? h : (side < 0.0 ? -h : 0.0);
        }
        if (ok) return g;
    }
    // Degenerate: circumcenter at infinity by convention, every h/R is -1.
    g.circumcenter = Point{};
    g.circumradius = 1.0;
    g.heights = {-1.0, -1.0, -1.0, -1.0};
    g.degenerate = true;
    return g;
}

double signed_height(std::span<const Point> pts, int i) {
    const SimplexGeometry g = simplex_geometry(pts);
    if (g.degenerate) throw DegenerateSimplex("signed height of a degenerate simplex");
    return g.heights[static_cast<size_t>(i)];
}

bool equatorial_ball_test(std::span<const Point> pts, double* margin) {
    const Basis b = make_basis(pts);
    if (b.degenerate) throw DegenerateSimplex("equatorial ball test on a degenerate simplex");
    bool outside = true;
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        Point cf;
        double rf = 0.0;
        if (!facet_circumsphere(pts, i, cf, rf))
            throw DegenerateSimplex("equatorial ball test with a degenerate facet");
        const double d = dist(pts[i], cf);
        // Strict containment with a relative slack, so a vertex that lands on
        // the sphere up to rounding (a right angle) does not count as outside.
        if (!(d > rf * (1.0 + 1e-12))) outside = false;
        m = std::min(m, std::abs(d - rf));
    }
    if (margin) *margin = m;
    return outside;
}

bool is_k_well_centered(std::span<const Point> pts, int k) {
    const int n = static_cast<int>(pts.size()) - 1;
    if (k < 1 || k > n) throw IndexError("face dimension out of range");
    if (k == n) return circumcenter_strictly_inside(pts);
    // Enumerate the (k+1)-subsets of the vertex set.
    const int total = 1 << (n + 1);
    for (int mask = 0; mask < total; ++mask) {
        if (std::popcount(static_cast<unsigned>(mask)) != k + 1) continue;
        Point face[4];
        int m = 0;
        for (int j = 0; j <= n; ++j)
            if (mask & (1 << j)) face[m++] = pts[j];
        if (!circumcenter_strictly_inside(std::span<const Point>(face, static_cast<size_t>(m))))
            return false;
    }
    return true;
}

bool is_completely_well_centered(std::span<const Point> pts) {
    const int n = static_cast<int>(pts.size()) - 1;
    for (int k = 1; k <= n; ++k)
        if (!is_k_well_centered(pts, k)) return false;
    return true;
}

std::array<double, 3> vertex_angles(const Point& a, const Point& b, const Point& c) {
    const double lab = dist(a, b);
    const double lbc = dist(b, c);
    const double lca = dist(c, a);
    const int zeros = (lab == 0.0) + (lbc == 0.0) + (lca == 0.0);
    constexpr double half_pi = 1.5707963267948966;
    if (zeros >= 3) return {0.0, half_pi, half_pi};
    if (zeros == 1) {
        if (lab == 0.0) return {half_pi, half_pi, 0.0};
        if (lbc == 0.0) return {0.0, half_pi, half_pi};
        return {half_pi, 0.0, half_pi};
    }
    auto angle = [](const Point& at, const Point& u, const Point& v) {
        const Vec3 e1 = u - at;
        const Vec3 e2 = v - at;
        return std::atan2(norm(cross(e1, e2)), dot(e1, e2));
    };
    return {angle(a, b, c), angle(b, c, a), angle(c, a, b)};
}

double inradius(std::span<const Point> pts) {
    const int k = static_cast<int>(pts.size()) - 1;
    const double vol = simplex_volume(pts);
    double facet_sum = 0.0;
    for (int i = 0; i <= k; ++i) {
        Point f[3];
        int m = 0;
        facet_points(pts, i, f, m);
        if (m == 1)
            facet_sum += 1.0; // facet of an edge is a point; inradius below is unused for k=1
        else
            facet_sum += simplex_volume(std::span<const Point>(f, static_cast<size_t>(m)));
    }
    if (k == 1) return 0.5 * dist(pts[0], pts[1]);
    return k * vol / facet_sum;
}

} // namespace wcm
