#include <doctest.h>

#include "support.hpp"
#include "wcm/errors.hpp"
#include "wcm/quality.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

using namespace wcm;
using testutil::Rng;

namespace {

SimplicialMesh regular_tet_mesh() {
    SimplicialMesh m;
    m.dim = 3;
    m.vertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    m.cells.push_back({0, 1, 2, 3});
    validate_cells(m);
    orient_positive(m);
    recompute_boundary(m);
    return m;
}

// Ten mutually disjoint random triangles in one mesh.
SimplicialMesh scattered_triangles(Rng& rng, int count = 10) {
    SimplicialMesh m;
    m.dim = 2;
    for (int t = 0; t < count; ++t) {
        auto tri = testutil::random_simplex(rng, 2, 1e-2);
        int base = static_cast<int>(m.vertices.size());
        double ox = 3.0 * t; // keep the triangles apart
        for (auto& p : tri) m.vertices.push_back({p.x + ox, p.y, 0});
        m.cells.push_back({base, base + 1, base + 2, -1});
    }
    validate_cells(m);
    orient_positive(m);
    recompute_boundary(m);
    return m;
}

SimplicialMesh degenerate_triangle_mesh() {
    SimplicialMesh m;
    m.dim = 2;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    m.cells.push_back({0, 1, 2, -1});
    recompute_boundary(m);
    return m;
}

} // namespace

TEST_CASE("per-simplex deviation measure on the canonical shapes") {
    SimplicialMesh eq = testutil::equilateral_mesh();
    auto eq_pts = cell_points(eq, 0);
    CHECK(energy_fn(std::span<const Point>(eq_pts.data(), 3), 0.5) ==
          doctest::Approx(0.0).epsilon(1e-12));

    SimplicialMesh rt = testutil::right_triangle_mesh();
    auto rt_pts = cell_points(rt, 0);
    CHECK(energy_fn(std::span<const Point>(rt_pts.data(), 3), 0.5) ==
          doctest::Approx(0.5).epsilon(1e-12));

    SimplicialMesh tet = regular_tet_mesh();
    auto tet_pts = cell_points(tet, 0);
    CHECK(energy_fn(std::span<const Point>(tet_pts.data(), 4), 0.5) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    std::vector<Point> flat{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    CHECK(energy_fn(flat, 0.5) == 1.5);
}

TEST_CASE("height ratios of a degenerate cell are exactly -1") {
    std::vector<Point> flat{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    auto hr = height_ratios(flat);
    for (int i = 0; i < 3; ++i) CHECK(hr[static_cast<size_t>(i)] == -1.0);
}

TEST_CASE("Ep energy of an equilateral triangle vanishes for every p") {
    SimplicialMesh m = testutil::equilateral_mesh();
    for (int p : {2, 4, 8, 16}) CHECK(energy_Ep(m, p) < 1e-12);
}

TEST_CASE("E2 of the unit right triangle equals 7 - 4*sqrt(2)") {
    SimplicialMesh m = testutil::right_triangle_mesh();
    CHECK(energy_Ep(m, 2) == doctest::Approx(7.0 - 4.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("a degenerate cell contributes exactly (n+1) * 3^p") {
    SimplicialMesh m = degenerate_triangle_mesh();
    CHECK(energy_Ep(m, 4) == 3.0 * 81.0);
    CHECK(energy_Ep(m, 2) == 3.0 * 9.0);
}

TEST_CASE("mesh Ep is the cell-major sum of per-cell contributions") {
    Rng rng(5);
    SimplicialMesh m = scattered_triangles(rng);
    double total = 0.0;
    for (size_t c = 0; c < m.cells.size(); ++c) total += cell_Ep(m, static_cast<int>(c), 4);
    CHECK(energy_Ep(m, 4) == total);
}

TEST_CASE("Einfty on the canonical shapes") {
    CHECK(energy_Einfty(testutil::equilateral_mesh()) < 1e-12);
    CHECK(energy_Einfty(testutil::right_triangle_mesh()) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(energy_Einfty(regular_tet_mesh()) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("p-th root of Ep decreases toward twice Einfty") {
    for (std::uint64_t seed : {101, 202, 303}) {
        Rng rng(seed);
        SimplicialMesh m = scattered_triangles(rng);
        double target = 2.0 * energy_Einfty(m);
        REQUIRE(target > 0.0);
        double prev = std::numeric_limits<double>::infinity();
        for (int p : {2, 4, 8, 16, 32, 64}) {
            double root = std::pow(energy_Ep(m, p), 1.0 / p);
            CHECK(root <= prev * (1.0 + 1e-12));
            CHECK(root >= target * (1.0 - 1e-12));
            prev = root;
        }
        CHECK((prev - target) / target < 0.05);
    }
}

TEST_CASE("angle-based energies on the squares and the equilateral triangle") {
    SimplicialMesh eq = testutil::equilateral_mesh();
    CHECK(energy_cos(eq) < 1e-12);
    CHECK(energy_max_angle(eq) == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-12));
    CHECK(energy_min_angle(eq) == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-12));

    SimplicialMesh sq = testutil::square4();
    CHECK(energy_cos(sq) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(energy_max_angle(sq) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-12));
    CHECK(energy_min_angle(sq) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
}

TEST_CASE("planar-only energies refuse tetrahedral meshes") {
    SimplicialMesh tet = regular_tet_mesh();
    CHECK_THROWS_AS((void)energy_cos(tet), Error);
    CHECK_THROWS_AS((void)energy_max_angle(tet), Error);
    CHECK_THROWS_AS((void)energy_min_angle(tet), Error);
}

TEST_CASE("inverse mean ratio is 1 on regular cells and the sentinel on inverted ones") {
    CHECK(energy_imr(testutil::equilateral_mesh()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(energy_imr(regular_tet_mesh()) == doctest::Approx(1.0).epsilon(1e-12));

    SimplicialMesh inv = testutil::equilateral_mesh();
    std::swap(inv.cells[0][0], inv.cells[0][1]);
    CHECK(energy_imr(inv) == kImrSentinel);
    CHECK(count_inverted_cells(inv) == 1);
    CHECK(count_inverted_cells(testutil::square4()) == 0);
    CHECK(energy_imr(degenerate_triangle_mesh()) == kImrSentinel);
}

TEST_CASE("inverse mean ratio is scale and rotation invariant") {
    Rng rng(17);
    SimplicialMesh m = scattered_triangles(rng, 5);
    double base = energy_imr(m);
    SimplicialMesh moved = m;
    const double th = 1.1, s = 0.37, c = std::cos(th), sn = std::sin(th);
    for (auto& p : moved.vertices)
        p = {s * (c * p.x - sn * p.y) + 4.0, s * (sn * p.x + c * p.y) - 2.0, 0};
    CHECK(energy_imr(moved) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("combined energy of an equilateral triangle is its inverse mean ratio") {
    SimplicialMesh m = testutil::equilateral_mesh();
    CHECK(energy_combined(m, 4, 100.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("the inversion sentinel dominates any inversion-free combined energy") {
    SimplicialMesh good = testutil::square4();
    SimplicialMesh inv = good;
    std::swap(inv.cells[0][0], inv.cells[0][1]);
    CHECK(energy_combined(inv, 4, 100.0) >= kImrSentinel);
    CHECK(energy_combined(good, 4, 100.0) < 1e6);
}

TEST_CASE("Ep energies are invariant under similarity transforms") {
    Rng rng(23);
    SimplicialMesh m = scattered_triangles(rng);
    SimplicialMesh moved = m;
    const double th = 0.6, s = 5.0, c = std::cos(th), sn = std::sin(th);
    for (auto& p : moved.vertices)
        p = {s * (c * p.x - sn * p.y) - 1.0, s * (sn * p.x + c * p.y) + 2.0, 0};
    for (int p : {2, 4, 16})
        CHECK(energy_Ep(moved, p) == doctest::Approx(energy_Ep(m, p)).epsilon(1e-9));
    CHECK(energy_Einfty(moved) == doctest::Approx(energy_Einfty(m)).epsilon(1e-9));
    CHECK(energy_cos(moved) == doctest::Approx(energy_cos(m)).epsilon(1e-9));
}

TEST_CASE("mirror reflection produces the exact same height-ratio terms") {
    // Hexagon ring around a hub; negating x maps the ring onto itself.
    std::vector<Point> ring{{1, 0, 0},  {0.5, 0.8660254037844386, 0},
                            {-0.5, 0.8660254037844386, 0}, {-1, 0, 0},
                            {-0.5, -0.8660254037844386, 0}, {0.5, -0.8660254037844386, 0}};
    const int mirror_of[6] = {3, 2, 1, 0, 5, 4};
    Point hub{0.3, 0.2, 0};
    Point hub_m{-0.3, 0.2, 0};
    for (int i = 0; i < 6; ++i) {
        int j = (i + 1) % 6;
        std::vector<Point> cell{hub, ring[static_cast<size_t>(i)], ring[static_cast<size_t>(j)]};
        std::vector<Point> mirrored{hub_m, ring[static_cast<size_t>(mirror_of[i])],
                                    ring[static_cast<size_t>(mirror_of[j])]};
        auto a = height_ratios(cell);
        auto b = height_ratios(mirrored);
        for (int v = 0; v < 3; ++v)
            CHECK(a[static_cast<size_t>(v)] == b[static_cast<size_t>(v)]);
    }
}

TEST_CASE("mirror-image meshes carry equal energies") {
    SimplicialMesh m = testutil::hex_fan(0.3, 0.2);
    SimplicialMesh r = m;
    for (auto& p : r.vertices) p.x = -p.x;
    orient_positive(r);
    for (int p : {2, 4, 16})
        CHECK(energy_Ep(r, p) == doctest::Approx(energy_Ep(m, p)).epsilon(1e-13));
    CHECK(energy_Einfty(r) == doctest::Approx(energy_Einfty(m)).epsilon(1e-13));
}

TEST_CASE("bad cells are exactly the non-well-centered ones") {
    CHECK(bad_cells(testutil::equilateral_mesh()).empty());
    CHECK(bad_cells(testutil::right_triangle_mesh()) == std::vector<int>{0});
    CHECK(count_bad_cells(testutil::square4()) == 4);
    CHECK(count_bad_cells(regular_tet_mesh()) == 0);
    CHECK(count_bad_cells(testutil::single_tet()) == 1);
    CHECK(count_bad_cells(degenerate_triangle_mesh()) == 1);
}

TEST_CASE("minimum height ratio over the canonical meshes") {
    CHECK(min_height_ratio(testutil::equilateral_mesh()) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(min_height_ratio(regular_tet_mesh()) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(min_height_ratio(testutil::right_triangle_mesh())) < 1e-12);
    CHECK(min_height_ratio(degenerate_triangle_mesh()) == -1.0);
}

TEST_CASE("quality report for the equilateral triangle") {
    QualityReport r = quality_report(testutil::equilateral_mesh());
    CHECK(r.dim == 2);
    CHECK(r.vertex_count == 3);
    CHECK(r.cell_count == 1);
    CHECK(r.bad_count == 0);
    CHECK(r.mean == doctest::Approx(60.0).epsilon(1e-9));
    CHECK(r.stddev < 1e-6);
    CHECK(r.min_value == doctest::Approx(60.0).epsilon(1e-9));
    CHECK(r.max_value == doctest::Approx(60.0).epsilon(1e-9));
    long total = std::accumulate(r.histogram.counts.begin(), r.histogram.counts.end(), 0L);
    CHECK(total == 3);
    CHECK(r.histogram.lo == 0.0);
    CHECK(r.histogram.hi == 180.0);
    CHECK(r.energy_label == "E4");
}

TEST_CASE("quality report flags the right triangle's right angle") {
    QualityReport r = quality_report(testutil::right_triangle_mesh());
    CHECK(r.bad_count == 1);
    CHECK(r.max_value == doctest::Approx(90.0).epsilon(1e-9));
    CHECK(r.mean == doctest::Approx(60.0).epsilon(1e-9));
}

TEST_CASE("quality report for a tetrahedral mesh describes height ratios") {
    QualityReport r = quality_report(regular_tet_mesh());
    CHECK(r.dim == 3);
    CHECK(r.bad_count == 0);
    CHECK(r.min_value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.max_value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.histogram.lo == -1.0);
    CHECK(r.histogram.hi == 1.0);
    long total = std::accumulate(r.histogram.counts.begin(), r.histogram.counts.end(), 0L);
    CHECK(total == 4);
}

TEST_CASE("mean planar angle is always 60 degrees") {
    Rng rng(31);
    SimplicialMesh m = scattered_triangles(rng);
    QualityReport r = quality_report(m);
    CHECK(r.mean == doctest::Approx(60.0).epsilon(1e-9));
    long total = std::accumulate(r.histogram.counts.begin(), r.histogram.counts.end(), 0L);
    CHECK(total == 3 * static_cast<long>(m.cells.size()));
}

TEST_CASE("report JSON carries the full summary") {
    QualityReport r = quality_report(testutil::square4());
    auto j = nlohmann::json::parse(report_json(r));
    CHECK(j["dim"] == 2);
    CHECK(j["cells"] == 4);
    CHECK(j["bad_cells"] == 4);
    CHECK(j["energy_label"] == "E4");
    CHECK(j["histogram"]["counts"].is_array());
}

TEST_CASE("histogram CSV has a header and one row per bin") {
    QualityReport r = quality_report(testutil::square4(), {}, 9);
    std::string csv = histogram_csv(r.histogram);
    CHECK(csv.rfind("bin_low,bin_high,count\n", 0) == 0);
    long rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 10);
}

TEST_CASE("energy names follow the schedule grammar") {
    CHECK(energy_name({EnergyFamily::Ep, 4, 0.5, 100.0}) == "E4");
    CHECK(energy_name({EnergyFamily::EpBarrier, 10, 0.5, 100.0}) == "~E10");
    CHECK(energy_name({EnergyFamily::Einfty, 4, 0.5, 100.0}) == "Einf");
}

TEST_CASE("energy evaluation is bitwise deterministic") {
    Rng rng(41);
    SimplicialMesh m = scattered_triangles(rng);
    CHECK(energy_Ep(m, 16) == energy_Ep(m, 16));
    CHECK(energy_combined(m, 4, 100.0) == energy_combined(m, 4, 100.0));
    QualityReport a = quality_report(m);
    QualityReport b = quality_report(m);
    CHECK(a.mean == b.mean);
    CHECK(a.stddev == b.stddev);
    CHECK(a.histogram.counts == b.histogram.counts);
}
