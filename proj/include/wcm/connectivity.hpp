#pragma once

#include "wcm/mesh.hpp"
#include "wcm/quality.hpp"

#include <array>
#include <vector>

namespace wcm {

enum class LonelyKind { Interior2D, Boundary2D, Vertex3D };

// A vertex whose valence makes every incident angle assignment contain a
// nonacute angle (2D) or that has too few incident edges (3D).
struct LonelyVertex {
    int vertex = -1;
    LonelyKind kind = LonelyKind::Interior2D;
    double detail = 0.0; // neighbor count, or boundary angle in radians
};

// Sum of incident triangle angles at vertex v (2D).
double boundary_angle(const SimplicialMesh& m, int v);

// 2D: interior vertices with fewer than 5 neighbors; boundary vertices whose
// boundary angle is at least pi/2 (within 1e-9) yet have fewer than
// ceil(angle / (pi/2 - 1e-9)) - 1 interior neighbors.
// 3D: every vertex with fewer than 7 incident edges.
std::vector<LonelyVertex> find_lonely_vertices(const SimplicialMesh& m);

// Greedy interior-edge flips, each strictly shrinking the lonely-vertex set
// without creating new lonely vertices or inverted triangles. Flips are
// ranked by lonely-count reduction, then by largest max-angle improvement.
// Returns the number of flips applied. Vertex positions never move.
int repair_connectivity_2d(SimplicialMesh& m);

// Interior facets where an opposite vertex lies strictly inside the
// neighboring cell's circumball with relative slack 1e-9. Each violation
// reports the two offending cell ids.
std::vector<std::array<int, 2>> local_delaunay_violations(const SimplicialMesh& m);
bool is_locally_delaunay(const SimplicialMesh& m);

// Delaunay triangulation of planar points by incremental insertion, verified
// locally Delaunay before returning. Throws DegenerateInput when the points
// are unusable (fewer than 3, duplicates, all collinear).
SimplicialMesh delaunay_2d(std::span<const Point> pts);

// Triangle list with each triple ascending and the list lexicographic.
using Triangulation = std::vector<std::array<int, 3>>;

Triangulation canonical_cells(const SimplicialMesh& m);

struct TriangulationSet {
    std::vector<Point> points;
    std::vector<Triangulation> triangulations; // [0] is the Delaunay start
};

// Every triangulation of at most 10 planar points in general position,
// discovered by breadth-first search of the edge-flip graph seeded with the
// Delaunay triangulation. Throws TooManyPoints above 10 points.
TriangulationSet enumerate_triangulations(std::span<const Point> pts);

// Largest angle / largest |2cos(angle)-1| over a triangulation.
double triangulation_max_angle(std::span<const Point> pts, const Triangulation& t);
double triangulation_cos_deviation(std::span<const Point> pts, const Triangulation& t);

// Indices of the triangulations minimizing the criterion (Emax or Ecos),
// ties kept under exact comparison.
std::vector<size_t> argmin_triangulations(const TriangulationSet& ts, EnergyFamily criterion);

struct OptimalTriangulations {
    TriangulationSet all;
    std::vector<size_t> best;
};

OptimalTriangulations optimal_triangulation(std::span<const Point> pts, EnergyFamily criterion);

} // namespace wcm
