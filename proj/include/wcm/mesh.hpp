#pragma once

#include "wcm/geometry.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wcm {

// Triangle/TetGen style .node/.ele pairs (the pair shares a basename) or
// Geomview OFF for planar meshes. Auto picks by file extension and header.
enum class MeshFormat { Auto, TriangleNodeEle, TetgenNodeEle, Off };

struct SimplicialMesh {
    int dim = 2;                            // cell dimension, 2 or 3
    std::vector<Point> vertices;            // z == 0 when dim == 2
    std::vector<std::array<int, 4>> cells;  // dim+1 entries used; [3] == -1 for triangles
    std::vector<std::uint8_t> boundary;     // per-vertex flag, derived from facet incidence

    int corners() const { return dim + 1; }
};

struct VertexStar {
    std::vector<int> cells;      // incident cell ids, ascending
    std::vector<int> neighbors;  // adjacent vertex ids, ascending
    bool interior = false;
};

inline std::array<Point, 4> cell_points(const SimplicialMesh& m, int c) {
    std::array<Point, 4> p{};
    for (int j = 0; j <= m.dim; ++j) p[j] = m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(c)][static_cast<size_t>(j)])];
    return p;
}

// Signed area (dim 2) or signed volume (dim 3) of one cell.
double cell_signed_measure(const SimplicialMesh& m, int c);

// Throws IndexError / TopologyError on out-of-range or repeated cell indices.
void validate_cells(const SimplicialMesh& m);

// Flip cells with negative signed measure so every cell is positively oriented.
void orient_positive(SimplicialMesh& m);

// Rebuild the per-vertex boundary flags from facet incidence counts.
// A facet shared by more than two cells raises TopologyError.
void recompute_boundary(SimplicialMesh& m);

VertexStar vertex_star(const SimplicialMesh& m, int v);

// Bulk adjacency: per-vertex sorted neighbor lists and incident cell lists.
std::vector<std::vector<int>> vertex_neighbors(const SimplicialMesh& m);
std::vector<std::vector<int>> vertex_cells(const SimplicialMesh& m);

// Unique undirected edges, lexicographically sorted.
std::vector<std::array<int, 2>> mesh_edges(const SimplicialMesh& m);

double mean_edge_length(const SimplicialMesh& m);

// For .node/.ele pairs the path may name either file or the bare basename.
// Vertex indices may be 0- or 1-based; the base is detected from the file and
// indices are normalized to 0-based internally. Cells are reoriented to
// positive signed measure and boundary flags are recomputed; stored boundary
// markers that disagree with the recomputed flags produce a warning on stderr.
SimplicialMesh load_mesh(const std::string& path, MeshFormat fmt = MeshFormat::Auto);

// Writes 0-based indices and shortest round-trip decimal coordinates, so
// load(save(m)) reproduces coordinates and connectivity exactly.
void save_mesh(const SimplicialMesh& m, const std::string& path, MeshFormat fmt = MeshFormat::Auto);

} // namespace wcm
