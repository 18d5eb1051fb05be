#include "wcm/mesh.hpp"
#include "wcm/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace wcm {

namespace {

// Whitespace tokenizer over a whole file; '#' starts a comment to end of line.
struct Tokens {
    std::vector<std::string> tok;
    size_t pos = 0;
    std::string file;

    explicit Tokens(const std::string& path) : file(path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path);
        std::string line;
        while (std::getline(in, line)) {
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string t;
            while (ls >> t) tok.push_back(t);
        }
    }

    bool done() const { return pos >= tok.size(); }

    const std::string& next() {
        if (done()) throw ParseError(file + ": unexpected end of file");
        return tok[pos++];
    }

    long integer() {
        const std::string& s = next();
        long v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size())
            throw ParseError(file + ": expected integer, got '" + s + "'");
        return v;
    }

    double real() {
        const std::string& s = next();
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size())
            throw ParseError(file + ": expected number, got '" + s + "'");
        return v;
    }
};

std::string lower_ext(const std::string& path) {
    const size_t dot = path.find_last_of('.');
    const size_t slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return "";
    std::string e = path.substr(dot);
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    return e;
}

std::string strip_ext(const std::string& path) {
    const std::string e = lower_ext(path);
    if (e == ".node" || e == ".ele") return path.substr(0, path.size() - e.size());
    return path;
}

void append_number(std::string& out, double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

void append_number(std::string& out, long v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

SimplicialMesh load_node_ele(const std::string& base) {
    SimplicialMesh m;

    Tokens node(base + ".node");
    const long nv = node.integer();
    const long dim = node.integer();
    const long nattr = node.integer();
    const long nmark = node.integer();
    if (nv < 1) throw ParseError(base + ".node: vertex count must be positive");
    if (dim != 2 && dim != 3) throw ParseError(base + ".node: dimension must be 2 or 3");
    m.dim = static_cast<int>(dim);

    long node_base = 0;
    std::vector<int> file_markers;
    for (long i = 0; i < nv; ++i) {
        const long idx = node.integer();
        if (i == 0) {
            if (idx != 0 && idx != 1)
                throw ParseError(base + ".node: first vertex index must be 0 or 1");
            node_base = idx;
        }
        Point p;
        p.x = node.real();
        p.y = node.real();
        if (dim == 3) p.z = node.real();
        for (long a = 0; a < nattr; ++a) node.real();
        int marker = 0;
        for (long k = 0; k < nmark; ++k) {
            const long v = node.integer();
            if (k == 0) marker = static_cast<int>(v);
        }
        m.vertices.push_back(p);
        file_markers.push_back(marker);
    }

    Tokens ele(base + ".ele");
    const long nc = ele.integer();
    const long corners = ele.integer();
    const long cattr = ele.integer();
    if (nc < 1) throw ParseError(base + ".ele: cell count must be positive");
    if (corners != dim + 1)
        throw ParseError(base + ".ele: expected " + std::to_string(dim + 1) + " corners per cell");
    for (long i = 0; i < nc; ++i) {
        ele.integer(); // cell id, numbering follows the .node file
        std::array<int, 4> cell{-1, -1, -1, -1};
        for (long j = 0; j < corners; ++j) {
            const long ref = ele.integer() - node_base;
            if (ref < 0 || ref >= nv)
                throw IndexError(base + ".ele: vertex reference out of range");
            cell[static_cast<size_t>(j)] = static_cast<int>(ref);
        }
        for (long a = 0; a < cattr; ++a) ele.real();
        m.cells.push_back(cell);
    }

    validate_cells(m);
    orient_positive(m);
    recompute_boundary(m);

    if (nmark > 0) {
        long mismatches = 0;
        for (long i = 0; i < nv; ++i) {
            const bool marked = file_markers[static_cast<size_t>(i)] != 0;
            if (marked != static_cast<bool>(m.boundary[static_cast<size_t>(i)])) ++mismatches;
        }
        if (mismatches > 0)
            std::cerr << "warning: " << base << ".node: " << mismatches
                      << " boundary markers disagree with recomputed facet incidence\n";
    }
    return m;
}

SimplicialMesh load_off(const std::string& path) {
    Tokens t(path);
    if (t.next() != "OFF") throw ParseError(path + ": missing OFF header");
    const long nv = t.integer();
    const long nf = t.integer();
    t.integer(); // edge count, ignored
    if (nv < 1 || nf < 1) throw ParseError(path + ": counts must be positive");

    SimplicialMesh m;
    m.dim = 2;
    bool nonzero_z = false;
    for (long i = 0; i < nv; ++i) {
        Point p;
        p.x = t.real();
        p.y = t.real();
        const double z = t.real();
        if (z != 0.0) nonzero_z = true;
        m.vertices.push_back(p);
    }
    if (nonzero_z)
        std::cerr << "warning: " << path << ": nonzero z coordinates dropped (planar mesh)\n";
    for (long i = 0; i < nf; ++i) {
        const long sz = t.integer();
        if (sz != 3) throw ParseError(path + ": only triangular faces are supported");
        std::array<int, 4> cell{-1, -1, -1, -1};
        for (int j = 0; j < 3; ++j) {
            const long ref = t.integer();
            if (ref < 0 || ref >= nv) throw IndexError(path + ": vertex reference out of range");
            cell[static_cast<size_t>(j)] = static_cast<int>(ref);
        }
        m.cells.push_back(cell);
    }

    validate_cells(m);
    orient_positive(m);
    recompute_boundary(m);
    return m;
}

void save_node_ele(const SimplicialMesh& m, const std::string& base) {
    std::string node;
    append_number(node, static_cast<long>(m.vertices.size()));
    node += ' ';
    append_number(node, static_cast<long>(m.dim));
    node += " 0 1\n";
    for (size_t i = 0; i < m.vertices.size(); ++i) {
        append_number(node, static_cast<long>(i));
        node += ' ';
        append_number(node, m.vertices[i].x);
        node += ' ';
        append_number(node, m.vertices[i].y);
        if (m.dim == 3) {
            node += ' ';
            append_number(node, m.vertices[i].z);
        }
        node += ' ';
        append_number(node, static_cast<long>(m.boundary.size() == m.vertices.size() ? m.boundary[i] : 0));
        node += '\n';
    }
    write_file(base + ".node", node);

    std::string ele;
    append_number(ele, static_cast<long>(m.cells.size()));
    ele += ' ';
    append_number(ele, static_cast<long>(m.corners()));
    ele += " 0\n";
    for (size_t i = 0; i < m.cells.size(); ++i) {
        append_number(ele, static_cast<long>(i));
        for (int j = 0; j < m.corners(); ++j) {
            ele += ' ';
            append_number(ele, static_cast<long>(m.cells[i][static_cast<size_t>(j)]));
        }
        ele += '\n';
    }
    write_file(base + ".ele", ele);
}

void save_off(const SimplicialMesh& m, const std::string& path) {
    if (m.dim != 2) throw IoError("OFF output is only defined for planar meshes");
    std::string out = "OFF\n";
    append_number(out, static_cast<long>(m.vertices.size()));
    out += ' ';
    append_number(out, static_cast<long>(m.cells.size()));
    out += " 0\n";
    for (const Point& p : m.vertices) {
        append_number(out, p.x);
        out += ' ';
        append_number(out, p.y);
        out += " 0\n";
    }
    for (const auto& c : m.cells) {
        out += '3';
        for (int j = 0; j < 3; ++j) {
            out += ' ';
            append_number(out, static_cast<long>(c[static_cast<size_t>(j)]));
        }
        out += '\n';
    }
    write_file(path, out);
}

} // namespace

double cell_signed_measure(const SimplicialMesh& m, int c) {
    const auto p = cell_points(m, c);
    if (m.dim == 2) return 0.5 * signed_area2(p[0], p[1], p[2]);
    return signed_volume6(p[0], p[1], p[2], p[3]) / 6.0;
}

void validate_cells(const SimplicialMesh& m) {
    const int n = static_cast<int>(m.vertices.size());
    for (size_t c = 0; c < m.cells.size(); ++c) {
        for (int j = 0; j <= m.dim; ++j) {
            const int v = m.cells[c][static_cast<size_t>(j)];
            if (v < 0 || v >= n) throw IndexError("cell vertex index out of range");
            for (int k = j + 1; k <= m.dim; ++k)
                if (v == m.cells[c][static_cast<size_t>(k)])
                    throw TopologyError("repeated vertex index within a cell");
        }
    }
}

void orient_positive(SimplicialMesh& m) {
    for (size_t c = 0; c < m.cells.size(); ++c) {
        if (cell_signed_measure(m, static_cast<int>(c)) < 0.0)
            std::swap(m.cells[c][1], m.cells[c][2]);
    }
}

void recompute_boundary(SimplicialMesh& m) {
    std::map<std::array<int, 3>, int> count;
    const int fv = m.dim; // vertices per facet
    for (const auto& cell : m.cells) {
        for (int skip = 0; skip <= m.dim; ++skip) {
            std::array<int, 3> f{-1, -1, -1};
            int k = 0;
            for (int j = 0; j <= m.dim; ++j)
                if (j != skip) f[static_cast<size_t>(k++)] = cell[static_cast<size_t>(j)];
            std::sort(f.begin(), f.begin() + fv);
            if (++count[f] > 2) throw TopologyError("facet shared by more than two cells");
        }
    }
    m.boundary.assign(m.vertices.size(), 0);
    for (const auto& [f, c] : count) {
        if (c != 1) continue;
        for (int j = 0; j < fv; ++j) m.boundary[static_cast<size_t>(f[static_cast<size_t>(j)])] = 1;
    }
}

VertexStar vertex_star(const SimplicialMesh& m, int v) {
    VertexStar s;
    std::set<int> nb;
    for (size_t c = 0; c < m.cells.size(); ++c) {
        bool has = false;
        for (int j = 0; j <= m.dim; ++j) has = has || m.cells[c][static_cast<size_t>(j)] == v;
        if (!has) continue;
        s.cells.push_back(static_cast<int>(c));
        for (int j = 0; j <= m.dim; ++j)
            if (m.cells[c][static_cast<size_t>(j)] != v) nb.insert(m.cells[c][static_cast<size_t>(j)]);
    }
    s.neighbors.assign(nb.begin(), nb.end());
    s.interior = !m.boundary.empty() && !m.boundary[static_cast<size_t>(v)];
    return s;
}

std::vector<std::vector<int>> vertex_neighbors(const SimplicialMesh& m) {
    std::vector<std::set<int>> nb(m.vertices.size());
    for (const auto& cell : m.cells)
        for (int a = 0; a <= m.dim; ++a)
            for (int b = 0; b <= m.dim; ++b)
                if (a != b) nb[static_cast<size_t>(cell[static_cast<size_t>(a)])].insert(cell[static_cast<size_t>(b)]);
    std::vector<std::vector<int>> out(m.vertices.size());
    for (size_t v = 0; v < nb.size(); ++v) out[v].assign(nb[v].begin(), nb[v].end());
    return out;
}

std::vector<std::vector<int>> vertex_cells(const SimplicialMesh& m) {
    std::vector<std::vector<int>> out(m.vertices.size());
    for (size_t c = 0; c < m.cells.size(); ++c)
        for (int j = 0; j <= m.dim; ++j)
            out[static_cast<size_t>(m.cells[c][static_cast<size_t>(j)])].push_back(static_cast<int>(c));
    return out;
}

std::vector<std::array<int, 2>> mesh_edges(const SimplicialMesh& m) {
    std::set<std::array<int, 2>> edges;
    for (const auto& cell : m.cells)
        for (int a = 0; a <= m.dim; ++a)
            for (int b = a + 1; b <= m.dim; ++b) {
                const int u = cell[static_cast<size_t>(a)];
                const int v = cell[static_cast<size_t>(b)];
                edges.insert({std::min(u, v), std::max(u, v)});
            }
    return {edges.begin(), edges.end()};
}

double mean_edge_length(const SimplicialMesh& m) {
    const auto edges = mesh_edges(m);
    if (edges.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : edges)
        sum += dist(m.vertices[static_cast<size_t>(e[0])], m.vertices[static_cast<size_t>(e[1])]);
    return sum / static_cast<double>(edges.size());
}

SimplicialMesh load_mesh(const std::string& path, MeshFormat fmt) {
    if (fmt == MeshFormat::Auto) {
        const std::string ext = lower_ext(path);
        if (ext == ".off") {
            fmt = MeshFormat::Off;
        } else if (ext == ".node" || ext == ".ele") {
            fmt = MeshFormat::TriangleNodeEle;
        } else {
            // No telling extension; sniff the header.
            std::ifstream probe(path);
            std::string first;
            if (probe) probe >> first;
            fmt = first == "OFF" ? MeshFormat::Off : MeshFormat::TriangleNodeEle;
        }
    }
    if (fmt == MeshFormat::Off) return load_off(path);
    return load_node_ele(strip_ext(path));
}

void save_mesh(const SimplicialMesh& m, const std::string& path, MeshFormat fmt) {
    if (fmt == MeshFormat::Auto)
        fmt = lower_ext(path) == ".off" ? MeshFormat::Off : MeshFormat::TriangleNodeEle;
    if (fmt == MeshFormat::Off)
        save_off(m, path);
    else
        save_node_ele(m, strip_ext(path));
}

} // namespace wcm
