#include "wcm/quality.hpp"
#include "wcm/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace wcm {

namespace {

// |x|^p by repeated squaring; deterministic and exact for the even powers
// used by the optimizer schedules.
double abs_ipow(double x, int p) {
    double b = std::abs(x);
    double r = 1.0;
    while (p > 0) {
        if (p & 1) r *= b;
        b *= b;
        p >>= 1;
    }
    return r;
}

std::span<const Point> cell_span(const std::array<Point, 4>& p, int dim) {
    return {p.data(), static_cast<size_t>(dim + 1)};
}

void require_planar(const SimplicialMesh& m, const char* what) {
    if (m.dim != 2) throw Error(std::string(what) + " is only defined for planar meshes");
}

void cell_angles(const SimplicialMesh& m, int c, std::array<double, 3>& out) {
    const auto p = cell_points(m, c);
    out = vertex_angles(p[0], p[1], p[2]);
}

void append_number(std::string& out, double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

} // namespace

std::string energy_name(const EnergyConfig& cfg) {
    switch (cfg.family) {
        case EnergyFamily::Ep: return "E" + std::to_string(cfg.p);
        case EnergyFamily::EpBarrier: return "~E" + std::to_string(cfg.p);
        case EnergyFamily::Einfty: return "Einf";
        case EnergyFamily::Ecos: return "Ecos";
        case EnergyFamily::Emax: return "Emax";
        case EnergyFamily::Emin: return "Emin";
    }
    return "?";
}

std::array<double, 4> height_ratios(std::span<const Point> pts) {
    const SimplexGeometry g = simplex_geometry(pts);
    std::array<double, 4> hr{};
    for (size_t i = 0; i < pts.size(); ++i) hr[i] = g.heights[i] / g.circumradius;
    return hr;
}

double energy_fn(std::span<const Point> pts, double target) {
    const auto hr = height_ratios(pts);
    double worst = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, std::abs(hr[i] - target));
    return worst;
}

double cell_Ep(const SimplicialMesh& m, int c, int p) {
    const auto pts = cell_points(m, c);
    const auto hr = height_ratios(cell_span(pts, m.dim));
    double sum = 0.0;
    for (int i = 0; i <= m.dim; ++i) sum += abs_ipow(2.0 * hr[static_cast<size_t>(i)] - 1.0, p);
    return sum;
}

double energy_Ep(const SimplicialMesh& m, int p) {
    double sum = 0.0;
    for (size_t c = 0; c < m.cells.size(); ++c) sum += cell_Ep(m, static_cast<int>(c), p);
    return sum;
}

double energy_Einfty(const SimplicialMesh& m) {
    double worst = 0.0;
    for (size_t c = 0; c < m.cells.size(); ++c) {
        const auto pts = cell_points(m, static_cast<int>(c));
        const auto hr = height_ratios(cell_span(pts, m.dim));
        for (int i = 0; i <= m.dim; ++i) worst = std::max(worst, std::abs(hr[static_cast<size_t>(i)] - 0.5));
    }
    return worst;
}

double cell_imr(const SimplicialMesh& m, int c) {
    // Reference element: regular simplex with unit edges.
    constexpr double s3h = 0.8660254037844386;  // sqrt(3)/2
    constexpr double s36 = 0.28867513459481287; // sqrt(3)/6
    constexpr double s63 = 0.816496580927726;   // sqrt(6)/3
    const auto p = cell_points(m, c);
    if (m.dim == 2) {
        const Vec3 e1 = p[1] - p[0];
        const Vec3 e2 = p[2] - p[0];
        const double det = (e1.x * e2.y - e1.y * e2.x) / s3h;
        if (det <= 0.0) return kImrSentinel;
        const Vec3 a2 = (e2 - e1 * 0.5) / s3h;
        const double frob2 = norm2(e1) + norm2(a2);
        return frob2 / (2.0 * det);
    }
    const Vec3 e1 = p[1] - p[0];
    const Vec3 e2 = p[2] - p[0];
    const Vec3 e3 = p[3] - p[0];
    const Vec3 a2 = (e2 - e1 * 0.5) / s3h;
    const Vec3 a3 = (e3 - e1 * 0.5 - a2 * s36) / s63;
    const double det = dot(e1, cross(a2, a3));
    if (det <= 0.0) return kImrSentinel;
    const double frob2 = norm2(e1) + norm2(a2) + norm2(a3);
    return frob2 / (3.0 * std::cbrt(det * det));
}

double energy_imr(const SimplicialMesh& m) {
    double sum = 0.0;
    for (size_t c = 0; c < m.cells.size(); ++c) sum += cell_imr(m, static_cast<int>(c));
    return sum;
}

double energy_combined(const SimplicialMesh& m, int p, double barrier_weight) {
    return barrier_weight * energy_Ep(m, p) + energy_imr(m);
}

double energy_cos(const SimplicialMesh& m) {
    require_planar(m, "Ecos");
    double worst = 0.0;
    std::array<double, 3> ang{};
    for (size_t c = 0; c < m.cells.size(); ++c) {
        cell_angles(m, static_cast<int>(c), ang);
        for (double t : ang) worst = std::max(worst, std::abs(2.0 * std::cos(t) - 1.0));
    }
    return worst;
}

double energy_max_angle(const SimplicialMesh& m) {
    require_planar(m, "Emax");
    double worst = 0.0;
    std::array<double, 3> ang{};
    for (size_t c = 0; c < m.cells.size(); ++c) {
        cell_angles(m, static_cast<int>(c), ang);
        for (double t : ang) worst = std::max(worst, t);
    }
    return worst;
}

double energy_min_angle(const SimplicialMesh& m) {
    require_planar(m, "Emin");
    double best = 3.141592653589793;
    std::array<double, 3> ang{};
    for (size_t c = 0; c < m.cells.size(); ++c) {
        cell_angles(m, static_cast<int>(c), ang);
        for (double t : ang) best = std::min(best, t);
    }
    return best;
}

double mesh_energy(const SimplicialMesh& m, const EnergyConfig& cfg) {
    switch (cfg.family) {
        case EnergyFamily::Ep: return energy_Ep(m, cfg.p);
        case EnergyFamily::EpBarrier: return energy_combined(m, cfg.p, cfg.barrier_weight);
        case EnergyFamily::Einfty: return energy_Einfty(m);
        case EnergyFamily::Ecos: return energy_cos(m);
        case EnergyFamily::Emax: return energy_max_angle(m);
        case EnergyFamily::Emin: return energy_min_angle(m);
    }
    throw Error("unknown energy family");
}

std::vector<int> bad_cells(const SimplicialMesh& m) {
    std::vector<int> out;
    for (size_t c = 0; c < m.cells.size(); ++c) {
        const auto p = cell_points(m, static_cast<int>(c));
        const auto span = cell_span(p, m.dim);
        if (is_degenerate(span) || !is_k_well_centered(span, m.dim)) out.push_back(static_cast<int>(c));
    }
    return out;
}

int count_bad_cells(const SimplicialMesh& m) {
    return static_cast<int>(bad_cells(m).size());
}

int count_inverted_cells(const SimplicialMesh& m) {
    int n = 0;
    for (size_t c = 0; c < m.cells.size(); ++c)
        if (cell_signed_measure(m, static_cast<int>(c)) <= 0.0) ++n;
    return n;
}

double min_height_ratio(const SimplicialMesh& m) {
    double worst = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < m.cells.size(); ++c) {
        const auto pts = cell_points(m, static_cast<int>(c));
        const auto hr = height_ratios(cell_span(pts, m.dim));
        for (int i = 0; i <= m.dim; ++i) worst = std::min(worst, hr[static_cast<size_t>(i)]);
    }
    return worst;
}

QualityReport quality_report(const SimplicialMesh& m, const EnergyConfig& cfg, int bins) {
    QualityReport r;
    r.dim = m.dim;
    r.vertex_count = static_cast<int>(m.vertices.size());
    r.cell_count = static_cast<int>(m.cells.size());
    r.bad_count = count_bad_cells(m);
    r.energy = mesh_energy(m, cfg);
    r.energy_label = energy_name(cfg);

    std::vector<double> data;
    if (m.dim == 2) {
        constexpr double deg = 57.29577951308232; // 180/pi
        std::array<double, 3> ang{};
        for (size_t c = 0; c < m.cells.size(); ++c) {
            cell_angles(m, static_cast<int>(c), ang);
            for (double t : ang) data.push_back(t * deg);
        }
        r.histogram.lo = 0.0;
        r.histogram.hi = 180.0;
        if (bins <= 0) bins = 90;
    } else {
        for (size_t c = 0; c < m.cells.size(); ++c) {
            const auto pts = cell_points(m, static_cast<int>(c));
            const auto hr = height_ratios(cell_span(pts, m.dim));
            for (int i = 0; i <= m.dim; ++i) data.push_back(hr[static_cast<size_t>(i)]);
        }
        r.histogram.lo = -1.0;
        r.histogram.hi = 1.0;
        if (bins <= 0) bins = 100;
    }

    r.histogram.counts.assign(static_cast<size_t>(bins), 0);
    double sum = 0.0;
    r.min_value = std::numeric_limits<double>::infinity();
    r.max_value = -std::numeric_limits<double>::infinity();
    const double width = (r.histogram.hi - r.histogram.lo) / bins;
    for (double v : data) {
        sum += v;
        r.min_value = std::min(r.min_value, v);
        r.max_value = std::max(r.max_value, v);
        int b = static_cast<int>(std::floor((v - r.histogram.lo) / width));
        b = std::clamp(b, 0, bins - 1);
        ++r.histogram.counts[static_cast<size_t>(b)];
    }
    const double n = static_cast<double>(data.size());
    r.mean = sum / n;
    double ss = 0.0;
    for (double v : data) ss += (v - r.mean) * (v - r.mean);
    r.stddev = std::sqrt(ss / n);
    return r;
}

std::string report_json(const QualityReport& r) {
    nlohmann::json j;
    j["dim"] = r.dim;
    j["vertices"] = r.vertex_count;
    j["cells"] = r.cell_count;
    j["bad_cells"] = r.bad_count;
    j["min"] = r.min_value;
    j["max"] = r.max_value;
    j["mean"] = r.mean;
    j["stddev"] = r.stddev;
    j["energy"] = r.energy;
    j["energy_label"] = r.energy_label;
    j["histogram"]["lo"] = r.histogram.lo;
    j["histogram"]["hi"] = r.histogram.hi;
    j["histogram"]["counts"] = r.histogram.counts;
    return j.dump(2) + "\n";
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "bin_low,bin_high,count\n";
    const int bins = static_cast<int>(h.counts.size());
    const double width = (h.hi - h.lo) / bins;
    for (int i = 0; i < bins; ++i) {
        append_number(out, h.lo + i * width);
        out += ',';
        append_number(out, i + 1 == bins ? h.hi : h.lo + (i + 1) * width);
        out += ',';
        out += std::to_string(h.counts[static_cast<size_t>(i)]);
        out += '\n';
    }
    return out;
}

} // namespace wcm
