#include "wcm/optimize.hpp"
#include "wcm/errors.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>

#include <json.hpp>

namespace wcm {

namespace {

struct Workspace {
    std::vector<int> free;                    // free vertex ids
    std::vector<std::vector<int>> star;       // incident cells per free vertex
    std::vector<std::vector<int>> neighbors;  // vertex adjacency per free vertex
    bool local_sums = false;                  // family is a plain sum over cells
};

Workspace make_workspace(const SimplicialMesh& m, const EnergyConfig& cfg, std::span<const int> free) {
    Workspace w;
    if (free.empty()) {
        w.free = interior_vertices(m);
    } else {
        w.free.assign(free.begin(), free.end());
        for (int v : w.free) {
            if (v < 0 || v >= static_cast<int>(m.vertices.size()))
                throw IndexError("free vertex id out of range");
            if (m.boundary[static_cast<size_t>(v)])
                throw Error("free vertices must be interior");
        }
    }
    const auto cells = vertex_cells(m);
    const auto nb = vertex_neighbors(m);
    for (int v : w.free) {
        w.star.push_back(cells[static_cast<size_t>(v)]);
        w.neighbors.push_back(nb[static_cast<size_t>(v)]);
    }
    w.local_sums = cfg.family == EnergyFamily::Ep || cfg.family == EnergyFamily::EpBarrier;
    return w;
}

double star_energy(const SimplicialMesh& m, const EnergyConfig& cfg, const std::vector<int>& cells) {
    if (cfg.family == EnergyFamily::Ep) {
        double sum = 0.0;
        for (int c : cells) sum += cell_Ep(m, c, cfg.p);
        return sum;
    }
    double ep = 0.0, imr = 0.0;
    for (int c : cells) {
        ep += cell_Ep(m, c, cfg.p);
        imr += cell_imr(m, c);
    }
    return cfg.barrier_weight * ep + imr;
}

double mean_incident_edge(const SimplicialMesh& m, int v, const std::vector<int>& neighbors) {
    double sum = 0.0;
    for (int u : neighbors) sum += dist(m.vertices[static_cast<size_t>(v)], m.vertices[static_cast<size_t>(u)]);
    return sum / static_cast<double>(neighbors.size());
}

double coord(const Point& p, int axis) {
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

void set_coord(Point& p, int axis, double v) {
    (axis == 0 ? p.x : (axis == 1 ? p.y : p.z)) = v;
}

std::vector<double> gradient(SimplicialMesh& m, const EnergyConfig& cfg, const Workspace& w,
                             double fd_step_scale) {
    const int axes = m.dim;
    std::vector<double> g(w.free.size() * static_cast<size_t>(axes), 0.0);
    for (size_t i = 0; i < w.free.size(); ++i) {
        const int v = w.free[i];
        const double h = fd_step_scale * mean_incident_edge(m, v, w.neighbors[i]);
        for (int axis = 0; axis < axes; ++axis) {
            Point& p = m.vertices[static_cast<size_t>(v)];
            const double saved = coord(p, axis);
            set_coord(p, axis, saved + h);
            const double ep = w.local_sums ? star_energy(m, cfg, w.star[i]) : mesh_energy(m, cfg);
            set_coord(p, axis, saved - h);
            const double em = w.local_sums ? star_energy(m, cfg, w.star[i]) : mesh_energy(m, cfg);
            set_coord(p, axis, saved);
            g[i * static_cast<size_t>(axes) + static_cast<size_t>(axis)] = (ep - em) / (2.0 * h);
        }
    }
    return g;
}

void apply_offset(SimplicialMesh& m, const Workspace& w, const std::vector<double>& base,
                  const std::vector<double>& d, double alpha) {
    const int axes = m.dim;
    for (size_t i = 0; i < w.free.size(); ++i) {
        Point& p = m.vertices[static_cast<size_t>(w.free[i])];
        for (int axis = 0; axis < axes; ++axis) {
            const size_t k = i * static_cast<size_t>(axes) + static_cast<size_t>(axis);
            set_coord(p, axis, base[k] + alpha * d[k]);
        }
    }
}

std::vector<double> collect_coords(const SimplicialMesh& m, const Workspace& w) {
    const int axes = m.dim;
    std::vector<double> x(w.free.size() * static_cast<size_t>(axes));
    for (size_t i = 0; i < w.free.size(); ++i)
        for (int axis = 0; axis < axes; ++axis)
            x[i * static_cast<size_t>(axes) + static_cast<size_t>(axis)] =
                coord(m.vertices[static_cast<size_t>(w.free[i])], axis);
    return x;
}

double dot_v(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void append_number(std::string& out, double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

} // namespace

std::vector<int> interior_vertices(const SimplicialMesh& m) {
    std::vector<int> out;
    for (size_t v = 0; v < m.vertices.size(); ++v)
        if (!m.boundary[v]) out.push_back(static_cast<int>(v));
    return out;
}

std::vector<Stage> parse_schedule(const std::string& text) {
    std::vector<Stage> stages;
    if (text.find_first_not_of(" \t") == std::string::npos) return stages;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        const size_t a = item.find_first_not_of(" \t");
        if (a == std::string::npos) throw ScheduleError("empty schedule stage");
        const size_t b = item.find_last_not_of(" \t");
        item = item.substr(a, b - a + 1);

        Stage st;
        size_t i = 0;
        if (item[i] == '~') {
            st.config.family = EnergyFamily::EpBarrier;
            ++i;
        }
        if (i >= item.size() || item[i] != 'E') throw ScheduleError("expected E<p>:<iterations>, got '" + item + "'");
        ++i;
        const size_t colon = item.find(':', i);
        if (colon == std::string::npos) throw ScheduleError("missing ':' in stage '" + item + "'");
        const std::string ptext = item.substr(i, colon - i);
        const std::string itext = item.substr(colon + 1);
        int p = 0, iters = 0;
        auto rp = std::from_chars(ptext.data(), ptext.data() + ptext.size(), p);
        auto ri = std::from_chars(itext.data(), itext.data() + itext.size(), iters);
        if (rp.ec != std::errc() || rp.ptr != ptext.data() + ptext.size() || p < 1)
            throw ScheduleError("bad exponent in stage '" + item + "'");
        if (ri.ec != std::errc() || ri.ptr != itext.data() + itext.size() || iters < 0)
            throw ScheduleError("bad iteration count in stage '" + item + "'");
        st.config.p = p;
        st.iterations = iters;
        stages.push_back(st);
        if (comma == text.size()) break;
    }
    return stages;
}

std::vector<double> numerical_gradient(const SimplicialMesh& m, const EnergyConfig& cfg,
                                       std::span<const int> free, double fd_step_scale) {
    SimplicialMesh scratch = m;
    const Workspace w = make_workspace(scratch, cfg, free);
    return gradient(scratch, cfg, w, fd_step_scale);
}

OptimizationTrace optimize(SimplicialMesh& m, const EnergyConfig& cfg, int iterations,
                           const OptimizeSettings& settings) {
    const auto t0 = std::chrono::steady_clock::now();
    OptimizationTrace trace;
    trace.stage = energy_name(cfg);

    const Workspace w = make_workspace(m, cfg, settings.free_vertices);
    const size_t ncoord = w.free.size() * static_cast<size_t>(m.dim);
    const double mean_len = mean_edge_length(m);
    const int restart = settings.restart_interval > 0 ? settings.restart_interval
                                                      : static_cast<int>(ncoord);

    double energy = mesh_energy(m, cfg);
    std::vector<double> g = gradient(m, cfg, w, settings.fd_step_scale);
    trace.rows.push_back({0, energy, std::sqrt(dot_v(g, g)), 0.0, count_bad_cells(m)});
    if (ncoord == 0 || iterations <= 0) {
        trace.stopped_early = ncoord == 0; // nothing to move
        trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return trace;
    }

    std::vector<double> g_prev, d_prev;
    double alpha_prev = 0.0;
    bool have_step = false;

    for (int iter = 1; iter <= iterations; ++iter) {
        if (iter > 1) g = gradient(m, cfg, w, settings.fd_step_scale);
        const double gg = dot_v(g, g);
        const double gnorm = std::sqrt(gg);
        if (gnorm == 0.0) {
            trace.stopped_early = true;
            break;
        }

        std::vector<double> d(ncoord);
        double beta = 0.0;
        if (!d_prev.empty() && (iter - 1) % restart != 0) {
            double num = 0.0, den = 0.0;
            for (size_t k = 0; k < ncoord; ++k) {
                num += g[k] * (g[k] - g_prev[k]);
                den += g_prev[k] * g_prev[k];
            }
            if (den > 0.0) beta = std::max(0.0, num / den);
        }
        for (size_t k = 0; k < ncoord; ++k) d[k] = -g[k] + beta * (d_prev.empty() ? 0.0 : d_prev[k]);
        double slope = dot_v(d, g);
        if (slope >= 0.0) {
            for (size_t k = 0; k < ncoord; ++k) d[k] = -g[k];
            slope = -gg;
        }
        const double dnorm = std::sqrt(dot_v(d, d));

        const std::vector<double> base = collect_coords(m, w);
        // Seed the search one shrink factor above the last accepted step so
        // the step size can recover after a cautious stretch.
        double alpha = have_step ? alpha_prev / settings.backtrack
                                 : settings.first_step_scale * mean_len / gnorm;
        bool accepted = false;
        while (alpha * dnorm >= settings.min_step_scale * mean_len) {
            apply_offset(m, w, base, d, alpha);
            const double trial = mesh_energy(m, cfg);
            if (trial <= energy + settings.armijo_c1 * alpha * slope && trial < energy) {
                accepted = true;
                energy = trial;
                break;
            }
            alpha *= settings.backtrack;
        }
        if (!accepted) {
            apply_offset(m, w, base, d, 0.0);
            trace.stopped_early = true;
            break;
        }
        alpha_prev = alpha;
        have_step = true;
        trace.rows.push_back({iter, energy, gnorm, alpha * dnorm, count_bad_cells(m)});
        g_prev = g;
        d_prev = std::move(d);
    }

    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return trace;
}

std::vector<OptimizationTrace> optimize_schedule(SimplicialMesh& m, std::span<const Stage> stages,
                                                 const OptimizeSettings& settings) {
    std::vector<OptimizationTrace> traces;
    for (const Stage& st : stages) traces.push_back(optimize(m, st.config, st.iterations, settings));
    return traces;
}

std::string trace_csv(std::span<const OptimizationTrace> traces) {
    std::string out = "iter,energy,grad_norm,step,bad_count\n";
    int offset = 0;
    bool first_stage = true;
    for (const auto& t : traces) {
        for (size_t i = 0; i < t.rows.size(); ++i) {
            if (!first_stage && i == 0) continue; // stage start repeats the previous mesh
            const TraceRow& r = t.rows[i];
            out += std::to_string(offset + r.iter);
            out += ',';
            append_number(out, r.energy);
            out += ',';
            append_number(out, r.grad_norm);
            out += ',';
            append_number(out, r.step);
            out += ',';
            out += std::to_string(r.bad_count);
            out += '\n';
        }
        offset += t.rows.empty() ? 0 : t.rows.back().iter;
        first_stage = false;
    }
    return out;
}

std::string trace_json(std::span<const OptimizationTrace> traces) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& t : traces) {
        nlohmann::json rows = nlohmann::json::array();
        for (const TraceRow& r : t.rows)
            rows.push_back({{"iter", r.iter},
                            {"energy", r.energy},
                            {"grad_norm", r.grad_norm},
                            {"step", r.step},
                            {"bad_count", r.bad_count}});
        stages.push_back({{"stage", t.stage},
                          {"stopped_early", t.stopped_early},
                          {"wall_seconds", t.wall_seconds},
                          {"rows", rows}});
    }
    return stages.dump(2) + "\n";
}

} // namespace wcm
