#include "wcm/cli.hpp"
#include "wcm/connectivity.hpp"
#include "wcm/errors.hpp"
#include "wcm/geometry.hpp"
#include "wcm/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <thread>

#include <json.hpp>

namespace wcm {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kTwoPi = 6.283185307179586;
constexpr double kAgreementMargin = 1e-8; // x face circumradius

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

std::string stem_of(const std::string& path) {
    const size_t slash = path.find_last_of('/');
    const size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

// One face check by both tests. Returns false on disagreement outside the
// agreement margin, which the caller treats as an internal error.
bool check_face(std::span<const Point> face, bool& passed) {
    const int k = static_cast<int>(face.size()) - 1;
    const bool bary = is_k_well_centered(face, k);
    bool ball = false;
    double margin = 0.0;
    bool ball_defined = true;
    try {
        ball = equatorial_ball_test(face, &margin);
    } catch (const DegenerateSimplex&) {
        ball_defined = false;
    }
    if (!ball_defined) {
        passed = false; // degenerate face is never well-centered
        return true;
    }
    if (bary != ball && margin > kAgreementMargin * circumradius(face)) return false;
    passed = bary && ball;
    return true;
}

bool check_cell_dim(const SimplicialMesh& m, int c, int k, bool& passed) {
    const auto pts = cell_points(m, c);
    const int n = m.dim;
    passed = true;
    const int total = 1 << (n + 1);
    for (int mask = 0; mask < total; ++mask) {
        if (std::popcount(static_cast<unsigned>(mask)) != k + 1) continue;
        Point face[4];
        int fc = 0;
        for (int j = 0; j <= n; ++j)
            if (mask & (1 << j)) face[fc++] = pts[static_cast<size_t>(j)];
        bool face_ok = false;
        if (!check_face(std::span<const Point>(face, static_cast<size_t>(fc)), face_ok)) return false;
        if (!face_ok) passed = false;
    }
    return true;
}

// --- randomized verification support ---------------------------------------

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t s) : eng(s) {}
    double u() { return (eng() >> 11) * 0x1.0p-53; }
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t idx, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (idx + 1) + (salt << 17);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<Point> random_simplex(Rng& rng, int n) {
    std::vector<Point> pts(static_cast<size_t>(n) + 1);
    do {
        for (auto& p : pts) {
            p.x = rng.u();
            p.y = rng.u();
            p.z = n == 3 ? rng.u() : 0.0;
        }
    } while (normalized_volume(pts) < 1e-6);
    return pts;
}

int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (hw > 8) hw = 8;
    if (const char* env = std::getenv("WC_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n); fn writes only to its own index slot, so the
// outcome is identical for any thread count.
void run_indexed(int n, const std::function<void(int)>& fn) {
    const int threads = std::min(thread_budget(), std::max(1, n));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct SuiteResult {
    std::string name;
    std::string summary;
    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

void print_suite(const SuiteResult& r) {
    std::cout << (r.passed() ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.summary << "\n";
    size_t shown = 0;
    for (const auto& f : r.failures) {
        if (shown++ == 5) {
            std::cout << "       ... " << r.failures.size() - 5 << " more\n";
            break;
        }
        std::cout << "       " << f << "\n";
    }
}

SuiteResult suite_characterization(std::uint64_t seed, int samples) {
    SuiteResult r{"characterization",
                  "equatorial-ball test agrees with circumcenter containment", {}, };
    std::vector<std::string> msg(static_cast<size_t>(2 * samples));
    std::vector<std::uint8_t> excluded(static_cast<size_t>(2 * samples), 0);
    run_indexed(2 * samples, [&](int i) {
        const int n = i < samples ? 2 : 3;
        Rng rng(mix(seed, static_cast<std::uint64_t>(i), 1));
        const auto pts = random_simplex(rng, n);
        double margin = 0.0;
        const bool ball = equatorial_ball_test(pts, &margin);
        const bool bary = is_k_well_centered(pts, n);
        if (margin <= kAgreementMargin * circumradius(pts)) {
            excluded[static_cast<size_t>(i)] = 1;
            return;
        }
        if (ball != bary)
            msg[static_cast<size_t>(i)] = "sample " + std::to_string(i) + ": tests disagree (n=" +
                                          std::to_string(n) + ")";
    });
    long ex = 0;
    for (auto e : excluded) ex += e;
    for (auto& s : msg)
        if (!s.empty()) r.failures.push_back(std::move(s));
    r.summary += " (" + std::to_string(samples) + " triangles, " + std::to_string(samples) +
                 " tetrahedra, " + std::to_string(ex) + " within margin)";
    return r;
}

SuiteResult suite_identities(std::uint64_t seed, int samples) {
    SuiteResult r{"identities", "height/facet Pythagorean relation and planar cosine relation", {}};
    std::vector<std::string> msg(static_cast<size_t>(2 * samples));
    run_indexed(2 * samples, [&](int i) {
        const int n = i < samples ? 2 : 3;
        Rng rng(mix(seed, static_cast<std::uint64_t>(i), 2));
        const auto pts = random_simplex(rng, n);
        const SimplexGeometry g = simplex_geometry(pts);
        if (g.degenerate) return;
        const double R2 = g.circumradius * g.circumradius;
        for (int v = 0; v <= n; ++v) {
            std::vector<Point> facet;
            for (int j = 0; j <= n; ++j)
                if (j != v) facet.push_back(pts[static_cast<size_t>(j)]);
            const double rf = circumradius(facet);
            const double lhs = g.heights[static_cast<size_t>(v)] * g.heights[static_cast<size_t>(v)] + rf * rf;
            if (std::abs(lhs - R2) > 1e-9 * R2) {
                msg[static_cast<size_t>(i)] = "sample " + std::to_string(i) + ": h^2 + Rf^2 != R^2";
                return;
            }
        }
        if (n == 2) {
            const auto ang = vertex_angles(pts[0], pts[1], pts[2]);
            for (int v = 0; v < 3; ++v) {
                const double hr = g.heights[static_cast<size_t>(v)] / g.circumradius;
                if (std::abs(hr - std::cos(ang[static_cast<size_t>(v)])) >
                    1e-9 * std::max(1.0, std::abs(hr))) {
                    msg[static_cast<size_t>(i)] = "sample " + std::to_string(i) + ": h/R != cos(angle)";
                    return;
                }
            }
        }
    });
    for (auto& s : msg)
        if (!s.empty()) r.failures.push_back(std::move(s));
    r.summary += " (" + std::to_string(2 * samples) + " samples)";
    return r;
}

SuiteResult suite_min_height(std::uint64_t seed, int samples) {
    SuiteResult r{"min-height", "min h/R is at most 1/n; the regular simplex attains it", {}};
    std::vector<std::string> msg(static_cast<size_t>(2 * samples));
    run_indexed(2 * samples, [&](int i) {
        const int n = i < samples ? 2 : 3;
        Rng rng(mix(seed, static_cast<std::uint64_t>(i), 3));
        const auto pts = random_simplex(rng, n);
        const SimplexGeometry g = simplex_geometry(pts);
        if (g.degenerate) return;
        double mn = g.heights[0] / g.circumradius;
        for (int v = 1; v <= n; ++v) mn = std::min(mn, g.heights[static_cast<size_t>(v)] / g.circumradius);
        if (mn > 1.0 / n + 1e-9)
            msg[static_cast<size_t>(i)] = "sample " + std::to_string(i) + ": min h/R = " +
                                          std::to_string(mn) + " > 1/" + std::to_string(n);
    });
    for (auto& s : msg)
        if (!s.empty()) r.failures.push_back(std::move(s));

    const double s3 = std::sqrt(3.0);
    const std::vector<Point> tri{{0, 0, 0}, {1, 0, 0}, {0.5, s3 / 2, 0}};
    const std::vector<Point> tet{
        {0, 0, 0}, {1, 0, 0}, {0.5, s3 / 2, 0}, {0.5, s3 / 6, std::sqrt(6.0) / 3}};
    for (const auto* pts : {&tri, &tet}) {
        const int n = static_cast<int>(pts->size()) - 1;
        const SimplexGeometry g = simplex_geometry(*pts);
        for (int v = 0; v <= n; ++v)
            if (std::abs(g.heights[static_cast<size_t>(v)] / g.circumradius - 1.0 / n) > 1e-12)
                r.failures.push_back("regular simplex n=" + std::to_string(n) +
                                     " does not attain h/R = 1/n");
    }
    r.summary += " (" + std::to_string(2 * samples) + " samples + 2 regular simplices)";
    return r;
}

std::vector<Point> random_point_set(Rng& rng, int count) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Point> pts(static_cast<size_t>(count));
        for (auto& p : pts) p = {rng.u(), rng.u(), 0.0};
        try {
            delaunay_2d(pts);
            return pts;
        } catch (const DegenerateInput&) {
        }
    }
    throw Error("failed to sample a usable planar point set");
}

std::vector<Point> acute_biased_points(Rng& rng) {
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) {
        const double a = kTwoPi * i / 5.0 + 0.2 * (rng.u() - 0.5);
        const double rad = 1.0 + 0.1 * (rng.u() - 0.5);
        pts.push_back({rad * std::cos(a), rad * std::sin(a), 0.0});
    }
    pts.push_back({0.1 * (rng.u() - 0.5), 0.1 * (rng.u() - 0.5), 0.0});
    return pts;
}

SimplicialMesh tri_mesh(std::span<const Point> pts, const Triangulation& t) {
    SimplicialMesh m;
    m.dim = 2;
    m.vertices.assign(pts.begin(), pts.end());
    for (const auto& c : t) m.cells.push_back({c[0], c[1], c[2], -1});
    orient_positive(m);
    recompute_boundary(m);
    return m;
}

bool triangulation_well_centered(std::span<const Point> pts, const Triangulation& t) {
    for (const auto& c : t) {
        const Point face[3] = {pts[static_cast<size_t>(c[0])], pts[static_cast<size_t>(c[1])],
                               pts[static_cast<size_t>(c[2])]};
        if (!is_k_well_centered(face, 2)) return false;
    }
    return true;
}

SuiteResult suite_delaunay(std::uint64_t seed, int sets) {
    SuiteResult r{"delaunay", "well-centered planar triangulations are locally Delaunay", {}};
    std::vector<std::string> msg(static_cast<size_t>(sets));
    std::vector<long> checked(static_cast<size_t>(sets), 0);
    run_indexed(sets, [&](int i) {
        Rng rng(mix(seed, static_cast<std::uint64_t>(i), 4));
        // Near-regular sets on odd indices keep the well-centered branch from
        // being vacuous: random squares rarely admit acute triangulations.
        const auto pts = (i % 2 == 0) ? random_point_set(rng, 6) : acute_biased_points(rng);
        const TriangulationSet ts = enumerate_triangulations(pts);
        for (const Triangulation& t : ts.triangulations) {
            if (!triangulation_well_centered(pts, t)) continue;
            ++checked[static_cast<size_t>(i)];
            if (!is_locally_delaunay(tri_mesh(pts, t))) {
                msg[static_cast<size_t>(i)] = "set " + std::to_string(i) +
                                              ": well-centered triangulation is not locally Delaunay";
                return;
            }
        }
    });
    long total = 0;
    for (long c : checked) total += c;
    for (auto& s : msg)
        if (!s.empty()) r.failures.push_back(std::move(s));
    r.summary += " (" + std::to_string(sets) + " point sets, " + std::to_string(total) +
                 " well-centered triangulations)";
    return r;
}

SuiteResult suite_minmax_cos(std::uint64_t seed, int sets) {
    SuiteResult r{"minmax-cos",
                  "cos-deviation and max-angle minimizers coincide when no triangulation is acute", {}};
    std::vector<std::string> msg(static_cast<size_t>(sets));
    std::vector<std::uint8_t> applicable(static_cast<size_t>(sets), 0);
    run_indexed(sets, [&](int i) {
        Rng rng(mix(seed, static_cast<std::uint64_t>(i), 5));
        const auto pts = random_point_set(rng, 6);
        const TriangulationSet ts = enumerate_triangulations(pts);
        for (const Triangulation& t : ts.triangulations)
            if (triangulation_max_angle(pts, t) < kHalfPi) return; // acute exists: out of scope here
        applicable[static_cast<size_t>(i)] = 1;
        const auto by_max = argmin_triangulations(ts, EnergyFamily::Emax);
        const auto by_cos = argmin_triangulations(ts, EnergyFamily::Ecos);
        if (by_max != by_cos)
            msg[static_cast<size_t>(i)] = "set " + std::to_string(i) + ": minimizer sets differ (" +
                                          std::to_string(by_max.size()) + " vs " +
                                          std::to_string(by_cos.size()) + ")";
    });
    long n_app = 0;
    for (auto a : applicable) n_app += a;
    for (auto& s : msg)
        if (!s.empty()) r.failures.push_back(std::move(s));
    r.summary += " (" + std::to_string(n_app) + " of " + std::to_string(sets) + " sets applicable)";
    return r;
}

SuiteResult suite_acute_unique(std::uint64_t seed, int sets) {
    SuiteResult r{"acute-unique",
                  "an acute triangulation is unique, locally Delaunay, and the sole max-angle minimizer",
                  {}};
    std::vector<std::string> msg(static_cast<size_t>(sets));
    std::vector<std::uint8_t> applicable(static_cast<size_t>(sets), 0);
    run_indexed(sets, [&](int i) {
        Rng rng(mix(seed, static_cast<std::uint64_t>(i), 6));
        // Alternate plain random sets with near-regular ones so the acute
        // branch is actually exercised.
        const auto pts = (i % 2 == 0) ? random_point_set(rng, 6) : acute_biased_points(rng);
        TriangulationSet ts;
        try {
            ts = enumerate_triangulations(pts);
        } catch (const DegenerateInput&) {
            return;
        }
        std::vector<size_t> acute;
        for (size_t t = 0; t < ts.triangulations.size(); ++t)
            if (triangulation_max_angle(pts, ts.triangulations[t]) < kHalfPi) acute.push_back(t);
        if (acute.empty()) return;
        applicable[static_cast<size_t>(i)] = 1;
        std::string& out = msg[static_cast<size_t>(i)];
        if (acute.size() > 1) {
            out = "set " + std::to_string(i) + ": " + std::to_string(acute.size()) +
                  " acute triangulations";
            return;
        }
        const auto best = argmin_triangulations(ts, EnergyFamily::Emax);
        if (best.size() != 1 || best[0] != acute[0]) {
            out = "set " + std::to_string(i) + ": acute triangulation is not the unique minimizer";
            return;
        }
        if (!is_locally_delaunay(tri_mesh(pts, ts.triangulations[acute[0]])))
            out = "set " + std::to_string(i) + ": acute triangulation is not locally Delaunay";
    });
    long n_app = 0;
    for (auto a : applicable) n_app += a;
    for (auto& s : msg)
        if (!s.empty()) r.failures.push_back(std::move(s));
    r.summary += " (" + std::to_string(n_app) + " of " + std::to_string(sets) + " sets applicable)";
    return r;
}

std::string lonely_kind_name(LonelyKind k) {
    switch (k) {
        case LonelyKind::Interior2D: return "interior-2d";
        case LonelyKind::Boundary2D: return "boundary-2d";
        case LonelyKind::Vertex3D: return "3d";
    }
    return "?";
}

nlohmann::json lonely_json(const std::vector<LonelyVertex>& lv) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : lv)
        arr.push_back({{"vertex", l.vertex}, {"kind", lonely_kind_name(l.kind)}, {"detail", l.detail}});
    return arr;
}

} // namespace

int cmd_check(const std::string& mesh_path, const CheckOptions& opt) {
    return run_guarded([&] {
        const SimplicialMesh m = load_mesh(mesh_path, opt.format);
        std::vector<int> dims = opt.dims;
        if (dims.empty()) dims.push_back(m.dim);
        for (int k : dims)
            if (k < 1 || k > m.dim) throw IndexError("face dimension out of range: " + std::to_string(k));

        nlohmann::json failures = nlohmann::json::array();
        bool all_ok = true;
        for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
            for (int k : dims) {
                bool passed = false;
                if (!check_cell_dim(m, c, k, passed))
                    throw Error("internal error: independent well-centeredness tests disagree on cell " +
                                std::to_string(c));
                if (!passed) {
                    failures.push_back({{"cell", c}, {"dim", k}});
                    all_ok = false;
                }
            }
        }
        nlohmann::json j{{"mesh", mesh_path},
                         {"dim", m.dim},
                         {"vertex_count", m.vertices.size()},
                         {"cell_count", m.cells.size()},
                         {"dims", dims},
                         {"failures", failures},
                         {"well_centered", all_ok}};
        const std::string text = j.dump(2) + "\n";
        std::cout << text;
        if (!opt.output.empty()) write_text(opt.output, text);
        return all_ok ? kExitOk : kExitFail;
    });
}

int cmd_report(const std::string& mesh_path, const ReportOptions& opt) {
    return run_guarded([&] {
        const SimplicialMesh m = load_mesh(mesh_path, opt.format);
        const QualityReport r = quality_report(m, opt.energy, opt.bins);
        const std::string text = report_json(r);
        std::cout << text;
        if (!opt.output.empty()) {
            write_text(opt.output, text);
            std::string csv_path = opt.output;
            const std::string suffix = ".json";
            if (csv_path.size() > suffix.size() &&
                csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
                csv_path.resize(csv_path.size() - suffix.size());
            write_text(csv_path + ".csv", histogram_csv(r.histogram));
        }
        return kExitOk;
    });
}

int cmd_optimize(const std::string& mesh_path, const OptimizeCmdOptions& opt) {
    return run_guarded([&] {
        if (opt.output.empty()) throw IoError("optimize needs an output mesh path");
        SimplicialMesh m = load_mesh(mesh_path, opt.format);
        const std::vector<Stage> stages = parse_schedule(opt.schedule);
        const EnergyConfig report_cfg = stages.empty() ? EnergyConfig{} : stages.front().config;

        const QualityReport before = quality_report(m, report_cfg);
        const auto traces = optimize_schedule(m, stages);
        const QualityReport after = quality_report(m, report_cfg);

        save_mesh(m, opt.output);
        const std::string stem = stem_of(opt.output);
        write_text(stem + ".trace.csv", trace_csv(traces));
        write_text(stem + ".trace.json", trace_json(traces));
        write_text(stem + ".before.json", report_json(before));
        write_text(stem + ".after.json", report_json(after));

        std::cout << "stages: " << stages.size() << "\n"
                  << "energy (" << before.energy_label << "): " << before.energy << " -> "
                  << after.energy << "\n"
                  << "bad cells: " << before.bad_count << " -> " << after.bad_count << "\n"
                  << "inverted cells: " << count_inverted_cells(m) << "\n";
        return kExitOk;
    });
}

int cmd_preprocess(const std::string& mesh_path, const PreprocessOptions& opt) {
    return run_guarded([&] {
        SimplicialMesh m = load_mesh(mesh_path, opt.format);
        const auto before = find_lonely_vertices(m);
        int flips = 0;
        if (m.dim == 2 && !before.empty()) flips = repair_connectivity_2d(m);
        const auto after = find_lonely_vertices(m);

        nlohmann::json j{{"mesh", mesh_path},
                         {"lonely_before", lonely_json(before)},
                         {"flips", flips},
                         {"lonely_after", lonely_json(after)}};
        std::cout << j.dump(2) << "\n";
        if (!opt.output.empty()) save_mesh(m, opt.output);
        return after.empty() ? kExitOk : kExitFail;
    });
}

int cmd_render(const std::string& mesh_path, const RenderOptions& opt) {
    return run_guarded([&] {
        if (opt.output.empty()) throw IoError("render needs an output SVG path");
        const SimplicialMesh m = load_mesh(mesh_path, opt.format);
        write_text(opt.output, render_svg(m, opt.style));
        return kExitOk;
    });
}

int cmd_verify(const VerifyOptions& opt) {
    return run_guarded([&] {
        if (opt.samples < 1) throw Error("samples must be positive");
        const int sets = std::max(1, opt.samples / 100);
        std::vector<SuiteResult> results;
        auto want = [&](const char* name) { return opt.suite.empty() || opt.suite == name; };
        if (want("characterization")) results.push_back(suite_characterization(opt.seed, opt.samples));
        if (want("identities")) results.push_back(suite_identities(opt.seed, opt.samples));
        if (want("min-height")) results.push_back(suite_min_height(opt.seed, opt.samples));
        if (want("delaunay")) results.push_back(suite_delaunay(opt.seed, sets));
        if (want("minmax-cos")) results.push_back(suite_minmax_cos(opt.seed, sets));
        if (want("acute-unique")) results.push_back(suite_acute_unique(opt.seed, sets));
        if (results.empty())
            throw Error("unknown suite '" + opt.suite +
                        "' (characterization, identities, min-height, delaunay, minmax-cos, acute-unique)");
        bool ok = true;
        for (const auto& r : results) {
            print_suite(r);
            ok = ok && r.passed();
        }
        return ok ? kExitOk : kExitFail;
    });
}

} // namespace wcm
