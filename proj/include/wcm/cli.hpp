#pragma once

#include "wcm/mesh.hpp"
#include "wcm/quality.hpp"
#include "wcm/render.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wcm {

// Exit code contract shared by every subcommand.
inline constexpr int kExitOk = 0;    // success / property holds
inline constexpr int kExitFail = 1;  // property fails
inline constexpr int kExitError = 2; // bad input, I/O failure, internal error

struct CheckOptions {
    std::vector<int> dims;            // face dimensions to test; empty = mesh dim
    MeshFormat format = MeshFormat::Auto;
    std::string output;               // optional JSON path (stdout regardless)
};
// Well-centeredness check. Every cell is judged by two independent tests
// (circumcenter barycentric containment and the equatorial-ball criterion);
// disagreement with margin above 1e-8 x face circumradius is an internal
// error. JSON report lists failing cells.
int cmd_check(const std::string& mesh_path, const CheckOptions& opt);

struct ReportOptions {
    MeshFormat format = MeshFormat::Auto;
    EnergyConfig energy;              // which energy value to report
    int bins = 0;                     // 0 = per-dimension default
    std::string output;               // optional JSON path; histogram CSV beside it
};
int cmd_report(const std::string& mesh_path, const ReportOptions& opt);

struct OptimizeCmdOptions {
    MeshFormat format = MeshFormat::Auto;
    std::string schedule = "E4:500";
    std::string output;               // output mesh path (required)
};
// Runs the smoothing schedule; writes the result mesh plus <stem>.trace.csv,
// <stem>.trace.json, <stem>.before.json, <stem>.after.json.
int cmd_optimize(const std::string& mesh_path, const OptimizeCmdOptions& opt);

struct PreprocessOptions {
    MeshFormat format = MeshFormat::Auto;
    std::string output;               // optional repaired mesh path
};
// Reports lonely vertices; for 2D meshes attempts edge-flip repair first.
// Exit 0 when none remain, 1 when some do.
int cmd_preprocess(const std::string& mesh_path, const PreprocessOptions& opt);

struct RenderOptions {
    MeshFormat format = MeshFormat::Auto;
    RenderStyle style;
    std::string output;               // SVG path (required)
};
int cmd_render(const std::string& mesh_path, const RenderOptions& opt);

struct VerifyOptions {
    std::uint64_t seed = 1;
    int samples = 10000;              // randomized suites; enumeration suites use samples/100 point sets
    std::string suite;                // empty = all suites
};
// Randomized + exhaustive self-check suites over the geometric predicates,
// energies, and triangulation enumeration. Prints one pass/fail line per
// suite. Honors WC_THREADS; results are independent of the thread count.
int cmd_verify(const VerifyOptions& opt);

} // namespace wcm
