#include "wcm/cli.hpp"
#include "wcm/errors.hpp"
#include "wcm/optimize.hpp"

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

wcm::MeshFormat parse_format(const std::string& s) {
    if (s == "triangle") return wcm::MeshFormat::TriangleNodeEle;
    if (s == "tetgen") return wcm::MeshFormat::TetgenNodeEle;
    if (s == "off") return wcm::MeshFormat::Off;
    return wcm::MeshFormat::Auto;
}

wcm::EnergyConfig parse_energy(const std::string& s) {
    wcm::EnergyConfig cfg;
    if (s == "Einf") {
        cfg.family = wcm::EnergyFamily::Einfty;
    } else if (s == "Ecos") {
        cfg.family = wcm::EnergyFamily::Ecos;
    } else if (s == "Emax") {
        cfg.family = wcm::EnergyFamily::Emax;
    } else if (s == "Emin") {
        cfg.family = wcm::EnergyFamily::Emin;
    } else {
        cfg = wcm::parse_schedule(s + ":0").at(0).config;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Well-centered simplicial mesh toolkit"};
    app.require_subcommand(1);
    const std::vector<std::string> formats{"auto", "triangle", "tetgen", "off"};

    std::string mesh, format = "auto", output;
    std::vector<int> dims;
    auto* check = app.add_subcommand("check", "Test every cell for well-centeredness");
    check->add_option("mesh", mesh, "input mesh (.node/.ele pair or .off)")->required();
    check->add_option("--dims", dims, "face dimensions to test (default: mesh dimension)");
    check->add_option("--format", format, "input format")->check(CLI::IsMember(formats));
    check->add_option("--output", output, "also write the JSON report here");

    std::string energy = "E4";
    int bins = 0;
    auto* report = app.add_subcommand("report", "Quality statistics, energy, and histogram");
    report->add_option("mesh", mesh, "input mesh")->required();
    report->add_option("--bins", bins, "histogram bin count (0 = default)");
    report->add_option("--energy", energy, "energy to report: E<p>, ~E<p>, Einf, Ecos, Emax, Emin");
    report->add_option("--format", format, "input format")->check(CLI::IsMember(formats));
    report->add_option("--output", output, "write JSON here and the histogram CSV beside it");

    std::string schedule = "E4:500";
    auto* optimize = app.add_subcommand("optimize", "Smooth interior vertices by energy descent");
    optimize->add_option("mesh", mesh, "input mesh")->required();
    optimize->add_option("--schedule", schedule, "stages like E4:500,~E10:500");
    optimize->add_option("--format", format, "input format")->check(CLI::IsMember(formats));
    optimize->add_option("--output", output, "output mesh path")->required();

    auto* preprocess = app.add_subcommand("preprocess", "Report lonely vertices; flip-repair 2D meshes");
    preprocess->add_option("mesh", mesh, "input mesh")->required();
    preprocess->add_option("--format", format, "input format")->check(CLI::IsMember(formats));
    preprocess->add_option("--output", output, "write the repaired mesh here");

    std::string style = "stroke";
    int width = 800;
    auto* render = app.add_subcommand("render", "Grayscale SVG shaded by largest angle");
    render->add_option("mesh", mesh, "input mesh (2D only)")->required();
    render->add_option("--style", style, "'stroke' outlines cells, 'flat' does not")
        ->check(CLI::IsMember({"stroke", "flat"}));
    render->add_option("--width", width, "image width in pixels");
    render->add_option("--format", format, "input format")->check(CLI::IsMember(formats));
    render->add_option("--output", output, "output SVG path")->required();

    std::uint64_t seed = 1;
    int samples = 10000;
    std::string suite;
    auto* verify = app.add_subcommand("verify", "Randomized + exhaustive self-check suites");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--samples", samples, "sample budget per randomized suite");
    verify->add_option("--suite", suite,
                       "run one suite: characterization, identities, min-height, delaunay, "
                       "minmax-cos, acute-unique");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*check) {
            wcm::CheckOptions o;
            o.dims = dims;
            o.format = parse_format(format);
            o.output = output;
            return wcm::cmd_check(mesh, o);
        }
        if (*report) {
            wcm::ReportOptions o;
            o.format = parse_format(format);
            o.energy = parse_energy(energy);
            o.bins = bins;
            o.output = output;
            return wcm::cmd_report(mesh, o);
        }
        if (*optimize) {
            wcm::OptimizeCmdOptions o;
            o.format = parse_format(format);
            o.schedule = schedule;
            o.output = output;
            return wcm::cmd_optimize(mesh, o);
        }
        if (*preprocess) {
            wcm::PreprocessOptions o;
            o.format = parse_format(format);
            o.output = output;
            return wcm::cmd_preprocess(mesh, o);
        }
        if (*render) {
            wcm::RenderOptions o;
            o.format = parse_format(format);
            o.style.stroke = style == "stroke";
            o.style.width = width;
            o.output = output;
            return wcm::cmd_render(mesh, o);
        }
        if (*verify) {
            wcm::VerifyOptions o;
            o.seed = seed;
            o.samples = samples;
            o.suite = suite;
            return wcm::cmd_verify(o);
        }
    } catch (const wcm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
