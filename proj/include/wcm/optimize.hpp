#pragma once

#include "wcm/quality.hpp"

#include <span>
#include <string>
#include <vector>

namespace wcm {

struct Stage {
    EnergyConfig config;
    int iterations = 0;
};

// Comma-separated stages like "E4:500,~E10:500"; ~ picks the barrier variant.
// An empty string yields no stages. Malformed stages raise ScheduleError.
std::vector<Stage> parse_schedule(const std::string& text);

struct OptimizeSettings {
    std::vector<int> free_vertices; // empty = every interior vertex
    double fd_step_scale = 1e-6;    // x mean incident edge length
    double armijo_c1 = 1e-4;
    double backtrack = 0.5;
    double first_step_scale = 0.1;  // x mean edge length / gradient norm
    double min_step_scale = 1e-14;  // x mean edge length, displacement cutoff
    int restart_interval = 0;       // 0 = number of free coordinates
};

struct TraceRow {
    int iter = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    double step = 0.0; // displacement of the accepted move
    int bad_count = 0; // cells failing the dim-well-centered test
};

struct OptimizationTrace {
    std::string stage;
    std::vector<TraceRow> rows; // row 0 describes the incoming mesh
    bool stopped_early = false;
    double wall_seconds = 0.0;
};

std::vector<int> interior_vertices(const SimplicialMesh& m);

// Central-difference gradient of the configured energy with respect to the
// free vertices' coordinates, vertex-major (x, y[, z] per vertex). The
// difference step is fd_step_scale times that vertex's mean incident edge
// length.
std::vector<double> numerical_gradient(const SimplicialMesh& m, const EnergyConfig& cfg,
                                       std::span<const int> free, double fd_step_scale = 1e-6);

// Conjugate-gradient descent (Polak-Ribiere, beta clamped at zero, periodic
// restarts) with backtracking Armijo line search. Moves only the free
// vertices; boundary coordinates and connectivity are never touched. Every
// accepted iterate strictly decreases the energy; if the line search cannot
// find a decrease above the minimum step the stage stops early.
OptimizationTrace optimize(SimplicialMesh& m, const EnergyConfig& cfg, int iterations,
                           const OptimizeSettings& settings = {});

std::vector<OptimizationTrace> optimize_schedule(SimplicialMesh& m, std::span<const Stage> stages,
                                                 const OptimizeSettings& settings = {});

// "iter,energy,grad_norm,step,bad_count" with one continuous iteration
// numbering across stages.
std::string trace_csv(std::span<const OptimizationTrace> traces);
std::string trace_json(std::span<const OptimizationTrace> traces);

} // namespace wcm
