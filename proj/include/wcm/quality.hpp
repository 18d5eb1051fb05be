#pragma once

#include "wcm/mesh.hpp"

#include <array>
#include <string>
#include <vector>

namespace wcm {

// Ep        sum over cells and vertices of |2 h/R - 1|^p
// EpBarrier Ep scaled by barrier_weight plus the inverse-mean-ratio sum
// Einfty    max |h/R - 1/2|
// Ecos      max |2 cos(angle) - 1|   (planar only)
// Emax/Emin largest / smallest angle (planar only)
enum class EnergyFamily { Ep, EpBarrier, Einfty, Ecos, Emax, Emin };

struct EnergyConfig {
    EnergyFamily family = EnergyFamily::Ep;
    int p = 4;
    double target = 0.5;           // desired h/R in the per-simplex measure
    double barrier_weight = 100.0;
};

std::string energy_name(const EnergyConfig& cfg);

// h/R per vertex of one simplex; exactly -1 everywhere for degenerate cells.
std::array<double, 4> height_ratios(std::span<const Point> pts);

// Per-simplex well-centeredness measure: max_i |h_i/R - target|.
double energy_fn(std::span<const Point> pts, double target);

double energy_Ep(const SimplicialMesh& m, int p);
double energy_Einfty(const SimplicialMesh& m);

// Single-cell contributions; the mesh sums are cell-major over these.
double cell_Ep(const SimplicialMesh& m, int c, int p);
double cell_imr(const SimplicialMesh& m, int c);

// Inverse mean ratio sum. Inverted or degenerate cells contribute the
// sentinel 1e30, which dominates any inversion-free mesh energy as long as
// barrier_weight * Ep + cell_count stays below 1e30.
double energy_imr(const SimplicialMesh& m);
inline constexpr double kImrSentinel = 1e30;

double energy_combined(const SimplicialMesh& m, int p, double barrier_weight);

double energy_cos(const SimplicialMesh& m);
double energy_max_angle(const SimplicialMesh& m);
double energy_min_angle(const SimplicialMesh& m);

double mesh_energy(const SimplicialMesh& m, const EnergyConfig& cfg);

// Cells failing the dim-well-centered test; degenerate cells count as bad.
std::vector<int> bad_cells(const SimplicialMesh& m);
int count_bad_cells(const SimplicialMesh& m);

// Cells with nonpositive signed measure.
int count_inverted_cells(const SimplicialMesh& m);

// Smallest h/R over all (cell, vertex) pairs.
double min_height_ratio(const SimplicialMesh& m);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<long> counts;
};

// 2D reports histogram angles in degrees over [0, 180], default 90 bins.
// 3D reports h/R values over [-1, 1], default 100 bins. Statistics
// (min/max/mean/stddev) describe the same distribution.
struct QualityReport {
    int dim = 2;
    int vertex_count = 0;
    int cell_count = 0;
    int bad_count = 0;
    double min_value = 0.0;
    double max_value = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    double energy = 0.0;
    std::string energy_label;
    Histogram histogram;
};

QualityReport quality_report(const SimplicialMesh& m, const EnergyConfig& cfg = {}, int bins = 0);

std::string report_json(const QualityReport& r);

// Rows of "bin_low,bin_high,count".
std::string histogram_csv(const Histogram& h);

} // namespace wcm
