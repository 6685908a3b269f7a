// grid.hpp: non-uniform frequency grids for spectra

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pbgfluor/params.hpp"

namespace pbgfluor {

struct GridSpec {
    double omega_min = -1.0;
    double omega_max = 1.0;
    std::size_t base_points = 801;        // uniform background grid
    double peak_halfwidth = 5.0;          // densified region around a peak, in linewidths
    double edge_halfwidth = 1e-3;         // densified region around a Heaviside edge, in model units
    double geometric_ratio = 0.85;        // spacing ratio of the geometric clusters
    double refine_tol = 1e-7;             // adaptive refinement target (relative to the integral)
    std::size_t max_points = 400000;
};

struct GridFeature {
    enum class Kind { Peak, Edge };
    double center = 0.0;
    double halfwidth = 0.0;
    Kind kind = Kind::Peak;
};

// Expected peaks (centre line and Rabi sidebands) and, for the band-edge model, the
// Heaviside edges at omega_c - omega_a and omega_a - omega_c.
std::vector<GridFeature> expected_features(const PhysicalParams& params, const GridSpec& spec);

// Uniform background plus geometric clusters around every feature; sorted, deduplicated,
// clipped to [omega_min, omega_max] with both end points present.
std::vector<double> make_grid(const GridSpec& spec, std::span<const GridFeature> features);

// Throws ValidationError unless the grid is strictly increasing.
void require_increasing(std::span<const double> grid);

double trapezoid(std::span<const double> x, std::span<const double> y);

struct Samples {
    std::vector<double> x;
    std::vector<double> y;
};

// Adaptive bisection: inserts interval midpoints until the Richardson error estimate of
// the composite trapezoid rule, summed over intervals, is below rel_tol * |integral|.
// fn must be safe to call concurrently when threads > 1.
Samples refine_adaptive(const std::function<double(double)>& fn, std::vector<double> nodes,
                        double rel_tol, std::size_t max_points, unsigned threads = 1);

} // namespace pbgfluor
