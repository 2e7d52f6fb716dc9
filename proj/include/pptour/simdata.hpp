#pragma once

#include <cstdint>
#include <string>

#include "pptour/types.hpp"

namespace pptour {

/// Recipe for a simulated dataset. The structured pair always occupies the
/// last two variables; the remaining p-2 columns are nuisance noise.
struct SimSpec {
    std::string family;       // pipe | sine | spiral
    int n = 1000;
    int p = 6;
    std::uint64_t seed = 0;
    double radial_sd = 0.015;  // pipe: radial noise around the unit circle
    double jitter_sd = 0.01;   // sine: vertical jitter
    double spiral_a = 0.1;     // spiral: r = a + b*|theta|
    double spiral_b = 0.1;
    double theta_sd = 6.283185307179586;  // spiral: sd of theta

    bool operator==(const SimSpec&) const = default;
};

DataMatrix gen_pipe(const SimSpec& spec);
DataMatrix gen_sine(const SimSpec& spec);
DataMatrix gen_spiral(const SimSpec& spec);

/// Dispatch on spec.family.
DataMatrix generate(const SimSpec& spec);

/// Per-column z-score. Throws DegenerateColumn on zero variance.
DataMatrix standardize(const DataMatrix& x);

/// Per-column map of [min,max] onto [0,1]. Throws DegenerateColumn on zero range.
DataMatrix minmax_scale(const DataMatrix& x);

/// Project onto the top `keep` principal components, each scaled to unit
/// variance. Rank-deficient input reduces keep (with a note to stderr).
DataMatrix sphere_pca(const DataMatrix& x, int keep);

} // namespace pptour
