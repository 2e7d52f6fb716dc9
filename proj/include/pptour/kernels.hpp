#pragma once

#include <vector>

#include "pptour/types.hpp"

// Heavy inner loops, each in a serial reference version and an OpenMP
// version. The parallel versions accumulate per-row / per-resolution partial
// results into slots and combine them in a fixed order, so they are
// bit-identical to the serial reference for any thread count; the tests pin
// that equality and bench/ compares throughput.
namespace pptour::kernels {

/// Process-wide switch consulted by the index implementations.
bool parallel_enabled();
void set_parallel_enabled(bool on);

// ---- distance correlation -------------------------------------------------

struct DcorStats {
    double dcor = 0.0;   // sqrt(dcov2 / sqrt(dvarx * dvary))
    double dcov2 = 0.0;
    double dvarx = 0.0;
    double dvary = 0.0;
};

DcorStats dcor_serial(const Vector& x, const Vector& y);
DcorStats dcor_omp(const Vector& x, const Vector& y);

// ---- mutual-information characteristic sweep ------------------------------

/// Shared preprocessing for the grid-based mutual information estimator.
struct MiPrepared {
    std::vector<double> x_sorted;   // x ascending
    std::vector<double> y_by_x;     // y values in x-sorted order
    std::vector<double> y_sorted;   // y ascending
    std::vector<int> clump_start;   // start offsets of maximal equal-x runs
    std::vector<double> xlogx;      // k * ln k for k = 0..n
    int n = 0;
};

MiPrepared mi_prepare(const Vector& x, const Vector& y);

/// Best mutual information (nats) over x-partitions with 2..kx_max parts,
/// for a fixed equipartition of the y axis into ky rows. The x cut points
/// are restricted to at most `candidates` mass-equipartitioned superclumps.
/// Entry [k-2] of the result corresponds to at most k parts.
std::vector<double> mi_profile(const MiPrepared& in, int ky, int kx_max, int candidates);

struct MiCell {
    int kx, ky;
    double value;  // normalized by log(min(kx, ky))
};

/// All cells (kx, ky) with kx, ky >= 2 and kx * ky <= grid_bound.
std::vector<MiCell> mi_char_serial(const MiPrepared& in, int grid_bound, int candidates);
std::vector<MiCell> mi_char_omp(const MiPrepared& in, int grid_bound, int candidates);

} // namespace pptour::kernels
