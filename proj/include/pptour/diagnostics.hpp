#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pptour/indexes.hpp"
#include "pptour/optimizer.hpp"
#include "pptour/simdata.hpp"
#include "pptour/types.hpp"

namespace pptour {

/// Index values along a fixed interpolated path.
struct TraceResult {
    std::vector<Frame> path;
    std::vector<std::string> index_names;
    Matrix values;                        // frames x indexes; NaN marks a failed cell
    std::vector<std::size_t> leg_markers; // key planes (e.g. the intermediate projection)
    std::uint64_t config_fingerprint = 0;
};

/// Interpolation between the two nuisance planes x1-x2 and x3-x4; ideally a
/// smooth, low trace for every index.
TraceResult trace_nuisance(const DataMatrix& x, const std::vector<IndexDescriptor>& indexes,
                           int steps = 41);

/// Two-leg path x1-x2 -> x1-x_{p-1} -> x_{p-1}-x_p probing squintability;
/// the intermediate plane is marked. Default 2*30-1 = 59 frames.
TraceResult trace_squint(const DataMatrix& x, const std::vector<IndexDescriptor>& indexes,
                         int steps_per_leg = 30);

/// Index values on within-plane rotations of y at n_angles equally spaced
/// angles in [0, pi).
struct RotationScan {
    std::vector<double> angles;
    std::vector<std::string> index_names;
    Matrix values;  // angles x indexes
};
RotationScan rotation_scan(const ProjectedData& y, const std::vector<IndexDescriptor>& indexes,
                           int n_angles = 36);

/// Structured-vs-noise percentile table over seeded replicates (the Table 2
/// style summary).
struct PercentileRow {
    std::string index;
    std::string family;
    std::string role;  // noise | structure
    double p05 = 0.0;
    double p95 = 0.0;
};
std::vector<PercentileRow> percentile_table(const std::vector<std::string>& families,
                                            const std::vector<IndexDescriptor>& indexes, int n,
                                            int n_reps, int p, std::uint64_t master_seed);

/// Bisection estimate of the largest departure angle from the target plane at
/// which the index still exceeds threshold * value(target), over n_dirs random
/// geodesic directions.
struct SquintEstimate {
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double value_at_target = 0.0;
    std::vector<double> angles;
};
SquintEstimate squint_angle_estimate(const DataMatrix& x, const IndexDescriptor& index,
                                     const Frame& target, double threshold, int n_dirs, Rng& rng,
                                     double max_angle = 0.7853981633974483);

struct TimingRow {
    std::string index;
    int n = 0;
    double median_ms = 0.0;
};
/// Median wall-clock per evaluation on standard-normal projections, pinned to
/// one thread for stable medians.
std::vector<TimingRow> timing_benchmark(const std::vector<IndexDescriptor>& indexes,
                                        const std::vector<int>& sizes, int n_reps = 9);

struct SweepRow {
    double value = 0.0;
    double structured_score = 0.0;
    double noise_score = 0.0;
    double trace_masd = 0.0;
};
/// Re-evaluates structured/noise scores and nuisance-trace roughness per
/// parameter value. Throws InvalidParameter when the parameter does not apply.
std::vector<SweepRow> parameter_sweep(const DataMatrix& x, const IndexDescriptor& index,
                                      const std::string& param_name,
                                      const std::vector<double>& values);

/// Descriptor wrapper: evaluation at a frame averages the raw index over
/// `window` jittered frames within probe_step (window 1 = raw index).
IndexDescriptor smooth_index(const IndexDescriptor& index, int window,
                             const std::string& method = "mean");

/// Per-index MASD over a trace (helper shared by sweep and the smoothness
/// assessments).
std::vector<double> trace_masd(const TraceResult& t);

} // namespace pptour
