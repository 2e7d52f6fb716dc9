#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pptour/types.hpp"

namespace pptour {

/// Tuning knobs shared by the index functions. Only a subset applies to any
/// given index; the CLI config uses the same field names.
struct IndexParams {
    int bin_cap = 40;             // scagnostics grid resolution
    int bin_max_cells = 250;      // halve the grid while more cells are occupied
    double alpha_override = 0.0;  // alpha hull radius; 0 = data-driven omega
    bool peel_outliers = true;    // drop MST vertices with all edges > omega
    double mic_exponent = 0.6;    // grid bound B(n) = n^exponent
    int mic_candidates = 64;      // max column-cut positions for the DP
    double spline_df_min = 2.0;
    double spline_df_max = 15.0;
    int spline_basis = 15;        // cubic B-spline basis size
    int smooth_window = 1;        // >= 3 averages over jittered frames
    std::string smooth_method = "mean";  // mean | median
    double probe_step = 0.01;     // jitter radius (radians) for smoothing

    bool operator==(const IndexParams&) const = default;
};

struct IndexDescriptor {
    std::string name;  // holes|convex1m|skinny|stringy|dcor2d|splines2d|mic|tic
    IndexParams params;
};

/// Empirical TIC maximum for a sample size, from the perfectly dependent
/// reference; used to rescale the unbounded TIC sum into [0,1].
struct TicCalibration {
    int n = 0;
    double max_estimate = 0.0;
};

struct IndexResult {
    double value = 0.0;  // rescaled/clipped to [0,1]
    double raw = 0.0;    // pre-rescale value, for diagnostics
    bool degenerate = false;
};

// The eight projection pursuit indexes. All return values in [0,1].
IndexResult idx_convex1m(const ProjectedData& y, const IndexParams& p = {});
IndexResult idx_skinny(const ProjectedData& y, const IndexParams& p = {});
IndexResult idx_stringy(const ProjectedData& y, const IndexParams& p = {});
IndexResult idx_dcor2d(const ProjectedData& y, const IndexParams& p = {});
IndexResult idx_splines2d(const ProjectedData& y, const IndexParams& p = {});
IndexResult idx_mic(const ProjectedData& y, const IndexParams& p = {});
IndexResult idx_holes(const ProjectedData& y, const IndexParams& p = {});
IndexResult idx_tic(const ProjectedData& y, const IndexParams& p, const TicCalibration& cal);

/// Normalized mutual information for one grid resolution: y axis
/// equipartitioned into ky rows, x partition (up to kx columns) optimized by
/// dynamic programming, divided by log(min(kx, ky)).
double idx_mi_grid(const ProjectedData& y, int kx, int ky, const IndexParams& p = {});

/// Deterministic TIC calibration on the diagonal reference of size n.
TicCalibration calibrate_tic(int n, const IndexParams& p = {});

/// All three scagnostics from one pass over the binned geometry.
struct ScagMeasures {
    double convex1m = 0.0, skinny = 0.0, stringy = 0.0;
    double alpha = 0.0;
    int grid = 0;
    int n_binned = 0;
    bool degenerate = false;
};
ScagMeasures scag_measures(const ProjectedData& y, const IndexParams& p = {});

const std::vector<std::string>& index_names();
bool is_known_index(const std::string& name);

/// Dispatch by descriptor name. TIC needs a calibration; pass one or use an
/// Evaluator, otherwise CalibrationRequired is thrown. Frame-smoothing params
/// are ignored on this data-only path (see FrameEvaluator in diagnostics).
IndexResult evaluate_detail(const IndexDescriptor& d, const ProjectedData& y,
                            const TicCalibration* cal = nullptr);
double evaluate(const IndexDescriptor& d, const ProjectedData& y,
                const TicCalibration* cal = nullptr);

/// Evaluate with automatic, cached TIC calibration (thread-safe).
class Evaluator {
  public:
    double operator()(const IndexDescriptor& d, const ProjectedData& y) const;
    IndexResult detail(const IndexDescriptor& d, const ProjectedData& y) const;
    const TicCalibration& tic_calibration(int n, const IndexParams& p) const;

  private:
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, TicCalibration> cache_;  // (n, candidates*4096+expo)
};

} // namespace pptour
