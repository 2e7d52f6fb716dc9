#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pptour/geometry.hpp"
#include "pptour/indexes.hpp"
#include "pptour/types.hpp"

namespace pptour {

struct OptimizerConfig {
    std::string method = "geodesic";  // better_random | better | geodesic
    double alpha = 0.5;               // search window radius (plane distance)
    double cooling = 0.9;             // window decay per accepted target
    int max_tries = 400;              // index-evaluation budget per search call
    double tol = 1e-4;                // minimum improvement to accept
    double probe_step = 0.01;         // radians, direction probes
    double line_window = 0.7853981633974483;  // radians, +- line search span
    int interp_steps = 20;            // interpolation frames per accepted leg
    std::uint64_t seed = 0;
    double local_fraction = 0.0;      // better_random: share of draws near current
    int n_dir = 10;                   // geodesic: probe directions per attempt

    bool operator==(const OptimizerConfig&) const = default;
};

/// Ordered record of frames along an optimization (or plain interpolation)
/// with per-frame values for one or more indexes.
struct TourHistory {
    std::vector<Frame> frames;
    std::vector<std::string> index_names;  // primary index first
    Matrix values;                         // frames x indexes
    Matrix eval_ms;                        // same shape; zeros unless timing enabled
    std::vector<std::size_t> anchors;      // target-plane positions, increasing
    std::vector<int> stage;                // per frame: 0 = scout/single, 1 = refine

    std::string primary;
    OptimizerConfig config;
    std::uint64_t data_fingerprint = 0;
    double wall_ms = 0.0;
};

/// Objective bound to a dataset: value of the index on the projection through
/// a frame (honors smoothing params via frame_value).
class FrameObjective {
  public:
    FrameObjective(const Evaluator& ev, const DataMatrix& x, IndexDescriptor desc);
    double operator()(const Frame& f) const;

  private:
    const Evaluator* ev_;
    const DataMatrix* x_;
    IndexDescriptor desc_;
};

/// Projects and evaluates; descriptors with smooth_window >= 3 average the
/// raw index over deterministically jittered frames within probe_step.
double frame_value(const Evaluator& ev, const DataMatrix& x, const IndexDescriptor& d,
                   const Frame& f);

struct SearchOutcome {
    bool found = false;  // false = Exhausted (a normal stopping outcome)
    Frame frame;
    double value = 0.0;
    int evals = 0;
};

SearchOutcome search_better_random(const Frame& current, double current_value,
                                   const FrameObjective& f, const OptimizerConfig& cfg,
                                   Rng& rng, double window);
SearchOutcome search_better(const Frame& current, double current_value, const FrameObjective& f,
                            const OptimizerConfig& cfg, Rng& rng, double window);
SearchOutcome search_geodesic(const Frame& current, double current_value, const FrameObjective& f,
                              const OptimizerConfig& cfg, Rng& rng);

/// Candidate within plane distance <= window of `current`: a random frame is
/// blended toward the current one, orthonormalized, and rejection-checked.
Frame sample_in_window(const Frame& current, double window, Rng& rng);

TourHistory guided_tour(const DataMatrix& x, const IndexDescriptor& desc,
                        const OptimizerConfig& cfg,
                        const std::vector<IndexDescriptor>& extra_indexes = {},
                        const std::optional<Frame>& start = std::nullopt, int stage = 0,
                        bool record_timing = false);

/// Two-stage protocol: a wide annealing-style scout (method "better",
/// cooling 1) followed by geodesic refinement from the scout's best anchor.
TourHistory scout_then_refine(const DataMatrix& x, const IndexDescriptor& desc,
                              const OptimizerConfig& cfg_scout, const OptimizerConfig& cfg_refine,
                              const std::vector<IndexDescriptor>& extra_indexes = {},
                              bool record_timing = false);

} // namespace pptour
