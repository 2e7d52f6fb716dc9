#pragma once

#include <string>
#include <vector>

#include "pptour/config.hpp"

namespace pptour {

/// Options coming from the command line rather than the config file.
struct RunOptions {
    std::string output_dir;     // overrides config output_dir when set
    bool timing = false;        // record per-evaluation wall time in traces.csv
    std::string verify_target;  // optimize: "axes:5,6" (1-based) or a frame csv path
    double verify_dist_max = -1.0;  // nonzero exit when verify distance exceeds this
};

/// Executes one subcommand (simulate | evaluate | trace | optimize | diagnose
/// | plot). Writes artifacts plus a manifest into the output directory and
/// returns the process exit code (0 ok, 2 config, 3 data, 4 evaluation).
int run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opt = {});

} // namespace pptour
