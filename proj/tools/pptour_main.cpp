#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "pptour/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"projection pursuit index engine and diagnostics toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    pptour::RunOptions opt;

    const char* commands[] = {"simulate", "evaluate", "trace", "optimize", "diagnose", "plot"};
    const char* descriptions[] = {
        "generate a simulated dataset and write it as CSV",
        "evaluate indexes on given frames",
        "nuisance or squint interpolation traces",
        "guided tour or scout/refine optimization",
        "percentile table, rotation scan, timing, parameter sweep, squint angle",
        "render traces.csv or a scatter view as SVG"};

    for (std::size_t i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
        sub->add_option("-c,--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("-o,--out", opt.output_dir, "output directory (overrides config)");
        sub->add_flag("--timing", opt.timing, "record per-evaluation wall time in traces.csv");
        if (std::string(commands[i]) == "optimize") {
            sub->add_option("--verify", opt.verify_target,
                            "known target plane: 'axes:i,j' (1-based) or a frame csv");
            sub->add_option("--verify-dist-max", opt.verify_dist_max,
                            "exit nonzero when the final plane is farther than this");
        }
    }

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const pptour::RunConfig cfg = pptour::RunConfig::parse_file(config_path);
        return pptour::run_command(command, cfg, opt);
    } catch (const pptour::ConfigError& e) {
        std::cerr << R"({"error":"config","message":")" << e.what() << "\"}\n";
        return 2;
    }
}
