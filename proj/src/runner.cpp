#include "pptour/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pptour/csv.hpp"
#include "pptour/diagnostics.hpp"
#include "pptour/errors.hpp"
#include "pptour/geometry.hpp"
#include "pptour/stats.hpp"
#include "pptour/svg.hpp"

namespace pptour {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_text(text);
}

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig cfg;
    try {
        cfg.raw = Json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.raw.is_object()) throw ConfigError("config root must be an object");
    return cfg;
}

std::uint64_t RunConfig::master_seed() const {
    return raw.contains("seed") ? raw.at("seed").get<std::uint64_t>() : 0;
}

std::string RunConfig::output_dir() const {
    return raw.contains("output_dir") ? raw.at("output_dir").get<std::string>() : std::string("out");
}

const Json& RunConfig::at(const std::string& key) const {
    if (!raw.contains(key)) throw ConfigError("config is missing required key: " + key);
    return raw.at(key);
}

std::string config_fingerprint(const Json& j) {
    const std::string canon = Json(j).dump();
    const std::uint64_t h = fnv1a(canon.data(), canon.size());
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

template <typename T>
void maybe(const Json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

} // namespace

IndexParams index_params_from_json(const Json& j) {
    IndexParams p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw ConfigError("index params must be an object");
    maybe(j, "bin_cap", p.bin_cap);
    maybe(j, "bin_max_cells", p.bin_max_cells);
    maybe(j, "alpha_override", p.alpha_override);
    maybe(j, "peel_outliers", p.peel_outliers);
    maybe(j, "mic_exponent", p.mic_exponent);
    maybe(j, "mic_candidates", p.mic_candidates);
    maybe(j, "spline_basis", p.spline_basis);
    maybe(j, "smooth_window", p.smooth_window);
    maybe(j, "smooth_method", p.smooth_method);
    maybe(j, "probe_step", p.probe_step);
    if (j.contains("spline_df_bounds")) {
        const auto& b = j.at("spline_df_bounds");
        if (!b.is_array() || b.size() != 2) throw ConfigError("spline_df_bounds must be [min,max]");
        p.spline_df_min = b[0].get<double>();
        p.spline_df_max = b[1].get<double>();
    }
    for (const auto& [key, val] : j.items()) {
        (void)val;
        static const char* known[] = {"bin_cap",       "bin_max_cells", "alpha_override",
                                      "peel_outliers", "mic_exponent",  "mic_candidates",
                                      "spline_basis",  "smooth_window", "smooth_method",
                                      "probe_step",    "spline_df_bounds"};
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown index param: " + key);
    }
    return p;
}

Json index_params_to_json(const IndexParams& p) {
    Json j;
    j["bin_cap"] = p.bin_cap;
    j["bin_max_cells"] = p.bin_max_cells;
    j["alpha_override"] = p.alpha_override;
    j["peel_outliers"] = p.peel_outliers;
    j["mic_exponent"] = p.mic_exponent;
    j["mic_candidates"] = p.mic_candidates;
    j["spline_df_bounds"] = Json::array({p.spline_df_min, p.spline_df_max});
    j["spline_basis"] = p.spline_basis;
    j["smooth_window"] = p.smooth_window;
    j["smooth_method"] = p.smooth_method;
    j["probe_step"] = p.probe_step;
    return j;
}

IndexDescriptor index_descriptor_from_json(const Json& j) {
    IndexDescriptor d;
    if (j.is_string()) {
        d.name = j.get<std::string>();
    } else if (j.is_object()) {
        d.name = j.at("name").get<std::string>();
        if (j.contains("params")) d.params = index_params_from_json(j.at("params"));
    } else {
        throw ConfigError("index entry must be a name or an object");
    }
    if (!is_known_index(d.name)) throw UnknownIndex("unknown index: " + d.name);
    return d;
}

std::vector<IndexDescriptor> index_list_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("indexes must be a non-empty array");
    std::vector<IndexDescriptor> out;
    for (const auto& e : j) out.push_back(index_descriptor_from_json(e));
    return out;
}

OptimizerConfig optimizer_from_json(const Json& j, const OptimizerConfig& base) {
    OptimizerConfig cfg = base;
    if (j.is_null()) return cfg;
    maybe(j, "method", cfg.method);
    maybe(j, "alpha", cfg.alpha);
    maybe(j, "cooling", cfg.cooling);
    maybe(j, "max_tries", cfg.max_tries);
    maybe(j, "tol", cfg.tol);
    maybe(j, "probe_step", cfg.probe_step);
    maybe(j, "line_window", cfg.line_window);
    maybe(j, "interp_steps", cfg.interp_steps);
    maybe(j, "seed", cfg.seed);
    maybe(j, "local_fraction", cfg.local_fraction);
    maybe(j, "n_dir", cfg.n_dir);
    if (cfg.cooling <= 0.0 || cfg.cooling > 1.0) throw ConfigError("cooling must be in (0,1]");
    if (cfg.alpha <= 0.0) throw ConfigError("alpha must be positive");
    if (cfg.max_tries < 1) throw ConfigError("max_tries must be >= 1");
    if (cfg.tol < 0.0) throw ConfigError("tol must be >= 0");
    return cfg;
}

Json optimizer_to_json(const OptimizerConfig& cfg) {
    Json j;
    j["method"] = cfg.method;
    j["alpha"] = cfg.alpha;
    j["cooling"] = cfg.cooling;
    j["max_tries"] = cfg.max_tries;
    j["tol"] = cfg.tol;
    j["probe_step"] = cfg.probe_step;
    j["line_window"] = cfg.line_window;
    j["interp_steps"] = cfg.interp_steps;
    j["seed"] = cfg.seed;
    j["local_fraction"] = cfg.local_fraction;
    j["n_dir"] = cfg.n_dir;
    return j;
}

SimSpec simspec_from_json(const Json& j) {
    SimSpec s;
    s.family = j.at("family").get<std::string>();
    maybe(j, "n", s.n);
    maybe(j, "p", s.p);
    maybe(j, "seed", s.seed);
    if (j.contains("noise")) {
        const auto& nz = j.at("noise");
        maybe(nz, "radial_sd", s.radial_sd);
        maybe(nz, "jitter_sd", s.jitter_sd);
        maybe(nz, "spiral_a", s.spiral_a);
        maybe(nz, "spiral_b", s.spiral_b);
        maybe(nz, "theta_sd", s.theta_sd);
    }
    return s;
}

Json simspec_to_json(const SimSpec& s) {
    Json j;
    j["family"] = s.family;
    j["n"] = s.n;
    j["p"] = s.p;
    j["seed"] = s.seed;
    j["noise"] = Json{{"radial_sd", s.radial_sd},
                      {"jitter_sd", s.jitter_sd},
                      {"spiral_a", s.spiral_a},
                      {"spiral_b", s.spiral_b},
                      {"theta_sd", s.theta_sd}};
    return j;
}

// ---------------------------------------------------------------------------
// artifact writers
// ---------------------------------------------------------------------------

namespace {

DataMatrix resolve_data(const RunConfig& cfg) {
    const Json& d = cfg.at("data");
    if (d.contains("sim")) return generate(simspec_from_json(d.at("sim")));
    if (d.contains("csv")) {
        std::vector<std::string> drop;
        if (d.contains("drop_columns")) drop = d.at("drop_columns").get<std::vector<std::string>>();
        const std::string scale = d.contains("scale") ? d.at("scale").get<std::string>() : "none";
        return load_csv(d.at("csv").get<std::string>(), drop, scale);
    }
    throw ConfigError("data must contain either 'sim' or 'csv'");
}

std::string frames_csv_text(const std::vector<Frame>& frames, const std::vector<std::size_t>& anchors,
                            const std::vector<int>& stage) {
    const Eigen::Index p = frames.empty() ? 0 : frames.front().p();
    std::string out = "frame_id,anchor,stage";
    for (Eigen::Index i = 1; i <= p; ++i) {
        out += ",b" + std::to_string(i) + "1";
        out += ",b" + std::to_string(i) + "2";
    }
    out += '\n';
    std::vector<bool> is_anchor(frames.size(), false);
    for (const std::size_t a : anchors)
        if (a < frames.size()) is_anchor[a] = true;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        out += std::to_string(f);
        out += is_anchor[f] ? ",1" : ",0";
        out += ',' + std::to_string(f < stage.size() ? stage[f] : 0);
        for (Eigen::Index i = 0; i < p; ++i) {
            out += ',' + format_double(frames[f].basis(i, 0));
            out += ',' + format_double(frames[f].basis(i, 1));
        }
        out += '\n';
    }
    return out;
}

std::string traces_csv_text(const std::vector<std::string>& names, const Matrix& values,
                            const Matrix& eval_ms) {
    std::string out = "frame_id,index_name,value,eval_ms\n";
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            out += std::to_string(r);
            out += ',' + names[static_cast<std::size_t>(c)];
            out += ',' + format_double(values(r, c));
            out += ',' + format_double(eval_ms.size() > 0 ? eval_ms(r, c) : 0.0);
            out += '\n';
        }
    }
    return out;
}

struct Manifest {
    Json j;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    Manifest(const std::string& command, const RunConfig& cfg, const RunOptions& opt) {
        j["command"] = command;
        j["version"] = "0.1.0";
        j["seed"] = cfg.master_seed();
        j["config_fingerprint"] = config_fingerprint(cfg.raw);
        j["timing_enabled"] = opt.timing;
        j["config"] = cfg.raw;
    }

    void add(const fs::path& rel) { outputs.push_back(rel.string()); }

    void finish(const fs::path& dir) {
        j["outputs"] = outputs;
        j["wall_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        atomic_write_text(dir / "manifest.json", j.dump(2) + "\n");
    }
};

Frame parse_verify_target(const std::string& spec, Eigen::Index p) {
    if (spec.rfind("axes:", 0) == 0) {
        const std::string rest = spec.substr(5);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw ConfigError("verify target must be axes:i,j");
        const int i = std::atoi(rest.substr(0, comma).c_str());
        const int jj = std::atoi(rest.substr(comma + 1).c_str());
        return axis_frame(p, i - 1, jj - 1);  // 1-based variable positions
    }
    return read_frame_csv(spec);
}

// ---- subcommands -----------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir) {
    Manifest man("simulate", cfg, opt);
    const DataMatrix x = resolve_data(cfg);
    write_data_csv(dir / "data.csv", x);
    man.add("data.csv");
    man.finish(dir);
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir) {
    Manifest man("evaluate", cfg, opt);
    const DataMatrix x = resolve_data(cfg);
    const auto indexes = index_list_from_json(cfg.at("indexes"));
    const std::string frames_path = cfg.at("frames").get<std::string>();

    // frames.csv schema or a single-frame csv (p rows x 2 cols)
    const CsvFile raw = read_csv_raw(frames_path);
    std::vector<Frame> frames;
    if (raw.header.size() >= 3 && raw.header[0] == "frame_id") {
        const auto p = static_cast<Eigen::Index>((raw.header.size() - 3) / 2);
        for (const auto& row : raw.rows) {
            Frame f;
            f.basis.resize(p, 2);
            for (Eigen::Index i = 0; i < p; ++i) {
                f.basis(i, 0) = std::strtod(row[static_cast<std::size_t>(3 + 2 * i)].c_str(), nullptr);
                f.basis(i, 1) = std::strtod(row[static_cast<std::size_t>(4 + 2 * i)].c_str(), nullptr);
            }
            frames.push_back(std::move(f));
        }
    } else {
        frames.push_back(read_frame_csv(frames_path));
    }

    const Evaluator ev;
    Matrix values(static_cast<Eigen::Index>(frames.size()), static_cast<Eigen::Index>(indexes.size()));
    Matrix eval_ms = Matrix::Zero(values.rows(), values.cols());
    std::vector<std::string> names;
    for (const auto& d : indexes) names.push_back(d.name);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        check_frame(frames[f]);
        for (std::size_t ii = 0; ii < indexes.size(); ++ii) {
            const auto t0 = std::chrono::steady_clock::now();
            values(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(ii)) =
                frame_value(ev, x, indexes[ii], frames[f]);
            const auto t1 = std::chrono::steady_clock::now();
            if (opt.timing)
                eval_ms(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(ii)) =
                    std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
    }
    atomic_write_text(dir / "traces.csv", traces_csv_text(names, values, eval_ms));
    man.add("traces.csv");
    man.finish(dir);
    return 0;
}

int cmd_trace(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir) {
    Manifest man("trace", cfg, opt);
    const DataMatrix x = resolve_data(cfg);
    const auto indexes = index_list_from_json(cfg.at("indexes"));
    const Json& t = cfg.at("trace");
    const std::string kind = t.at("kind").get<std::string>();

    TraceResult tr;
    if (kind == "nuisance") {
        int steps = 41;
        maybe(t, "steps", steps);
        tr = trace_nuisance(x, indexes, steps);
    } else if (kind == "squint") {
        int steps_per_leg = 30;
        maybe(t, "steps_per_leg", steps_per_leg);
        tr = trace_squint(x, indexes, steps_per_leg);
    } else {
        throw ConfigError("trace kind must be nuisance or squint");
    }
    tr.config_fingerprint = fnv1a(cfg.raw.dump().data(), cfg.raw.dump().size());

    std::vector<int> stage(tr.path.size(), 0);
    atomic_write_text(dir / "frames.csv", frames_csv_text(tr.path, tr.leg_markers, stage));
    const Matrix zeros = Matrix::Zero(tr.values.rows(), tr.values.cols());
    atomic_write_text(dir / "traces.csv", traces_csv_text(tr.index_names, tr.values, zeros));
    man.add("frames.csv");
    man.add("traces.csv");
    man.finish(dir);
    return 0;
}

int cmd_optimize(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir) {
    Manifest man("optimize", cfg, opt);
    const DataMatrix x = resolve_data(cfg);
    const auto indexes = index_list_from_json(cfg.at("indexes"));
    const IndexDescriptor primary = indexes.front();
    const std::vector<IndexDescriptor> extras(indexes.begin() + 1, indexes.end());

    const Json& oj = cfg.at("optimizer");
    TourHistory h;
    if (oj.contains("method") && oj.at("method").get<std::string>() == "scout_refine") {
        OptimizerConfig scout;
        scout.method = "better";
        scout.cooling = 1.0;
        scout.alpha = 0.5;
        scout.max_tries = 5000;
        OptimizerConfig refine;
        refine.method = "geodesic";
        Json oj_base = oj;
        oj_base.erase("method");
        if (oj_base.contains("scout")) oj_base.erase("scout");
        if (oj_base.contains("refine")) oj_base.erase("refine");
        scout = optimizer_from_json(oj.contains("scout") ? Json(oj.at("scout")) : Json(), optimizer_from_json(oj_base, scout));
        refine = optimizer_from_json(oj.contains("refine") ? Json(oj.at("refine")) : Json(), optimizer_from_json(oj_base, refine));
        scout.method = "better";
        refine.method = "geodesic";
        h = scout_then_refine(x, primary, scout, refine, extras, opt.timing);
    } else {
        const OptimizerConfig oc = optimizer_from_json(oj);
        h = guided_tour(x, primary, oc, extras, std::nullopt, 0, opt.timing);
    }

    atomic_write_text(dir / "frames.csv", frames_csv_text(h.frames, h.anchors, h.stage));
    atomic_write_text(dir / "traces.csv", traces_csv_text(h.index_names, h.values, h.eval_ms));
    man.add("frames.csv");
    man.add("traces.csv");
    man.j["n_frames"] = h.frames.size();
    man.j["n_anchors"] = h.anchors.size();
    man.j["final_value"] = h.values(h.values.rows() - 1, 0);

    int rc = 0;
    std::string verify = opt.verify_target;
    if (verify.empty() && oj.contains("verify_target")) verify = oj.at("verify_target").get<std::string>();
    if (!verify.empty()) {
        const Frame target = parse_verify_target(verify, x.p());
        const double dist = proj_dist(h.frames[h.anchors.back()], target);
        man.j["verify_target"] = verify;
        man.j["verify_proj_dist"] = dist;
        std::cout << "verify proj_dist = " << format_double(dist) << "\n";
        if (opt.verify_dist_max >= 0.0 && dist > opt.verify_dist_max) rc = 4;
    }
    man.finish(dir);
    return rc;
}

int cmd_diagnose(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir) {
    Manifest man("diagnose", cfg, opt);
    const Json& dj = cfg.at("diagnose");
    const std::string kind = dj.at("kind").get<std::string>();
    const std::string fp = config_fingerprint(cfg.raw);

    if (kind == "percentile") {
        const auto indexes = index_list_from_json(cfg.at("indexes"));
        std::vector<std::string> families{"pipe", "sine", "spiral"};
        if (dj.contains("families")) families = dj.at("families").get<std::vector<std::string>>();
        int n = 1000, n_reps = 100, p = 6;
        maybe(dj, "n", n);
        maybe(dj, "n_reps", n_reps);
        maybe(dj, "p", p);
        const auto rows = percentile_table(families, indexes, n, n_reps, p, cfg.master_seed());
        std::string out = "# config_fingerprint=" + fp + "\nindex,family,role,p05,p95\n";
        for (const auto& r : rows)
            out += r.index + ',' + r.family + ',' + r.role + ',' + format_double(r.p05) + ',' +
                   format_double(r.p95) + '\n';
        atomic_write_text(dir / "percentile.csv", out);
        man.add("percentile.csv");
    } else if (kind == "rotation") {
        const DataMatrix x = resolve_data(cfg);
        const auto indexes = index_list_from_json(cfg.at("indexes"));
        int n_angles = 36;
        maybe(dj, "n_angles", n_angles);
        Eigen::Index c0 = x.p() - 2, c1 = x.p() - 1;
        if (dj.contains("cols")) {
            const auto cols = dj.at("cols").get<std::vector<int>>();
            if (cols.size() != 2) throw ConfigError("diagnose.cols must have two entries");
            c0 = cols[0] - 1;
            c1 = cols[1] - 1;
        }
        ProjectedData y;
        y.values.resize(x.n(), 2);
        y.values.col(0) = x.values.col(c0);
        y.values.col(1) = x.values.col(c1);
        const RotationScan scan = rotation_scan(y, indexes, n_angles);
        std::string out = "# config_fingerprint=" + fp + "\nangle,index_name,value\n";
        for (std::size_t a = 0; a < scan.angles.size(); ++a)
            for (std::size_t ii = 0; ii < scan.index_names.size(); ++ii)
                out += format_double(scan.angles[a]) + ',' + scan.index_names[ii] + ',' +
                       format_double(scan.values(static_cast<Eigen::Index>(a),
                                                 static_cast<Eigen::Index>(ii))) +
                       '\n';
        atomic_write_text(dir / "rotation.csv", out);
        man.add("rotation.csv");
    } else if (kind == "timing") {
        const auto indexes = index_list_from_json(cfg.at("indexes"));
        std::vector<int> sizes{100, 300, 1000};
        if (dj.contains("sizes")) sizes = dj.at("sizes").get<std::vector<int>>();
        int n_reps = 9;
        maybe(dj, "n_reps", n_reps);
        const auto rows = timing_benchmark(indexes, sizes, n_reps);
        std::string out = "# config_fingerprint=" + fp + "\nindex,n,median_ms\n";
        for (const auto& r : rows)
            out += r.index + ',' + std::to_string(r.n) + ',' + format_double(r.median_ms) + '\n';
        atomic_write_text(dir / "timing.csv", out);
        man.add("timing.csv");
    } else if (kind == "sweep") {
        const DataMatrix x = resolve_data(cfg);
        const auto indexes = index_list_from_json(cfg.at("indexes"));
        const std::string param = dj.at("param").get<std::string>();
        const auto values = dj.at("values").get<std::vector<double>>();
        const auto rows = parameter_sweep(x, indexes.front(), param, values);
        std::string out = "# config_fingerprint=" + fp + "\nvalue,structured_score,noise_score,trace_masd\n";
        for (const auto& r : rows)
            out += format_double(r.value) + ',' + format_double(r.structured_score) + ',' +
                   format_double(r.noise_score) + ',' + format_double(r.trace_masd) + '\n';
        atomic_write_text(dir / "sweep.csv", out);
        man.add("sweep.csv");
    } else if (kind == "squint") {
        const DataMatrix x = resolve_data(cfg);
        const auto indexes = index_list_from_json(cfg.at("indexes"));
        double threshold = 0.8;
        int n_dirs = 20;
        double max_angle = 0.7853981633974483;
        maybe(dj, "threshold", threshold);
        maybe(dj, "n_dirs", n_dirs);
        maybe(dj, "max_angle", max_angle);
        std::string target_spec = "axes:" + std::to_string(x.p() - 1) + "," + std::to_string(x.p());
        if (dj.contains("target")) target_spec = dj.at("target").get<std::string>();
        const Frame target = parse_verify_target(target_spec, x.p());
        Rng rng(cfg.master_seed());
        const SquintEstimate est =
            squint_angle_estimate(x, indexes.front(), target, threshold, n_dirs, rng, max_angle);
        std::string out = "# config_fingerprint=" + fp + "\nstat,value\n";
        out += "median," + format_double(est.median) + '\n';
        out += "q25," + format_double(est.q25) + '\n';
        out += "q75," + format_double(est.q75) + '\n';
        out += "value_at_target," + format_double(est.value_at_target) + '\n';
        for (std::size_t i = 0; i < est.angles.size(); ++i)
            out += "angle" + std::to_string(i) + ',' + format_double(est.angles[i]) + '\n';
        atomic_write_text(dir / "squint.csv", out);
        man.add("squint.csv");
    } else {
        throw ConfigError("unknown diagnose kind: " + kind);
    }
    man.finish(dir);
    return 0;
}

int cmd_plot(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir) {
    Manifest man("plot", cfg, opt);
    const Json& pj = cfg.at("plot");

    if (pj.contains("traces")) {
        const CsvFile raw = read_csv_raw(pj.at("traces").get<std::string>());
        if (raw.rows.empty()) throw EmptyTrace("traces file has no rows");
        std::vector<std::string> names;
        std::vector<std::vector<double>> cols;
        long max_frame = -1;
        for (const auto& row : raw.rows)
            max_frame = std::max(max_frame, std::strtol(row[0].c_str(), nullptr, 10));
        for (const auto& row : raw.rows) {
            const std::string& name = row[1];
            std::size_t ci = 0;
            for (; ci < names.size(); ++ci)
                if (names[ci] == name) break;
            if (ci == names.size()) {
                names.push_back(name);
                cols.emplace_back(static_cast<std::size_t>(max_frame + 1),
                                  std::numeric_limits<double>::quiet_NaN());
            }
            const long fid = std::strtol(row[0].c_str(), nullptr, 10);
            cols[ci][static_cast<std::size_t>(fid)] = std::strtod(row[2].c_str(), nullptr);
        }
        Matrix values(max_frame + 1, static_cast<Eigen::Index>(names.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (long r = 0; r <= max_frame; ++r)
                values(r, static_cast<Eigen::Index>(c)) = cols[c][static_cast<std::size_t>(r)];

        std::vector<std::size_t> markers;
        if (pj.contains("frames")) {
            const CsvFile fr = read_csv_raw(pj.at("frames").get<std::string>());
            for (const auto& row : fr.rows)
                if (row.size() >= 2 && row[1] == "1")
                    markers.push_back(static_cast<std::size_t>(std::strtol(row[0].c_str(), nullptr, 10)));
        }
        TracePlotOptions topt;
        if (pj.contains("title")) topt.title = pj.at("title").get<std::string>();
        atomic_write_text(dir / "trace.svg", render_trace_svg(names, values, markers, topt));
        man.add("trace.svg");
    } else if (pj.contains("scatter")) {
        const DataMatrix x = resolve_data(cfg);
        const auto& sj = pj.at("scatter");
        ProjectedData y;
        ScatterPlotOptions sopt;
        if (sj.contains("frame")) {
            const Frame f = read_frame_csv(sj.at("frame").get<std::string>());
            y = project(x, f);
            sopt.xlabel = "proj1";
            sopt.ylabel = "proj2";
        } else {
            const auto cols = sj.at("cols").get<std::vector<int>>();
            if (cols.size() != 2) throw ConfigError("scatter.cols must have two entries");
            y.values.resize(x.n(), 2);
            y.values.col(0) = x.values.col(cols[0] - 1);
            y.values.col(1) = x.values.col(cols[1] - 1);
            sopt.xlabel = x.column_names[static_cast<std::size_t>(cols[0] - 1)];
            sopt.ylabel = x.column_names[static_cast<std::size_t>(cols[1] - 1)];
        }
        if (sj.contains("radius")) sopt.radius = sj.at("radius").get<double>();
        if (sj.contains("opacity")) sopt.opacity = sj.at("opacity").get<double>();
        if (pj.contains("title")) sopt.title = pj.at("title").get<std::string>();
        atomic_write_text(dir / "scatter.svg", render_scatter_svg(y.values, sopt));
        man.add("scatter.svg");
    } else {
        throw ConfigError("plot needs either 'traces' or 'scatter'");
    }
    man.finish(dir);
    return 0;
}

} // namespace

int run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opt) {
    try {
        const fs::path dir = opt.output_dir.empty() ? cfg.output_dir() : opt.output_dir;
        fs::create_directories(dir);
        if (command == "simulate") return cmd_simulate(cfg, opt, dir);
        if (command == "evaluate") return cmd_evaluate(cfg, opt, dir);
        if (command == "trace") return cmd_trace(cfg, opt, dir);
        if (command == "optimize") return cmd_optimize(cfg, opt, dir);
        if (command == "diagnose") return cmd_diagnose(cfg, opt, dir);
        if (command == "plot") return cmd_plot(cfg, opt, dir);
        throw ConfigError("unknown command: " + command);
    } catch (const ConfigError& e) {
        std::cerr << R"({"error":"config","message":")" << e.what() << "\"}\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << R"({"error":"data","message":")" << e.what() << "\"}\n";
        return 3;
    } catch (const EvaluationError& e) {
        std::cerr << R"({"error":"evaluation","message":")" << e.what() << "\"}\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << R"({"error":"internal","message":")" << e.what() << "\"}\n";
        return 4;
    }
}

} // namespace pptour
