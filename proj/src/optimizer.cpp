#include "pptour/optimizer.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pptour/errors.hpp"
#include "pptour/kernels.hpp"
#include "pptour/stats.hpp"

namespace pptour {

namespace {

constexpr int kBatch = 16;  // fixed so results do not depend on thread count

std::uint64_t frame_hash(const Frame& f) {
    return fnv1a(f.basis.data(), sizeof(double) * static_cast<std::size_t>(f.basis.size()));
}

} // namespace

double frame_value(const Evaluator& ev, const DataMatrix& x, const IndexDescriptor& d,
                   const Frame& f) {
    if (d.params.smooth_window < 3) return ev(d, project(x, f));
    IndexDescriptor raw = d;
    raw.params.smooth_window = 1;
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(d.params.smooth_window));
    vals.push_back(ev(raw, project(x, f)));
    Rng jrng(frame_hash(f) ^ 0x736d6f6f7468ULL);
    for (int k = 1; k < d.params.smooth_window; ++k) {
        const Frame target = random_frame(f.p(), jrng);
        const Geodesic geo(f, target);
        const Frame jittered = geo.degenerate() ? f : geo.at_angle(d.params.probe_step);
        vals.push_back(ev(raw, project(x, jittered)));
    }
    return d.params.smooth_method == "median" ? median_of(vals) : mean_of(vals);
}

FrameObjective::FrameObjective(const Evaluator& ev, const DataMatrix& x, IndexDescriptor desc)
    : ev_(&ev), x_(&x), desc_(std::move(desc)) {}

double FrameObjective::operator()(const Frame& f) const { return frame_value(*ev_, *x_, desc_, f); }

Frame sample_in_window(const Frame& current, double window, Rng& rng) {
    double wmax = 1.0;
    Frame cand = current;
    for (int attempt = 0; attempt < 256; ++attempt) {
        const Frame r = random_frame(current.p(), rng);
        const double w = rng.uniform(0.0, wmax);
        try {
            cand = orthonormalize((1.0 - w) * current.basis + w * r.basis);
        } catch (const DegeneratePlane&) {
            continue;
        }
        if (proj_dist(cand, current) <= window) return cand;
        wmax *= 0.8;
    }
    return cand;
}

namespace {

// Evaluate candidates generated by `gen` in fixed-size batches; return the
// first (in generation order) that improves on current_value by more than tol.
SearchOutcome batched_search(const FrameObjective& f, double current_value, double tol,
                             int max_tries, const std::function<Frame()>& gen) {
    SearchOutcome out;
    int evals = 0;
    std::vector<Frame> batch;
    std::vector<double> vals;
    while (evals < max_tries) {
        const int bs = std::min(kBatch, max_tries - evals);
        batch.clear();
        for (int i = 0; i < bs; ++i) batch.push_back(gen());
        vals.assign(static_cast<std::size_t>(bs), 0.0);
        const bool par = kernels::parallel_enabled() && !omp_in_parallel();
#pragma omp parallel for schedule(dynamic) if (par)
        for (int i = 0; i < bs; ++i) vals[static_cast<std::size_t>(i)] = f(batch[static_cast<std::size_t>(i)]);
        evals += bs;
        for (int i = 0; i < bs; ++i) {
            if (vals[static_cast<std::size_t>(i)] > current_value + tol) {
                out.found = true;
                out.frame = batch[static_cast<std::size_t>(i)];
                out.value = vals[static_cast<std::size_t>(i)];
                out.evals = evals;
                return out;
            }
        }
    }
    out.evals = evals;
    return out;
}

} // namespace

SearchOutcome search_better_random(const Frame& current, double current_value,
                                   const FrameObjective& f, const OptimizerConfig& cfg, Rng& rng,
                                   double window) {
    auto gen = [&]() {
        if (cfg.local_fraction > 0.0 && rng.uniform() < cfg.local_fraction)
            return sample_in_window(current, window, rng);
        return random_frame(current.p(), rng);
    };
    return batched_search(f, current_value, cfg.tol, cfg.max_tries, gen);
}

SearchOutcome search_better(const Frame& current, double current_value, const FrameObjective& f,
                            const OptimizerConfig& cfg, Rng& rng, double window) {
    auto gen = [&]() { return sample_in_window(current, window, rng); };
    return batched_search(f, current_value, cfg.tol, cfg.max_tries, gen);
}

SearchOutcome search_geodesic(const Frame& current, double current_value, const FrameObjective& f,
                              const OptimizerConfig& cfg, Rng& rng) {
    SearchOutcome out;
    int evals = 0;
    const int probes = 2 * std::max(1, cfg.n_dir);
    const int line_budget = 34;
    const bool par = kernels::parallel_enabled() && !omp_in_parallel();

    while (evals + probes + line_budget <= cfg.max_tries) {
        // probe a few random directions with a small angular step
        std::vector<Geodesic> dirs;
        dirs.reserve(static_cast<std::size_t>(cfg.n_dir));
        for (int j = 0; j < cfg.n_dir; ++j) {
            const Frame target = random_frame(current.p(), rng);
            Geodesic geo(current, target);
            if (geo.degenerate()) {
                --j;  // same plane drawn; try again
                continue;
            }
            dirs.push_back(std::move(geo));
        }
        std::vector<double> pv(static_cast<std::size_t>(probes), 0.0);
#pragma omp parallel for schedule(dynamic) if (par)
        for (int k = 0; k < probes; ++k) {
            const Geodesic& geo = dirs[static_cast<std::size_t>(k / 2)];
            const double ang = (k % 2 == 0) ? cfg.probe_step : -cfg.probe_step;
            pv[static_cast<std::size_t>(k)] = f(geo.at_angle(ang));
        }
        evals += probes;
        int best_k = 0;
        for (int k = 1; k < probes; ++k)
            if (pv[static_cast<std::size_t>(k)] > pv[static_cast<std::size_t>(best_k)]) best_k = k;
        const Geodesic& geo = dirs[static_cast<std::size_t>(best_k / 2)];

        // golden-section maximization over [-line_window, line_window]
        const double gr = 0.6180339887498949;
        double a = -cfg.line_window, b = cfg.line_window;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = f(geo.at_angle(x1)), f2 = f(geo.at_angle(x2));
        evals += 2;
        for (int it = 0; it < line_budget - 2; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = f(geo.at_angle(x2));
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = f(geo.at_angle(x1));
            }
            ++evals;
        }
        const double theta = f1 > f2 ? x1 : x2;
        const double val = std::max(f1, f2);
        if (val > current_value + cfg.tol) {
            out.found = true;
            out.frame = geo.at_angle(theta);
            out.value = val;
            out.evals = evals;
            return out;
        }
    }
    out.evals = evals;
    return out;
}

namespace {

// rotate every frame of the path within-plane so the final frame lands
// exactly on the accepted candidate basis (keeps recorded anchor values
// identical to the search result for rotation-variant indexes)
void align_path_to_target(std::vector<Frame>& path, const Frame& target) {
    if (path.empty()) return;
    const Matrix2 m = path.back().basis.transpose() * target.basis;
    Eigen::JacobiSVD<Matrix2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix2 r = svd.matrixU() * svd.matrixV().transpose();
    for (auto& f : path) f.basis = f.basis * r;
    path.back() = target;
}

} // namespace

TourHistory guided_tour(const DataMatrix& x, const IndexDescriptor& desc,
                        const OptimizerConfig& cfg, const std::vector<IndexDescriptor>& extras,
                        const std::optional<Frame>& start, int stage, bool record_timing) {
    x.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Evaluator ev;
    const FrameObjective objective(ev, x, desc);

    TourHistory h;
    h.primary = desc.name;
    h.config = cfg;
    h.data_fingerprint = fnv1a(x.values.data(), sizeof(double) * static_cast<std::size_t>(x.values.size()));
    h.index_names.push_back(desc.name);
    std::vector<IndexDescriptor> all{desc};
    for (const auto& e : extras) {
        all.push_back(e);
        h.index_names.push_back(e.name);
    }
    const auto ni = static_cast<Eigen::Index>(all.size());
    h.values.resize(0, ni);
    h.eval_ms.resize(0, ni);

    auto record = [&](const Frame& f) {
        h.frames.push_back(f);
        h.stage.push_back(stage);
        h.values.conservativeResize(h.values.rows() + 1, ni);
        h.eval_ms.conservativeResize(h.eval_ms.rows() + 1, ni);
        const Eigen::Index r = h.values.rows() - 1;
        for (Eigen::Index k = 0; k < ni; ++k) {
            const auto e0 = std::chrono::steady_clock::now();
            h.values(r, k) = frame_value(ev, x, all[static_cast<std::size_t>(k)], f);
            const auto e1 = std::chrono::steady_clock::now();
            h.eval_ms(r, k) =
                record_timing ? std::chrono::duration<double, std::milli>(e1 - e0).count() : 0.0;
        }
    };

    Rng rng(cfg.seed);
    Frame current = start.has_value() ? *start : random_frame(x.p(), rng);
    record(current);
    h.anchors.push_back(0);
    double cur_val = h.values(0, 0);
    double window = cfg.alpha;

    while (true) {
        SearchOutcome res;
        if (cfg.method == "better_random")
            res = search_better_random(current, cur_val, objective, cfg, rng, window);
        else if (cfg.method == "better")
            res = search_better(current, cur_val, objective, cfg, rng, window);
        else if (cfg.method == "geodesic")
            res = search_geodesic(current, cur_val, objective, cfg, rng);
        else
            throw InvalidParameter("unknown optimizer method: " + cfg.method);
        if (!res.found) break;
        if (cfg.method == "better" || cfg.method == "better_random") window *= cfg.cooling;

        std::vector<Frame> path = geodesic_path(current, res.frame, cfg.interp_steps + 1);
        align_path_to_target(path, res.frame);
        for (std::size_t i = 1; i < path.size(); ++i) record(path[i]);
        h.anchors.push_back(h.frames.size() - 1);
        current = res.frame;
        cur_val = res.value;
    }

    h.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return h;
}

TourHistory scout_then_refine(const DataMatrix& x, const IndexDescriptor& desc,
                              const OptimizerConfig& cfg_scout, const OptimizerConfig& cfg_refine,
                              const std::vector<IndexDescriptor>& extras, bool record_timing) {
    if (cfg_scout.method != "better" || cfg_scout.cooling != 1.0)
        throw InvalidParameter("scout stage must use method 'better' with cooling 1.0");
    if (cfg_refine.method != "geodesic")
        throw InvalidParameter("refine stage must use method 'geodesic'");

    TourHistory scout = guided_tour(x, desc, cfg_scout, extras, std::nullopt, 0, record_timing);
    const Frame best = scout.frames[scout.anchors.back()];
    TourHistory refine = guided_tour(x, desc, cfg_refine, extras, best, 1, record_timing);

    // concatenate, dropping refine's duplicated start frame
    TourHistory out = scout;
    out.wall_ms = scout.wall_ms + refine.wall_ms;
    const std::size_t offset = scout.frames.size() - 1;
    for (std::size_t i = 1; i < refine.frames.size(); ++i) {
        out.frames.push_back(refine.frames[i]);
        out.stage.push_back(refine.stage[i]);
    }
    const Eigen::Index old_rows = out.values.rows();
    out.values.conservativeResize(old_rows + refine.values.rows() - 1, out.values.cols());
    out.eval_ms.conservativeResize(out.values.rows(), out.values.cols());
    for (Eigen::Index r = 1; r < refine.values.rows(); ++r) {
        out.values.row(old_rows + r - 1) = refine.values.row(r);
        out.eval_ms.row(old_rows + r - 1) = refine.eval_ms.row(r);
    }
    for (std::size_t a = 1; a < refine.anchors.size(); ++a)
        out.anchors.push_back(refine.anchors[a] + offset);
    return out;
}

} // namespace pptour
