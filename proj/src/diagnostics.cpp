#include "pptour/diagnostics.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "pptour/errors.hpp"
#include "pptour/kernels.hpp"
#include "pptour/stats.hpp"

namespace pptour {

namespace {

TraceResult evaluate_path(const DataMatrix& x, std::vector<Frame> path,
                          const std::vector<IndexDescriptor>& indexes,
                          std::vector<std::size_t> markers) {
    const Evaluator ev;
    TraceResult t;
    t.path = std::move(path);
    t.leg_markers = std::move(markers);
    for (const auto& d : indexes) t.index_names.push_back(d.name);
    const auto nf = static_cast<Eigen::Index>(t.path.size());
    const auto ni = static_cast<Eigen::Index>(indexes.size());
    t.values.resize(nf, ni);

    // warm the tic calibration outside the parallel region
    for (const auto& d : indexes)
        if (d.name == "tic") ev.tic_calibration(static_cast<int>(x.n()), d.params);

    const bool par = kernels::parallel_enabled() && !omp_in_parallel();
    const Eigen::Index cells = nf * ni;
#pragma omp parallel for schedule(dynamic) if (par)
    for (Eigen::Index c = 0; c < cells; ++c) {
        const Eigen::Index fi = c / ni, ii = c % ni;
        double v;
        try {
            v = frame_value(ev, x, indexes[static_cast<std::size_t>(ii)], t.path[static_cast<std::size_t>(fi)]);
        } catch (const std::exception&) {
            v = std::numeric_limits<double>::quiet_NaN();  // invalid cell
        }
        t.values(fi, ii) = v;
    }
    return t;
}

} // namespace

TraceResult trace_nuisance(const DataMatrix& x, const std::vector<IndexDescriptor>& indexes,
                           int steps) {
    x.validate();
    if (x.p() < 4) throw ShapeError("nuisance trace needs p >= 4");
    auto path = geodesic_path(axis_frame(x.p(), 0, 1), axis_frame(x.p(), 2, 3), steps);
    return evaluate_path(x, std::move(path), indexes, {});
}

TraceResult trace_squint(const DataMatrix& x, const std::vector<IndexDescriptor>& indexes,
                         int steps_per_leg) {
    x.validate();
    const Eigen::Index p = x.p();
    if (p < 4) throw ShapeError("squint trace needs p >= 4");
    if (steps_per_leg < 2) throw InvalidParameter("steps_per_leg must be >= 2");
    const Frame start = axis_frame(p, 0, 1);
    const Frame mid = axis_frame(p, 0, p - 2);
    const Frame end = axis_frame(p, p - 2, p - 1);
    auto leg1 = geodesic_path(start, mid, steps_per_leg);
    auto leg2 = geodesic_path(mid, end, steps_per_leg);
    std::vector<Frame> path = std::move(leg1);
    for (std::size_t i = 1; i < leg2.size(); ++i) path.push_back(leg2[i]);
    return evaluate_path(x, std::move(path), indexes,
                         {static_cast<std::size_t>(steps_per_leg - 1)});
}

RotationScan rotation_scan(const ProjectedData& y, const std::vector<IndexDescriptor>& indexes,
                           int n_angles) {
    if (n_angles < 8) throw InvalidParameter("rotation scan needs n_angles >= 8");
    const Evaluator ev;
    RotationScan s;
    for (const auto& d : indexes) s.index_names.push_back(d.name);
    s.values.resize(n_angles, static_cast<Eigen::Index>(indexes.size()));
    constexpr double kPi = 3.14159265358979323846;
    for (int a = 0; a < n_angles; ++a) s.angles.push_back(kPi * a / n_angles);

    for (const auto& d : indexes)
        if (d.name == "tic") ev.tic_calibration(static_cast<int>(y.n()), d.params);

    const bool par = kernels::parallel_enabled() && !omp_in_parallel();
#pragma omp parallel for schedule(dynamic) if (par)
    for (int a = 0; a < n_angles; ++a) {
        const double th = kPi * a / n_angles;
        Matrix2 r;
        r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        const ProjectedData rotated{y.values * r};
        for (std::size_t ii = 0; ii < indexes.size(); ++ii)
            s.values(a, static_cast<Eigen::Index>(ii)) = ev(indexes[ii], rotated);
    }
    return s;
}

std::vector<PercentileRow> percentile_table(const std::vector<std::string>& families,
                                            const std::vector<IndexDescriptor>& indexes, int n,
                                            int n_reps, int p, std::uint64_t master_seed) {
    if (n_reps < 2) throw InvalidParameter("percentile table needs n_reps >= 2");
    const Evaluator ev;
    for (const auto& d : indexes)
        if (d.name == "tic") ev.tic_calibration(n, d.params);

    const auto nfam = families.size();
    const auto nidx = indexes.size();
    // values[family][rep][role][index]
    std::vector<double> vals(nfam * static_cast<std::size_t>(n_reps) * 2 * nidx, 0.0);
    auto slot = [&](std::size_t fam, int rep, int role, std::size_t idx) -> double& {
        return vals[((fam * static_cast<std::size_t>(n_reps) + static_cast<std::size_t>(rep)) * 2 +
                     static_cast<std::size_t>(role)) *
                        nidx +
                    idx];
    };

    const bool par = kernels::parallel_enabled() && !omp_in_parallel();
    const int jobs = static_cast<int>(nfam) * n_reps;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int job = 0; job < jobs; ++job) {
        const auto fam = static_cast<std::size_t>(job / n_reps);
        const int rep = job % n_reps;
        SimSpec spec;
        spec.family = families[fam];
        spec.n = n;
        spec.p = p;
        std::uint64_t h = master_seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(job) + 1));
        spec.seed = Rng::splitmix64(h);
        const DataMatrix x = generate(spec);
        for (int role = 0; role < 2; ++role) {
            ProjectedData y;
            y.values.resize(x.n(), 2);
            const Eigen::Index c0 = role == 0 ? 0 : x.p() - 2;
            y.values.col(0) = x.values.col(c0);
            y.values.col(1) = x.values.col(c0 + 1);
            for (std::size_t ii = 0; ii < nidx; ++ii) slot(fam, rep, role, ii) = ev(indexes[ii], y);
        }
    }

    std::vector<PercentileRow> rows;
    for (std::size_t ii = 0; ii < nidx; ++ii) {
        for (std::size_t fam = 0; fam < nfam; ++fam) {
            for (int role = 0; role < 2; ++role) {
                std::vector<double> v;
                v.reserve(static_cast<std::size_t>(n_reps));
                for (int rep = 0; rep < n_reps; ++rep) v.push_back(slot(fam, rep, role, ii));
                std::sort(v.begin(), v.end());
                rows.push_back(PercentileRow{indexes[ii].name, families[fam],
                                             role == 0 ? "noise" : "structure",
                                             quantile_sorted(v, 0.05), quantile_sorted(v, 0.95)});
            }
        }
    }
    return rows;
}

SquintEstimate squint_angle_estimate(const DataMatrix& x, const IndexDescriptor& index,
                                     const Frame& target, double threshold, int n_dirs, Rng& rng,
                                     double max_angle) {
    x.validate();
    check_frame(target);
    if (n_dirs < 1) throw InvalidParameter("squint estimate needs n_dirs >= 1");
    const Evaluator ev;
    const double v0 = frame_value(ev, x, index, target);
    if (v0 <= 0.0) throw NoStructureAtTarget("index value at the target plane is not positive");
    const double cut = threshold * v0;

    SquintEstimate est;
    est.value_at_target = v0;
    for (int d = 0; d < n_dirs; ++d) {
        Geodesic geo(target, random_frame(x.p(), rng));
        if (geo.degenerate()) {
            --d;
            continue;
        }
        auto g = [&](double ang) { return frame_value(ev, x, index, geo.at_angle(ang)); };
        double angle;
        if (g(max_angle) >= cut) {
            angle = max_angle;  // saturated at the search bound
        } else {
            double lo = 0.0, hi = max_angle;
            for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
                const double mid = 0.5 * (lo + hi);
                (g(mid) >= cut ? lo : hi) = mid;
            }
            angle = lo;
        }
        est.angles.push_back(angle);
    }
    std::vector<double> sorted = est.angles;
    std::sort(sorted.begin(), sorted.end());
    est.median = quantile_sorted(sorted, 0.5);
    est.q25 = quantile_sorted(sorted, 0.25);
    est.q75 = quantile_sorted(sorted, 0.75);
    return est;
}

std::vector<TimingRow> timing_benchmark(const std::vector<IndexDescriptor>& indexes,
                                        const std::vector<int>& sizes, int n_reps) {
    if (sizes.empty()) throw InvalidParameter("timing benchmark needs at least one size");
    const Evaluator ev;
    std::vector<TimingRow> rows;
    const bool was_parallel = kernels::parallel_enabled();
    kernels::set_parallel_enabled(false);  // single thread for stable medians
    for (const auto& d : indexes) {
        for (const int n : sizes) {
            Rng rng(0xbe0c5eedULL ^ static_cast<std::uint64_t>(n));
            ProjectedData y;
            y.values.resize(n, 2);
            for (int i = 0; i < n; ++i) {
                y.values(i, 0) = rng.normal();
                y.values(i, 1) = rng.normal();
            }
            if (d.name == "tic") ev.tic_calibration(n, d.params);
            std::vector<double> ms;
            ms.reserve(static_cast<std::size_t>(n_reps));
            for (int r = 0; r < n_reps; ++r) {
                const auto t0 = std::chrono::steady_clock::now();
                volatile double sink = ev(d, y);
                (void)sink;
                const auto t1 = std::chrono::steady_clock::now();
                ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            }
            rows.push_back(TimingRow{d.name, n, median_of(ms)});
        }
    }
    kernels::set_parallel_enabled(was_parallel);
    return rows;
}

std::vector<double> trace_masd(const TraceResult& t) {
    std::vector<double> out;
    for (Eigen::Index c = 0; c < t.values.cols(); ++c) {
        std::vector<double> col;
        col.reserve(static_cast<std::size_t>(t.values.rows()));
        for (Eigen::Index r = 0; r < t.values.rows(); ++r)
            if (std::isfinite(t.values(r, c))) col.push_back(t.values(r, c));
        out.push_back(masd(col));
    }
    return out;
}

std::vector<SweepRow> parameter_sweep(const DataMatrix& x, const IndexDescriptor& index,
                                      const std::string& param_name,
                                      const std::vector<double>& values) {
    x.validate();
    if (x.p() < 4) throw ShapeError("parameter sweep needs p >= 4");
    const bool scag = index.name == "convex1m" || index.name == "skinny" || index.name == "stringy";
    const bool info = index.name == "mic" || index.name == "tic";
    auto apply = [&](IndexDescriptor d, double v) {
        if (param_name == "bin_cap" && scag)
            d.params.bin_cap = static_cast<int>(v);
        else if (param_name == "bin_max_cells" && scag)
            d.params.bin_max_cells = static_cast<int>(v);
        else if (param_name == "alpha_override" && scag)
            d.params.alpha_override = v;
        else if (param_name == "mic_exponent" && info)
            d.params.mic_exponent = v;
        else if (param_name == "mic_candidates" && info)
            d.params.mic_candidates = static_cast<int>(v);
        else if (param_name == "spline_basis" && index.name == "splines2d")
            d.params.spline_basis = static_cast<int>(v);
        else
            throw InvalidParameter("parameter " + param_name + " does not apply to " + index.name);
        return d;
    };

    const Evaluator ev;
    std::vector<SweepRow> rows;
    for (const double v : values) {
        const IndexDescriptor d = apply(index, v);
        ProjectedData noise, structured;
        noise.values.resize(x.n(), 2);
        structured.values.resize(x.n(), 2);
        noise.values << x.values.col(0), x.values.col(1);
        structured.values << x.values.col(x.p() - 2), x.values.col(x.p() - 1);
        SweepRow row;
        row.value = v;
        row.structured_score = ev(d, structured);
        row.noise_score = ev(d, noise);
        row.trace_masd = trace_masd(trace_nuisance(x, {d}))[0];
        rows.push_back(row);
    }
    return rows;
}

IndexDescriptor smooth_index(const IndexDescriptor& index, int window, const std::string& method) {
    if (window < 1 || window % 2 == 0) throw InvalidParameter("smoothing window must be odd and >= 1");
    if (method != "mean" && method != "median") throw InvalidParameter("smoothing method must be mean or median");
    IndexDescriptor d = index;
    d.params.smooth_window = window;
    d.params.smooth_method = method;
    return d;
}

} // namespace pptour
