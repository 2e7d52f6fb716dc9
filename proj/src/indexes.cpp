#include "pptour/indexes.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pptour/errors.hpp"
#include "pptour/kernels.hpp"
#include "pptour/rng.hpp"
#include "pptour/scaggeom.hpp"
#include "pptour/stats.hpp"

namespace pptour {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool use_omp() { return kernels::parallel_enabled() && !omp_in_parallel(); }

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

double omega_of(const SpanningTree& t) {
    std::vector<double> lens;
    lens.reserve(t.edges.size());
    for (const auto& e : t.edges) lens.push_back(e.length);
    std::sort(lens.begin(), lens.end());
    const double q25 = quantile_sorted(lens, 0.25);
    const double q75 = quantile_sorted(lens, 0.75);
    return q75 + 1.5 * (q75 - q25);
}

} // namespace

ScagMeasures scag_measures(const ProjectedData& y, const IndexParams& p) {
    ScagMeasures out;
    BinnedPoints b;
    try {
        b = bin_points(y, p.bin_cap, p.bin_max_cells);
    } catch (const DegenerateSpread&) {
        // zero extent in a coordinate: a line (or a point)
        out.degenerate = true;
        out.convex1m = 0.0;
        out.skinny = 1.0;
        out.stringy = 1.0;
        return out;
    }
    out.grid = b.grid;
    out.n_binned = static_cast<int>(b.m());
    if (b.m() < 2) {
        out.degenerate = true;
        out.convex1m = 0.0;
        out.skinny = 0.0;
        out.stringy = 0.0;
        return out;
    }

    SpanningTree tree = mst(b);
    double omega = omega_of(tree);

    MatrixN2 pts = b.points;
    if (p.peel_outliers) {
        // an outlier has all of its MST edges longer than omega
        std::vector<double> min_edge(static_cast<std::size_t>(pts.rows()), 1e300);
        for (const auto& e : tree.edges) {
            min_edge[static_cast<std::size_t>(e.i)] = std::min(min_edge[static_cast<std::size_t>(e.i)], e.length);
            min_edge[static_cast<std::size_t>(e.j)] = std::min(min_edge[static_cast<std::size_t>(e.j)], e.length);
        }
        std::vector<int> keep;
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            if (min_edge[static_cast<std::size_t>(i)] <= omega) keep.push_back(static_cast<int>(i));
        if (keep.size() >= 3 && static_cast<Eigen::Index>(keep.size()) < pts.rows()) {
            MatrixN2 kept(static_cast<Eigen::Index>(keep.size()), 2);
            for (std::size_t k = 0; k < keep.size(); ++k) kept.row(static_cast<Eigen::Index>(k)) = pts.row(keep[k]);
            pts = std::move(kept);
            tree = mst(pts);
            omega = omega_of(tree);
        }
    }

    out.stringy = tree.total_length > 0.0 ? tree.diameter / tree.total_length : 0.0;
    out.alpha = p.alpha_override > 0.0 ? p.alpha_override : omega;

    BinnedPoints peeled;
    peeled.points = pts;
    peeled.weights.assign(static_cast<std::size_t>(pts.rows()), 1);
    peeled.grid = b.grid;
    try {
        const Triangulation tri = delaunay(peeled);
        const Hull ch = convex_hull(peeled);
        const Hull ah = alpha_hull(tri, out.alpha);
        out.convex1m = ch.area > 0.0 ? clip01(1.0 - ah.area / ch.area) : 0.0;
        if (ah.perimeter <= 0.0)
            out.skinny = 0.0;
        else if (ah.area <= 0.0)
            out.skinny = 1.0;
        else
            out.skinny = clip01(1.0 - std::sqrt(4.0 * kPi * ah.area) / ah.perimeter);
        if (ch.area <= 0.0) out.degenerate = true;
    } catch (const CollinearInput&) {
        out.degenerate = true;
        out.convex1m = 0.0;
        out.skinny = 1.0;
    }
    return out;
}

IndexResult idx_convex1m(const ProjectedData& y, const IndexParams& p) {
    const ScagMeasures s = scag_measures(y, p);
    return IndexResult{s.convex1m, 1.0 - s.convex1m, s.degenerate};
}

IndexResult idx_skinny(const ProjectedData& y, const IndexParams& p) {
    const ScagMeasures s = scag_measures(y, p);
    return IndexResult{s.skinny, s.skinny, s.degenerate};
}

IndexResult idx_stringy(const ProjectedData& y, const IndexParams& p) {
    const ScagMeasures s = scag_measures(y, p);
    return IndexResult{clip01(s.stringy), s.stringy, s.degenerate};
}

IndexResult idx_dcor2d(const ProjectedData& y, const IndexParams&) {
    if (y.n() < 4) throw IndexEvaluationError("dcor2d needs n >= 4");
    const Vector x0 = y.values.col(0);
    const Vector x1 = y.values.col(1);
    const kernels::DcorStats s = use_omp() ? kernels::dcor_omp(x0, x1) : kernels::dcor_serial(x0, x1);
    return IndexResult{clip01(s.dcor), s.dcor, s.dvarx <= 0.0 || s.dvary <= 0.0};
}

// ---------------------------------------------------------------------------
// splines2d: penalized cubic B-spline regression, smoothing level by GCV
// ---------------------------------------------------------------------------

namespace {

// cubic B-spline basis values at t in [0,1] on a clamped uniform knot vector
// with nb basis functions; fills 4 weights and the first basis index
void bspline_row(double t, int nb, double* w, int* first) {
    const int nseg = nb - 3;
    int seg = std::min(static_cast<int>(t * nseg), nseg - 1);
    const double u = t * nseg - seg;  // local coordinate in [0,1]
    // Cox-de Boor for uniform cubic segments (clamped ends folded in)
    // via the standard uniform cubic basis matrix applied per segment;
    // clamped knots are handled by evaluating against the actual knot vector.
    // Knot vector: 0,0,0,0, 1/nseg, ..., (nseg-1)/nseg, 1,1,1,1
    auto knot = [&](int i) {
        const int k = i - 3;  // index among segment boundaries
        if (k <= 0) return 0.0;
        if (k >= nseg) return 1.0;
        return static_cast<double>(k) / nseg;
    };
    // de Boor-Cox recursion for the 4 nonzero cubic basis functions on seg
    const int kidx = seg + 3;  // t in [knot(kidx), knot(kidx+1))
    double left[4], right[4];
    w[0] = 1.0;
    for (int j = 1; j <= 3; ++j) {
        left[j] = t - knot(kidx + 1 - j);
        right[j] = knot(kidx + j) - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double den = right[r + 1] + left[j - r];
            const double tmp = den != 0.0 ? w[r] / den : 0.0;
            w[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        w[j] = saved;
    }
    *first = seg;
    (void)u;
}

struct SplineFit {
    double r2 = 0.0;
    double edf = 0.0;
    bool ok = false;
};

SplineFit spline_gcv_fit(const Vector& xraw, const Vector& yraw, const IndexParams& p) {
    const Eigen::Index n = xraw.size();
    SplineFit out;
    const double xmin = xraw.minCoeff(), xmax = xraw.maxCoeff();
    if (xmax - xmin <= 0.0) return out;
    const int nb = std::max(6, p.spline_basis);

    Matrix B = Matrix::Zero(n, nb);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = (xraw[i] - xmin) / (xmax - xmin);
        double w[4];
        int first = 0;
        bspline_row(std::clamp(t, 0.0, 1.0), nb, w, &first);
        for (int k = 0; k < 4; ++k) B(i, first + k) = w[k];
    }

    const Matrix BtB = B.transpose() * B;
    const Vector Bty = B.transpose() * yraw;

    Matrix D = Matrix::Zero(nb - 2, nb);
    for (int i = 0; i < nb - 2; ++i) {
        D(i, i) = 1.0;
        D(i, i + 1) = -2.0;
        D(i, i + 2) = 1.0;
    }
    const Matrix P = D.transpose() * D;

    const double ymean = yraw.mean();
    const double yvar = (yraw.array() - ymean).square().sum() / static_cast<double>(n);
    if (yvar <= 0.0) return out;

    double best_gcv = 1e300, best_r2 = 0.0, best_edf = 0.0;
    double near_edf_gap = 1e300, near_r2 = 0.0, near_edf = 0.0;
    for (int gi = 0; gi < 41; ++gi) {
        const double lam = std::pow(10.0, -7.0 + 14.0 * gi / 40.0);
        Eigen::LDLT<Matrix> solver(BtB + lam * P);
        if (solver.info() != Eigen::Success) continue;
        const Vector beta = solver.solve(Bty);
        const Matrix H = solver.solve(BtB);
        const double edf = H.trace();
        const Vector res = yraw - B * beta;
        const double rmean = res.mean();
        const double rvar = (res.array() - rmean).square().sum() / static_cast<double>(n);
        const double rss = res.squaredNorm();
        const double denom = static_cast<double>(n) - std::min(edf, static_cast<double>(n) - 1.0);
        const double gcv = static_cast<double>(n) * rss / (denom * denom);
        const double r2 = 1.0 - rvar / yvar;
        const double gap = edf < p.spline_df_min ? p.spline_df_min - edf
                                                 : (edf > p.spline_df_max ? edf - p.spline_df_max : 0.0);
        if (gap > 0.0) {
            if (gap < near_edf_gap) {
                near_edf_gap = gap;
                near_r2 = r2;
                near_edf = edf;
            }
            continue;
        }
        if (gcv < best_gcv) {
            best_gcv = gcv;
            best_r2 = r2;
            best_edf = edf;
        }
    }
    if (best_gcv < 1e300) {
        out.ok = true;
        out.r2 = best_r2;
        out.edf = best_edf;
    } else if (near_edf_gap < 1e300) {
        out.ok = true;
        out.r2 = near_r2;
        out.edf = near_edf;
    }
    return out;
}

} // namespace

IndexResult idx_splines2d(const ProjectedData& y, const IndexParams& p) {
    if (y.n() < 10) throw IndexEvaluationError("splines2d needs n >= 10");
    Vector a = y.values.col(0), b = y.values.col(1);
    const double ra = a.maxCoeff() - a.minCoeff();
    const double rb = b.maxCoeff() - b.minCoeff();
    if (ra <= 0.0 || rb <= 0.0) return IndexResult{0.0, 0.0, true};
    a = (a.array() - a.minCoeff()) / ra;
    b = (b.array() - b.minCoeff()) / rb;

    const SplineFit f1 = spline_gcv_fit(a, b, p);
    const SplineFit f2 = spline_gcv_fit(b, a, p);
    if (!f1.ok && !f2.ok) throw IndexEvaluationError("spline solver failed in both directions");
    const double raw = std::max(f1.ok ? f1.r2 : 0.0, f2.ok ? f2.r2 : 0.0);
    return IndexResult{clip01(raw), raw, false};
}

// ---------------------------------------------------------------------------
// information indexes
// ---------------------------------------------------------------------------

namespace {

int grid_bound(Eigen::Index n, double exponent) {
    return std::max(4, static_cast<int>(std::floor(std::pow(static_cast<double>(n), exponent))));
}

std::vector<kernels::MiCell> char_cells(const ProjectedData& y, const IndexParams& p) {
    const auto prep = kernels::mi_prepare(y.values.col(0), y.values.col(1));
    const int B = grid_bound(y.n(), p.mic_exponent);
    return use_omp() ? kernels::mi_char_omp(prep, B, p.mic_candidates)
                     : kernels::mi_char_serial(prep, B, p.mic_candidates);
}

} // namespace

double idx_mi_grid(const ProjectedData& y, int kx, int ky, const IndexParams& p) {
    if (kx < 2 || ky < 2) throw InvalidParameter("mi grid needs kx, ky >= 2");
    const auto prep = kernels::mi_prepare(y.values.col(0), y.values.col(1));
    const auto prof = kernels::mi_profile(prep, ky, kx, p.mic_candidates);
    const double v = prof[static_cast<std::size_t>(kx - 2)] / std::log(static_cast<double>(std::min(kx, ky)));
    return clip01(v);
}

IndexResult idx_mic(const ProjectedData& y, const IndexParams& p) {
    if (y.n() < 10) throw IndexEvaluationError("mic needs n >= 10");
    double best = 0.0;
    for (const auto& c : char_cells(y, p)) best = std::max(best, c.value);
    return IndexResult{clip01(best), best, false};
}

IndexResult idx_tic(const ProjectedData& y, const IndexParams& p, const TicCalibration& cal) {
    if (y.n() < 10) throw IndexEvaluationError("tic needs n >= 10");
    if (cal.max_estimate <= 0.0) throw CalibrationRequired("tic calibration missing");
    if (cal.n != y.n())
        throw CalibrationRequired("tic calibration was made for a different sample size");
    double sum = 0.0;
    for (const auto& c : char_cells(y, p)) sum += c.value;
    return IndexResult{clip01(sum / cal.max_estimate), sum, false};
}

TicCalibration calibrate_tic(int n, const IndexParams& p) {
    if (n < 10) throw InvalidParameter("tic calibration needs n >= 10");
    ProjectedData ref;
    ref.values.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        ref.values(i, 0) = t;
        ref.values(i, 1) = t;
    }
    double sum = 0.0;
    for (const auto& c : char_cells(ref, p)) sum += c.value;
    return TicCalibration{n, std::max(sum, 1e-12)};
}

// ---------------------------------------------------------------------------
// holes
// ---------------------------------------------------------------------------

namespace {

double holes_raw(const MatrixN2& v) {
    const Eigen::Index n = v.rows();
    MatrixN2 z = v;
    for (int c = 0; c < 2; ++c) {
        const double m = z.col(c).mean();
        z.col(c).array() -= m;
        const double sd = std::sqrt(z.col(c).squaredNorm() / static_cast<double>(n - 1));
        if (sd > 1e-15) z.col(c) /= sd;
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += std::exp(-0.5 * z.row(i).squaredNorm());
    const double raw = (1.0 - s / static_cast<double>(n)) / (1.0 - std::exp(-1.0));
    return raw;
}

// expectation of the raw holes value under a standard bivariate normal,
// estimated once with a fixed seed
double holes_anchor() {
    static const double anchor = [] {
        Rng rng(20190711u);
        const int n = 100000;
        MatrixN2 z(n, 2);
        for (int i = 0; i < n; ++i) {
            z(i, 0) = rng.normal();
            z(i, 1) = rng.normal();
        }
        return holes_raw(z);
    }();
    return anchor;
}

} // namespace

IndexResult idx_holes(const ProjectedData& y, const IndexParams&) {
    if (y.n() < 3) throw IndexEvaluationError("holes needs n >= 3");
    const double raw = holes_raw(y.values);
    const double a = holes_anchor();
    return IndexResult{clip01((raw - a) / (1.0 - a)), raw, false};
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

const std::vector<std::string>& index_names() {
    static const std::vector<std::string> names{"holes",  "convex1m",  "skinny", "stringy",
                                                "dcor2d", "splines2d", "mic",    "tic"};
    return names;
}

bool is_known_index(const std::string& name) {
    const auto& v = index_names();
    return std::find(v.begin(), v.end(), name) != v.end();
}

IndexResult evaluate_detail(const IndexDescriptor& d, const ProjectedData& y,
                            const TicCalibration* cal) {
    if (d.name == "holes") return idx_holes(y, d.params);
    if (d.name == "convex1m") return idx_convex1m(y, d.params);
    if (d.name == "skinny") return idx_skinny(y, d.params);
    if (d.name == "stringy") return idx_stringy(y, d.params);
    if (d.name == "dcor2d") return idx_dcor2d(y, d.params);
    if (d.name == "splines2d") return idx_splines2d(y, d.params);
    if (d.name == "mic") return idx_mic(y, d.params);
    if (d.name == "tic") {
        if (cal == nullptr) throw CalibrationRequired("tic requires a calibration");
        return idx_tic(y, d.params, *cal);
    }
    throw UnknownIndex("unknown index: " + d.name);
}

double evaluate(const IndexDescriptor& d, const ProjectedData& y, const TicCalibration* cal) {
    return evaluate_detail(d, y, cal).value;
}

const TicCalibration& Evaluator::tic_calibration(int n, const IndexParams& p) const {
    const int key2 = p.mic_candidates * 4096 + static_cast<int>(p.mic_exponent * 1000.0);
    const std::pair<int, int> key{n, key2};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, calibrate_tic(n, p)).first;
    return it->second;
}

IndexResult Evaluator::detail(const IndexDescriptor& d, const ProjectedData& y) const {
    if (d.name == "tic") {
        const TicCalibration cal = tic_calibration(static_cast<int>(y.n()), d.params);
        return evaluate_detail(d, y, &cal);
    }
    return evaluate_detail(d, y, nullptr);
}

double Evaluator::operator()(const IndexDescriptor& d, const ProjectedData& y) const {
    return detail(d, y).value;
}

} // namespace pptour
