#include "pptour/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "pptour/errors.hpp"

namespace pptour::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel_enabled(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

// ---------------------------------------------------------------------------
// distance correlation
// ---------------------------------------------------------------------------

namespace {

struct RowPartial {
    double ra, rb, sab, saa, sbb;
};

RowPartial dcor_row(const double* x, const double* y, Eigen::Index n, Eigen::Index i) {
    RowPartial p{0, 0, 0, 0, 0};
    const double xi = x[i], yi = y[i];
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(xi - x[j]);
        const double b = std::abs(yi - y[j]);
        p.ra += a;
        p.rb += b;
        p.sab += a * b;
        p.saa += a * a;
        p.sbb += b * b;
    }
    return p;
}

DcorStats combine_rows(const std::vector<RowPartial>& rows, Eigen::Index n) {
    double ga = 0, gb = 0, sab = 0, saa = 0, sbb = 0, raa = 0, rbb = 0, rab = 0;
    for (const auto& r : rows) {
        ga += r.ra;
        gb += r.rb;
        sab += r.sab;
        saa += r.saa;
        sbb += r.sbb;
        raa += r.ra * r.ra;
        rbb += r.rb * r.rb;
        rab += r.ra * r.rb;
    }
    const double dn = static_cast<double>(n);
    const double n2 = dn * dn, n3 = n2 * dn, n4 = n3 * dn;
    DcorStats s;
    s.dcov2 = sab / n2 - 2.0 * rab / n3 + ga * gb / n4;
    s.dvarx = saa / n2 - 2.0 * raa / n3 + ga * ga / n4;
    s.dvary = sbb / n2 - 2.0 * rbb / n3 + gb * gb / n4;
    const double denom = s.dvarx * s.dvary;
    if (denom > 0.0 && s.dcov2 > 0.0) s.dcor = std::sqrt(s.dcov2 / std::sqrt(denom));
    return s;
}

} // namespace

DcorStats dcor_serial(const Vector& x, const Vector& y) {
    const Eigen::Index n = x.size();
    if (n != y.size() || n < 2) throw ShapeError("dcor needs two equal-length vectors");
    std::vector<RowPartial> rows(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = dcor_row(x.data(), y.data(), n, i);
    return combine_rows(rows, n);
}

DcorStats dcor_omp(const Vector& x, const Vector& y) {
    const Eigen::Index n = x.size();
    if (n != y.size() || n < 2) throw ShapeError("dcor needs two equal-length vectors");
    std::vector<RowPartial> rows(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = dcor_row(x.data(), y.data(), n, i);
    return combine_rows(rows, n);
}

// ---------------------------------------------------------------------------
// mutual information characteristic sweep (equipartitioned rows, dynamic
// programming over column cuts)
// ---------------------------------------------------------------------------

MiPrepared mi_prepare(const Vector& x, const Vector& y) {
    const Eigen::Index n = x.size();
    if (n != y.size() || n < 4) throw ShapeError("mi needs two equal-length vectors, n >= 4");
    MiPrepared out;
    out.n = static_cast<int>(n);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });
    out.x_sorted.resize(order.size());
    out.y_by_x.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.x_sorted[i] = x[order[i]];
        out.y_by_x[i] = y[order[i]];
    }
    out.y_sorted.assign(y.data(), y.data() + n);
    std::sort(out.y_sorted.begin(), out.y_sorted.end());

    out.clump_start.push_back(0);
    for (int i = 1; i < out.n; ++i)
        if (out.x_sorted[static_cast<std::size_t>(i)] != out.x_sorted[static_cast<std::size_t>(i - 1)])
            out.clump_start.push_back(i);

    out.xlogx.resize(static_cast<std::size_t>(n) + 1);
    out.xlogx[0] = 0.0;
    for (int k = 1; k <= out.n; ++k)
        out.xlogx[static_cast<std::size_t>(k)] = k * std::log(static_cast<double>(k));
    return out;
}

std::vector<double> mi_profile(const MiPrepared& in, int ky, int kx_max, int candidates) {
    const int n = in.n;
    std::vector<double> profile(static_cast<std::size_t>(std::max(0, kx_max - 1)), 0.0);
    if (ky < 2 || kx_max < 2) return profile;

    // y-axis equipartition boundaries (right-continuous, deduplicated)
    std::vector<double> bounds;
    const double step = static_cast<double>(n) / ky;
    for (int j = 1; j < ky; ++j) {
        const int at = std::min(static_cast<int>(std::llround(j * step)), n - 1);
        const double v = in.y_sorted[static_cast<std::size_t>(at)];
        if (bounds.empty() || v > bounds.back()) bounds.push_back(v);
    }
    const int l = static_cast<int>(bounds.size()) + 1;
    if (l < 2) return profile;  // all y identical: no information

    // row id for each point (x-sorted order)
    std::vector<int> row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double v = in.y_by_x[static_cast<std::size_t>(i)];
        row[static_cast<std::size_t>(i)] =
            static_cast<int>(std::upper_bound(bounds.begin(), bounds.end(), v) - bounds.begin());
    }

    // merge equal-x clumps into at most `candidates` mass-balanced superclumps
    const int ncl = static_cast<int>(in.clump_start.size());
    const int m = std::min(ncl, std::max(candidates, 2));
    std::vector<int> sc_end;  // end offset (exclusive) of each superclump
    {
        sc_end.reserve(static_cast<std::size_t>(m));
        const double target = static_cast<double>(n) / m;
        int prev_id = -1;
        for (int c = 0; c < ncl; ++c) {
            const int end = c + 1 < ncl ? in.clump_start[static_cast<std::size_t>(c + 1)] : n;
            const int id = std::min(static_cast<int>(std::ceil(end / target)) - 1, m - 1);
            if (id != prev_id) {
                sc_end.push_back(end);
                prev_id = id;
            } else {
                sc_end.back() = end;
            }
        }
    }
    const int msc = static_cast<int>(sc_end.size());
    if (msc < 2) return profile;

    // cumulative row counts per superclump prefix: C[i][j], i = 0..msc
    std::vector<int> cum(static_cast<std::size_t>(msc + 1) * l, 0);
    {
        int start = 0;
        for (int s = 0; s < msc; ++s) {
            int* dst = cum.data() + static_cast<std::size_t>(s + 1) * l;
            const int* src = cum.data() + static_cast<std::size_t>(s) * l;
            for (int j = 0; j < l; ++j) dst[j] = src[j];
            for (int i = start; i < sc_end[static_cast<std::size_t>(s)]; ++i) ++dst[row[static_cast<std::size_t>(i)]];
            start = sc_end[static_cast<std::size_t>(s)];
        }
    }
    std::vector<int> np(static_cast<std::size_t>(msc + 1), 0);
    for (int s = 0; s <= msc; ++s) {
        int tot = 0;
        const int* c = cum.data() + static_cast<std::size_t>(s) * l;
        for (int j = 0; j < l; ++j) tot += c[j];
        np[static_cast<std::size_t>(s)] = tot;
    }

    // G(s,t) = sum_j c_j ln c_j - Z ln Z over block (s, t]
    std::vector<double> G(static_cast<std::size_t>(msc + 1) * (msc + 1), 0.0);
    for (int s = 0; s < msc; ++s) {
        const int* cs = cum.data() + static_cast<std::size_t>(s) * l;
        for (int t = s + 1; t <= msc; ++t) {
            const int* ct = cum.data() + static_cast<std::size_t>(t) * l;
            double g = 0.0;
            for (int j = 0; j < l; ++j) g += in.xlogx[static_cast<std::size_t>(ct[j] - cs[j])];
            g -= in.xlogx[static_cast<std::size_t>(np[static_cast<std::size_t>(t)] - np[static_cast<std::size_t>(s)])];
            G[static_cast<std::size_t>(s) * (msc + 1) + t] = g;
        }
    }

    // H_Y from the full row distribution
    double hy = 0.0;
    {
        const int* c = cum.data() + static_cast<std::size_t>(msc) * l;
        for (int j = 0; j < l; ++j) hy -= in.xlogx[static_cast<std::size_t>(c[j])];
        hy = hy / n + std::log(static_cast<double>(n));
    }

    // dp[t][k]: best sum of G over partitions of prefix t into exactly k parts
    const int kcap = std::min(kx_max, msc);
    const double NEG = -1e300;
    std::vector<double> prev(static_cast<std::size_t>(msc + 1), NEG), cur(static_cast<std::size_t>(msc + 1), NEG);
    for (int t = 1; t <= msc; ++t) prev[static_cast<std::size_t>(t)] = G[0 * (msc + 1) + t];  // one part
    std::vector<double> best_exact(static_cast<std::size_t>(kcap + 1), NEG);
    for (int k = 2; k <= kcap; ++k) {
        for (int t = k; t <= msc; ++t) {
            double b = NEG;
            for (int s = k - 1; s < t; ++s) {
                const double v = prev[static_cast<std::size_t>(s)] + G[static_cast<std::size_t>(s) * (msc + 1) + t];
                if (v > b) b = v;
            }
            cur[static_cast<std::size_t>(t)] = b;
        }
        best_exact[static_cast<std::size_t>(k)] = cur[static_cast<std::size_t>(msc)];
        std::swap(prev, cur);
        std::fill(cur.begin(), cur.end(), NEG);
    }

    double run = 0.0;  // at-most-k maximum, I is nondecreasing in k
    for (int k = 2; k <= kx_max; ++k) {
        if (k <= kcap) run = std::max(run, std::max(0.0, hy + best_exact[static_cast<std::size_t>(k)] / n));
        profile[static_cast<std::size_t>(k - 2)] = run;
    }
    return profile;
}

namespace {

std::vector<MiCell> cells_from_profiles(const std::vector<std::vector<double>>& profiles,
                                        int grid_bound) {
    std::vector<MiCell> cells;
    for (int ky = 2; ky <= grid_bound / 2; ++ky) {
        const auto& prof = profiles[static_cast<std::size_t>(ky - 2)];
        const int kx_max = grid_bound / ky;
        for (int kx = 2; kx <= kx_max; ++kx) {
            const double norm = std::log(static_cast<double>(std::min(kx, ky)));
            double v = prof[static_cast<std::size_t>(kx - 2)] / norm;
            v = std::clamp(v, 0.0, 1.0);
            cells.push_back(MiCell{kx, ky, v});
        }
    }
    return cells;
}

} // namespace

std::vector<MiCell> mi_char_serial(const MiPrepared& in, int grid_bound, int candidates) {
    const int ky_max = grid_bound / 2;
    std::vector<std::vector<double>> profiles(static_cast<std::size_t>(std::max(0, ky_max - 1)));
    for (int ky = 2; ky <= ky_max; ++ky)
        profiles[static_cast<std::size_t>(ky - 2)] = mi_profile(in, ky, grid_bound / ky, candidates);
    return cells_from_profiles(profiles, grid_bound);
}

std::vector<MiCell> mi_char_omp(const MiPrepared& in, int grid_bound, int candidates) {
    const int ky_max = grid_bound / 2;
    std::vector<std::vector<double>> profiles(static_cast<std::size_t>(std::max(0, ky_max - 1)));
#pragma omp parallel for schedule(dynamic)
    for (int ky = 2; ky <= ky_max; ++ky)
        profiles[static_cast<std::size_t>(ky - 2)] = mi_profile(in, ky, grid_bound / ky, candidates);
    return cells_from_profiles(profiles, grid_bound);
}

} // namespace pptour::kernels
