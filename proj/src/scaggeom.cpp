#include "pptour/scaggeom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "pptour/errors.hpp"

namespace pptour {

BinnedPoints bin_points(const ProjectedData& y, int bin_cap, int max_cells) {
    const Eigen::Index n = y.values.rows();
    if (n < 3) throw TooFewPoints("binning needs n >= 3");
    if (bin_cap < 2) throw InvalidParameter("bin_cap must be >= 2");
    Eigen::Vector2d lo = y.values.colwise().minCoeff();
    Eigen::Vector2d hi = y.values.colwise().maxCoeff();
    if (hi[0] - lo[0] <= 0.0 || hi[1] - lo[1] <= 0.0)
        throw DegenerateSpread("coordinate has zero range");

    MatrixN2 u(n, 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int c = 0; c < 2; ++c) u(i, c) = (y.values(i, c) - lo[c]) / (hi[c] - lo[c]);

    // sorted (cell, x, y) triples make centroid sums independent of row order
    struct Rec {
        int cell;
        double x, y;
        bool operator<(const Rec& o) const {
            if (cell != o.cell) return cell < o.cell;
            if (x != o.x) return x < o.x;
            return y < o.y;
        }
    };
    std::vector<Rec> recs(static_cast<std::size_t>(n));

    int g = bin_cap;
    while (true) {
        for (Eigen::Index i = 0; i < n; ++i) {
            int cx = std::min(static_cast<int>(u(i, 0) * g), g - 1);
            int cy = std::min(static_cast<int>(u(i, 1) * g), g - 1);
            recs[static_cast<std::size_t>(i)] = Rec{cx * g + cy, u(i, 0), u(i, 1)};
        }
        std::sort(recs.begin(), recs.end());
        int occupied = 0;
        for (std::size_t i = 0; i < recs.size(); ++i)
            if (i == 0 || recs[i].cell != recs[i - 1].cell) ++occupied;
        if (occupied <= max_cells || g <= 4) break;
        g = (g + 1) / 2;
    }

    std::vector<double> px, py;
    std::vector<int> w;
    std::size_t i = 0;
    while (i < recs.size()) {
        std::size_t j = i;
        double sx = 0.0, sy = 0.0;
        while (j < recs.size() && recs[j].cell == recs[i].cell) {
            sx += recs[j].x;
            sy += recs[j].y;
            ++j;
        }
        const double cnt = static_cast<double>(j - i);
        px.push_back(sx / cnt);
        py.push_back(sy / cnt);
        w.push_back(static_cast<int>(j - i));
        i = j;
    }

    BinnedPoints out;
    out.points.resize(static_cast<Eigen::Index>(px.size()), 2);
    for (std::size_t k = 0; k < px.size(); ++k) {
        out.points(static_cast<Eigen::Index>(k), 0) = px[k];
        out.points(static_cast<Eigen::Index>(k), 1) = py[k];
    }
    out.weights = std::move(w);
    out.grid = g;
    return out;
}

namespace {

double cross2(double ox, double oy, double ax, double ay, double bx, double by) {
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

bool all_collinear(const MatrixN2& p) {
    const Eigen::Index m = p.rows();
    if (m < 3) return true;
    Eigen::Index far = 1;
    double best = 0.0;
    for (Eigen::Index i = 1; i < m; ++i) {
        const double d = (p.row(i) - p.row(0)).squaredNorm();
        if (d > best) {
            best = d;
            far = i;
        }
    }
    if (best <= 1e-24) return true;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double c = cross2(p(0, 0), p(0, 1), p(far, 0), p(far, 1), p(i, 0), p(i, 1));
        if (std::abs(c) > 1e-9 * std::sqrt(best)) return false;
    }
    return true;
}

double orient(const double* a, const double* b, const double* c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// > 0 when d is strictly inside the circumcircle of ccw (a,b,c)
double incircle_det(const double* a, const double* b, const double* c, const double* d) {
    const double adx = a[0] - d[0], ady = a[1] - d[1];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1];
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
           ad * (bdx * cdy - bdy * cdx);
}

struct BwTriangle {
    int v[3];
    int nb[3];  // neighbor across edge (v[k], v[k+1]); -1 on the outside
    bool alive;
};

class Delaunator {
  public:
    explicit Delaunator(const MatrixN2& input) {
        pts_.resize(static_cast<std::size_t>(input.rows()) + 3);
        for (Eigen::Index i = 0; i < input.rows(); ++i)
            pts_[static_cast<std::size_t>(i)] = {input(i, 0), input(i, 1)};
        run();
    }

    Triangulation result() const {
        Triangulation out;
        out.points.resize(npts_, 2);
        for (int i = 0; i < npts_; ++i) {
            out.points(i, 0) = pts_[static_cast<std::size_t>(i)][0];
            out.points(i, 1) = pts_[static_cast<std::size_t>(i)][1];
        }
        for (const auto& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= npts_ || t.v[1] >= npts_ || t.v[2] >= npts_) continue;
            Triangle tr;
            tr.v = {t.v[0], t.v[1], t.v[2]};
            tr.circumradius = circumradius(t);
            out.triangles.push_back(tr);
        }
        return out;
    }

  private:
    void run() {
        npts_ = static_cast<int>(pts_.size()) - 3;
        double lo0 = 1e300, lo1 = 1e300, hi0 = -1e300, hi1 = -1e300;
        for (int i = 0; i < npts_; ++i) {
            lo0 = std::min(lo0, pts_[static_cast<std::size_t>(i)][0]);
            hi0 = std::max(hi0, pts_[static_cast<std::size_t>(i)][0]);
            lo1 = std::min(lo1, pts_[static_cast<std::size_t>(i)][1]);
            hi1 = std::max(hi1, pts_[static_cast<std::size_t>(i)][1]);
        }
        const double span = std::max({hi0 - lo0, hi1 - lo1, 1e-9});
        const double cx = 0.5 * (lo0 + hi0), cy = 0.5 * (lo1 + hi1);
        const double s = 1024.0 * span;
        pts_[static_cast<std::size_t>(npts_) + 0] = {cx - 2.0 * s, cy - s};
        pts_[static_cast<std::size_t>(npts_) + 1] = {cx + 2.0 * s, cy - s};
        pts_[static_cast<std::size_t>(npts_) + 2] = {cx, cy + 2.0 * s};
        tris_.push_back(BwTriangle{{npts_, npts_ + 1, npts_ + 2}, {-1, -1, -1}, true});

        int last = 0;
        for (int i = 0; i < npts_; ++i) last = insert(i, last);
    }

    const double* pt(int i) const { return pts_[static_cast<std::size_t>(i)].data(); }

    double circumradius(const BwTriangle& t) const {
        const double* a = pt(t.v[0]);
        const double* b = pt(t.v[1]);
        const double* c = pt(t.v[2]);
        const double la = std::hypot(b[0] - c[0], b[1] - c[1]);
        const double lb = std::hypot(a[0] - c[0], a[1] - c[1]);
        const double lc = std::hypot(a[0] - b[0], a[1] - b[1]);
        const double ar = 0.5 * std::abs(orient(a, b, c));
        if (ar < 1e-300) return std::numeric_limits<double>::infinity();
        return la * lb * lc / (4.0 * ar);
    }

    bool in_circum(const BwTriangle& t, int pi) const {
        const double* a = pt(t.v[0]);
        const double* b = pt(t.v[1]);
        const double* c = pt(t.v[2]);
        const double* d = pt(pi);
        double det = incircle_det(a, b, c, d);
        if (orient(a, b, c) < 0.0) det = -det;
        double mag = 1.0;
        for (const double* q : {a, b, c, d})
            mag = std::max({mag, std::abs(q[0]), std::abs(q[1])});
        return det > 1e-12 * mag * mag * mag * mag;
    }

    bool contains(const BwTriangle& t, int pi, double eps = 1e-12) const {
        const double* d = pt(pi);
        const double o = orient(pt(t.v[0]), pt(t.v[1]), pt(t.v[2]));
        const double sgn = o >= 0.0 ? 1.0 : -1.0;
        for (int k = 0; k < 3; ++k)
            if (sgn * orient(pt(t.v[k]), pt(t.v[(k + 1) % 3]), d) < -eps) return false;
        return true;
    }

    int locate(int pi, int hint) const {
        int cur = hint;
        int steps = 0;
        const int max_steps = static_cast<int>(tris_.size()) + 8;
        while (cur >= 0 && tris_[cur].alive && steps++ < max_steps) {
            const BwTriangle& t = tris_[cur];
            const double o = orient(pt(t.v[0]), pt(t.v[1]), pt(t.v[2]));
            const double sgn = o >= 0.0 ? 1.0 : -1.0;
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                if (sgn * orient(pt(t.v[k]), pt(t.v[(k + 1) % 3]), pt(pi)) < -1e-12) {
                    next = t.nb[k];
                    break;
                }
            }
            if (next < 0) return cur;
            cur = next;
        }
        for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i)
            if (tris_[i].alive && contains(tris_[i], pi)) return i;
        return -1;
    }

    int insert(int pi, int hint) {
        const int seed = locate(pi, hint);
        if (seed < 0) return hint;  // duplicate or unlocatable: skip

        std::vector<int> cavity;
        std::vector<int> stack{seed};
        std::vector<char> mark(tris_.size(), 0);
        mark[static_cast<std::size_t>(seed)] = 1;
        while (!stack.empty()) {
            const int ci = stack.back();
            stack.pop_back();
            cavity.push_back(ci);
            for (int k = 0; k < 3; ++k) {
                const int nb = tris_[ci].nb[k];
                if (nb < 0 || mark[static_cast<std::size_t>(nb)] || !tris_[nb].alive) continue;
                if (in_circum(tris_[nb], pi)) {
                    mark[static_cast<std::size_t>(nb)] = 1;
                    stack.push_back(nb);
                }
            }
        }

        struct BEdge {
            int a, b, outside;
        };
        std::vector<BEdge> boundary;
        for (const int ci : cavity) {
            for (int k = 0; k < 3; ++k) {
                const int nb = tris_[ci].nb[k];
                const bool nb_in = nb >= 0 && mark[static_cast<std::size_t>(nb)];
                if (!nb_in)
                    boundary.push_back(BEdge{tris_[ci].v[k], tris_[ci].v[(k + 1) % 3], nb});
            }
        }
        for (const int ci : cavity) tris_[ci].alive = false;

        std::unordered_map<std::int64_t, int> half;
        std::vector<int> created;
        created.reserve(boundary.size());
        for (const auto& e : boundary) {
            BwTriangle nt{{e.a, e.b, pi}, {e.outside, -1, -1}, true};
            const int ti = static_cast<int>(tris_.size());
            tris_.push_back(nt);
            created.push_back(ti);
            if (e.outside >= 0) {
                BwTriangle& ot = tris_[e.outside];
                for (int k = 0; k < 3; ++k)
                    if (ot.v[k] == e.b && ot.v[(k + 1) % 3] == e.a) ot.nb[k] = ti;
            }
            half[key(e.b, pi)] = ti;
            half[key(pi, e.a)] = ti;
        }
        for (const int ti : created) {
            BwTriangle& t = tris_[ti];
            auto it = half.find(key(pi, t.v[1]));
            if (it != half.end() && it->second != ti) t.nb[1] = it->second;
            it = half.find(key(t.v[0], pi));
            if (it != half.end() && it->second != ti) t.nb[2] = it->second;
        }
        return created.empty() ? hint : created.back();
    }

    static std::int64_t key(int a, int b) {
        return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    }

    std::vector<std::array<double, 2>> pts_;
    int npts_ = 0;
    std::vector<BwTriangle> tris_;
};

} // namespace

Hull convex_hull(const BinnedPoints& b) {
    const Eigen::Index m = b.m();
    if (m < 3 || all_collinear(b.points))
        throw CollinearInput("convex hull needs non-collinear points");

    std::vector<int> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int c) {
        if (b.points(a, 0) != b.points(c, 0)) return b.points(a, 0) < b.points(c, 0);
        return b.points(a, 1) < b.points(c, 1);
    });

    auto build = [&](bool upper) {
        std::vector<int> h;
        for (std::size_t t = 0; t < idx.size(); ++t) {
            const int i = idx[upper ? idx.size() - 1 - t : t];
            while (h.size() >= 2) {
                const int a = h[h.size() - 2], c = h[h.size() - 1];
                if (cross2(b.points(a, 0), b.points(a, 1), b.points(c, 0), b.points(c, 1),
                           b.points(i, 0), b.points(i, 1)) <= 0.0)
                    h.pop_back();
                else
                    break;
            }
            h.push_back(i);
        }
        h.pop_back();
        return h;
    };
    std::vector<int> hull = build(false);
    const std::vector<int> upper = build(true);
    hull.insert(hull.end(), upper.begin(), upper.end());

    Hull out;
    double area2 = 0.0, per = 0.0;
    for (std::size_t k = 0; k < hull.size(); ++k) {
        const int a = hull[k], c = hull[(k + 1) % hull.size()];
        area2 += b.points(a, 0) * b.points(c, 1) - b.points(c, 0) * b.points(a, 1);
        per += (b.points.row(c) - b.points.row(a)).norm();
    }
    out.components.push_back(std::move(hull));
    out.area = 0.5 * std::abs(area2);
    out.perimeter = per;
    return out;
}

Triangulation delaunay(const BinnedPoints& b) {
    if (b.m() < 3) throw TooFewPoints("triangulation needs >= 3 points");
    if (all_collinear(b.points)) throw CollinearInput("points are collinear");
    Delaunator d(b.points);
    return d.result();
}

Hull alpha_hull(const Triangulation& tri, double alpha) {
    if (!(alpha > 0.0)) throw InvalidParameter("alpha must be positive");
    const MatrixN2& p = tri.points;

    auto ekey = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    std::map<std::pair<int, int>, int> kept_count;
    std::map<std::pair<int, int>, bool> seen;
    double area = 0.0;
    for (const auto& t : tri.triangles) {
        const bool keep = t.circumradius <= alpha + 1e-12;
        if (keep) {
            const double a2 = cross2(p(t.v[0], 0), p(t.v[0], 1), p(t.v[1], 0), p(t.v[1], 1),
                                     p(t.v[2], 0), p(t.v[2], 1));
            area += 0.5 * std::abs(a2);
        }
        for (int k = 0; k < 3; ++k) {
            const auto e = ekey(t.v[k], t.v[(k + 1) % 3]);
            seen[e] = true;
            if (keep) kept_count[e] += 1;
        }
    }

    double per = 0.0;
    std::vector<std::pair<int, int>> boundary, chains;
    for (const auto& [e, unused] : seen) {
        (void)unused;
        const auto it = kept_count.find(e);
        const int c = it == kept_count.end() ? 0 : it->second;
        const double len = (p.row(e.first) - p.row(e.second)).norm();
        if (c == 1) {
            per += len;
            boundary.push_back(e);
        } else if (c == 0 && len <= 2.0 * alpha) {
            const double mx = 0.5 * (p(e.first, 0) + p(e.second, 0));
            const double my = 0.5 * (p(e.first, 1) + p(e.second, 1));
            const double r2 = 0.25 * len * len - 1e-12;
            bool empty = true;
            for (Eigen::Index q = 0; q < p.rows(); ++q) {
                if (q == e.first || q == e.second) continue;
                const double dx = p(q, 0) - mx, dy = p(q, 1) - my;
                if (dx * dx + dy * dy < r2) {
                    empty = false;
                    break;
                }
            }
            if (empty) {
                per += len;
                chains.push_back(e);
            }
        }
    }

    Hull out;
    out.area = area;
    out.perimeter = per;
    std::map<int, std::vector<int>> adj;
    for (const auto& e : boundary) {
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    std::map<std::pair<int, int>, bool> used;
    for (const auto& e : boundary) {
        if (used[e]) continue;
        std::vector<int> loop{e.first, e.second};
        used[e] = true;
        while (true) {
            const int cur = loop.back();
            int nxt = -1;
            for (const int cand : adj[cur]) {
                const auto k = std::make_pair(std::min(cur, cand), std::max(cur, cand));
                if (!used[k]) {
                    nxt = cand;
                    used[k] = true;
                    break;
                }
            }
            if (nxt < 0 || nxt == loop.front()) break;
            loop.push_back(nxt);
        }
        out.components.push_back(std::move(loop));
    }
    for (const auto& e : chains) out.components.push_back({e.first, e.second});
    return out;
}

Hull alpha_hull(const BinnedPoints& b, double alpha) { return alpha_hull(delaunay(b), alpha); }

SpanningTree mst(const MatrixN2& pts) {
    const int m = static_cast<int>(pts.rows());
    if (m < 2) throw TooFewPoints("mst needs at least 2 points");

    struct E {
        double len;
        int i, j;
        bool operator<(const E& o) const {
            if (len != o.len) return len < o.len;
            if (i != o.i) return i < o.i;
            return j < o.j;
        }
    };
    std::vector<E> edges;
    edges.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            edges.push_back(E{(pts.row(i) - pts.row(j)).norm(), i, j});
    std::sort(edges.begin(), edges.end());

    std::vector<int> parent(static_cast<std::size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    SpanningTree t;
    t.n_vertices = m;
    for (const auto& e : edges) {
        const int a = find(e.i), b = find(e.j);
        if (a == b) continue;
        parent[a] = b;
        t.edges.push_back(SpanningTree::Edge{e.i, e.j, e.len});
        t.total_length += e.len;
        if (static_cast<int>(t.edges.size()) == m - 1) break;
    }
    t.diameter = mst_diameter(t);
    return t;
}

SpanningTree mst(const BinnedPoints& b) { return mst(b.points); }

double mst_diameter(const SpanningTree& t) {
    if (t.edges.empty()) return 0.0;
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(t.n_vertices));
    for (const auto& e : t.edges) {
        adj[static_cast<std::size_t>(e.i)].push_back({e.j, e.length});
        adj[static_cast<std::size_t>(e.j)].push_back({e.i, e.length});
    }
    auto farthest = [&](int s) {
        std::vector<double> dist(adj.size(), -1.0);
        std::vector<int> stack{s};
        dist[static_cast<std::size_t>(s)] = 0.0;
        int best = s;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            if (dist[u] > dist[best]) best = u;
            for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
                if (dist[static_cast<std::size_t>(v)] < 0.0) {
                    dist[static_cast<std::size_t>(v)] = dist[u] + w;
                    stack.push_back(v);
                }
            }
        }
        return std::make_pair(best, dist[static_cast<std::size_t>(best)]);
    };
    const auto [a, d0] = farthest(t.edges[0].i);
    (void)d0;
    return farthest(a).second;
}

} // namespace pptour
