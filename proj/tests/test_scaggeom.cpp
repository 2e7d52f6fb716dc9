#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "pptour/rng.hpp"
#include "pptour/scaggeom.hpp"

using namespace pptour;

namespace {

ProjectedData make_points(std::initializer_list<std::pair<double, double>> pts) {
    ProjectedData y;
    y.values.resize(static_cast<Eigen::Index>(pts.size()), 2);
    Eigen::Index i = 0;
    for (const auto& [a, b] : pts) {
        y.values(i, 0) = a;
        y.values(i, 1) = b;
        ++i;
    }
    return y;
}

ProjectedData random_points(int n, Rng& rng) {
    ProjectedData y;
    y.values.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        y.values(i, 0) = rng.uniform();
        y.values(i, 1) = rng.uniform();
    }
    return y;
}

BinnedPoints as_binned(const MatrixN2& pts) {
    BinnedPoints b;
    b.points = pts;
    b.weights.assign(static_cast<std::size_t>(pts.rows()), 1);
    b.grid = 40;
    return b;
}

} // namespace

TEST_CASE("bin_points: unit square corners stay distinct with unit weights") {
    const auto y = make_points({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    const BinnedPoints b = bin_points(y, 40);
    CHECK(b.m() == 4);
    for (const int w : b.weights) CHECK(w == 1);
}

TEST_CASE("bin_points: repeated points merge with summed weights") {
    ProjectedData y;
    y.values.resize(1000, 2);
    for (int i = 0; i < 1000; ++i) {
        y.values(i, 0) = i < 500 ? 0.0 : 1.0;
        y.values(i, 1) = i < 500 ? 0.0 : 1.0;
    }
    const BinnedPoints b = bin_points(y, 40);
    CHECK(b.m() == 2);
    CHECK(b.weights[0] == 500);
    CHECK(b.weights[1] == 500);
}

TEST_CASE("bin_points: weight conservation and cell cap") {
    Rng rng(3);
    const auto y = random_points(1000, rng);
    const BinnedPoints b = bin_points(y, 10, 1000);
    CHECK(b.m() <= 100);
    int sum = 0;
    for (const int w : b.weights) sum += w;
    CHECK(sum == 1000);
    for (Eigen::Index i = 0; i < b.m(); ++i) {
        CHECK(b.points(i, 0) >= 0.0);
        CHECK(b.points(i, 0) <= 1.0);
        CHECK(b.points(i, 1) >= 0.0);
        CHECK(b.points(i, 1) <= 1.0);
    }
}

TEST_CASE("bin_points: row permutation gives identical binning") {
    Rng rng(4);
    const auto y = random_points(500, rng);
    ProjectedData shuffled = y;
    // reverse rows
    for (Eigen::Index i = 0; i < y.values.rows(); ++i)
        shuffled.values.row(i) = y.values.row(y.values.rows() - 1 - i);
    const BinnedPoints a = bin_points(y, 40);
    const BinnedPoints b = bin_points(shuffled, 40);
    REQUIRE(a.m() == b.m());
    CHECK(a.points == b.points);
    CHECK(a.weights == b.weights);
}

TEST_CASE("bin_points: zero spread throws") {
    const auto y = make_points({{0.5, 0}, {0.5, 1}, {0.5, 2}});
    CHECK_THROWS_AS(bin_points(y, 40), DegenerateSpread);
}

TEST_CASE("convex_hull: unit square") {
    const auto b = as_binned((MatrixN2(4, 2) << 0, 0, 1, 0, 0, 1, 1, 1).finished());
    const Hull h = convex_hull(b);
    CHECK(h.area == doctest::Approx(1.0));
    CHECK(h.perimeter == doctest::Approx(4.0));
}

TEST_CASE("convex_hull: interior point ignored") {
    const auto b = as_binned((MatrixN2(5, 2) << 0, 0, 1, 0, 0, 1, 1, 1, 0.5, 0.5).finished());
    const Hull h = convex_hull(b);
    CHECK(h.area == doctest::Approx(1.0));
    CHECK(h.components[0].size() == 4);
}

TEST_CASE("convex_hull: containment oracle on random points") {
    Rng rng(7);
    const auto y = random_points(50, rng);
    const auto b = as_binned(y.values);
    const Hull h = convex_hull(b);
    for (Eigen::Index i = 0; i < y.values.rows(); ++i)
        CHECK(oracles::point_in_convex_polygon(b.points, h.components[0], y.values(i, 0),
                                               y.values(i, 1)));
    // hull vertices are input points
    for (const int v : h.components[0]) CHECK(v < b.m());
    CHECK(h.area == doctest::Approx(oracles::polygon_area(b.points, h.components[0])));
}

TEST_CASE("convex_hull: collinear input throws") {
    const auto b = as_binned((MatrixN2(4, 2) << 0, 0, 0.3, 0.3, 0.7, 0.7, 1, 1).finished());
    CHECK_THROWS_AS(convex_hull(b), CollinearInput);
}

TEST_CASE("delaunay: three points give one triangle") {
    const auto b = as_binned((MatrixN2(3, 2) << 0, 0, 1, 0, 0, 1).finished());
    const Triangulation t = delaunay(b);
    CHECK(t.triangles.size() == 1);
}

TEST_CASE("delaunay: unit square gives two triangles sharing a diagonal") {
    const auto b = as_binned((MatrixN2(4, 2) << 0, 0, 1, 0, 0, 1, 1, 1).finished());
    const Triangulation t = delaunay(b);
    CHECK(t.triangles.size() == 2);
    double area = 0.0;
    for (const auto& tr : t.triangles) {
        const auto& p = t.points;
        area += 0.5 * std::abs((p(tr.v[1], 0) - p(tr.v[0], 0)) * (p(tr.v[2], 1) - p(tr.v[0], 1)) -
                               (p(tr.v[1], 1) - p(tr.v[0], 1)) * (p(tr.v[2], 0) - p(tr.v[0], 0)));
    }
    CHECK(area == doctest::Approx(1.0));
}

TEST_CASE("delaunay: empty circumcircle property on random sets") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const auto y = random_points(30, rng);
        const Triangulation tri = delaunay(as_binned(y.values));
        CHECK(oracles::delaunay_empty_circumcircle(tri, 1e-9));
        // triangulation covers the convex hull: total area matches
        const Hull h = convex_hull(as_binned(y.values));
        double area = 0.0;
        for (const auto& tr : tri.triangles) {
            const auto& p = tri.points;
            area += 0.5 * std::abs((p(tr.v[1], 0) - p(tr.v[0], 0)) * (p(tr.v[2], 1) - p(tr.v[0], 1)) -
                                   (p(tr.v[1], 1) - p(tr.v[0], 1)) * (p(tr.v[2], 0) - p(tr.v[0], 0)));
        }
        CHECK(area == doctest::Approx(h.area).epsilon(1e-9));
    }
}

TEST_CASE("delaunay: grid points (massively cocircular) stay consistent") {
    MatrixN2 pts(25, 2);
    int k = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            pts(k, 0) = i / 4.0;
            pts(k, 1) = j / 4.0;
            ++k;
        }
    const Triangulation tri = delaunay(as_binned(pts));
    CHECK(tri.triangles.size() == 32);  // 2 per grid cell
    CHECK(oracles::delaunay_empty_circumcircle(tri, 1e-9));
}

TEST_CASE("alpha_hull: alpha beyond max circumradius equals convex hull") {
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
        const auto y = random_points(40, rng);
        const auto b = as_binned(y.values);
        const Hull ch = convex_hull(b);
        const Hull ah = alpha_hull(b, 1e9);
        CHECK(std::abs(ah.area - ch.area) < 1e-9);
        CHECK(std::abs(ah.perimeter - ch.perimeter) < 1e-9);
    }
}

TEST_CASE("alpha_hull: tiny alpha keeps no area") {
    Rng rng(14);
    const auto y = random_points(40, rng);
    const Hull ah = alpha_hull(as_binned(y.values), 1e-7);
    CHECK(ah.area == doctest::Approx(0.0));
}

TEST_CASE("alpha_hull: invalid alpha throws") {
    Rng rng(14);
    const auto y = random_points(10, rng);
    CHECK_THROWS_AS(alpha_hull(as_binned(y.values), 0.0), InvalidParameter);
}

TEST_CASE("alpha_hull: two separated clusters sum their hull areas") {
    Rng rng(15);
    MatrixN2 pts(60, 2);
    for (int i = 0; i < 30; ++i) {
        pts(i, 0) = 0.10 + 0.12 * rng.uniform();
        pts(i, 1) = 0.10 + 0.12 * rng.uniform();
        pts(30 + i, 0) = 0.75 + 0.12 * rng.uniform();
        pts(30 + i, 1) = 0.75 + 0.12 * rng.uniform();
    }
    // alpha between intra-cluster spacing (~0.04) and cluster gap (~0.6)
    const double alpha = 0.12;
    const Hull ah = alpha_hull(as_binned(pts), alpha);
    const Hull c1 = convex_hull(as_binned(pts.topRows(30)));
    const Hull c2 = convex_hull(as_binned(pts.bottomRows(30)));
    CHECK(ah.area == doctest::Approx(c1.area + c2.area).epsilon(0.08));
}

TEST_CASE("alpha_hull area never exceeds convex hull area") {
    Rng rng(16);
    for (int t = 0; t < 20; ++t) {
        const auto y = random_points(30, rng);
        const auto b = as_binned(y.values);
        const double alpha = 0.02 + 0.3 * rng.uniform();
        CHECK(alpha_hull(b, alpha).area <= convex_hull(b).area + 1e-12);
    }
}

TEST_CASE("mst: three collinear points") {
    const auto b = as_binned((MatrixN2(3, 2) << 0, 0, 0.5, 0, 1.0, 0).finished());
    const SpanningTree t = mst(b);
    CHECK(t.edges.size() == 2);
    CHECK(t.total_length == doctest::Approx(1.0));
    CHECK(t.diameter == doctest::Approx(1.0));
}

TEST_CASE("mst: unit square uses three sides") {
    const auto b = as_binned((MatrixN2(4, 2) << 0, 0, 1, 0, 0, 1, 1, 1).finished());
    const SpanningTree t = mst(b);
    CHECK(t.total_length == doctest::Approx(3.0));
    CHECK(t.total_length == doctest::Approx(oracles::mst_bruteforce_total(b.points)));
}

TEST_CASE("mst: matches brute force over all spanning trees (8 points)") {
    Rng rng(21);
    for (int t = 0; t < 12; ++t) {
        const auto y = random_points(8, rng);
        const SpanningTree tree = mst(as_binned(y.values));
        const double brute = oracles::mst_bruteforce_total(y.values);
        CHECK(tree.total_length == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("mst: total length invariant under relabeling") {
    Rng rng(22);
    const auto y = random_points(40, rng);
    MatrixN2 rev(40, 2);
    for (int i = 0; i < 40; ++i) rev.row(i) = y.values.row(39 - i);
    CHECK(mst(as_binned(y.values)).total_length ==
          doctest::Approx(mst(as_binned(rev)).total_length).epsilon(1e-12));
}

TEST_CASE("mst: too few points throws") {
    MatrixN2 p(1, 2);
    p << 0.5, 0.5;
    CHECK_THROWS_AS(mst(p), TooFewPoints);
}

TEST_CASE("mst_diameter: path and star hand values") {
    SpanningTree path;
    path.n_vertices = 4;
    path.edges = {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 3.0}};
    CHECK(mst_diameter(path) == doctest::Approx(6.0));

    SpanningTree star;
    star.n_vertices = 5;
    star.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}};
    CHECK(mst_diameter(star) == doctest::Approx(2.0));
}

TEST_CASE("mst_diameter: equals all-pairs oracle on random trees") {
    Rng rng(23);
    for (int t = 0; t < 15; ++t) {
        const auto y = random_points(10, rng);
        const SpanningTree tree = mst(as_binned(y.values));
        CHECK(tree.diameter == doctest::Approx(oracles::tree_diameter_allpairs(tree)));
        CHECK(tree.diameter <= tree.total_length + 1e-12);
    }
}
