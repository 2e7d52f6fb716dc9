#include <doctest.h>

#include <cmath>

#include "pptour/indexes.hpp"
#include "pptour/rng.hpp"
#include "pptour/simdata.hpp"

using namespace pptour;

namespace {

ProjectedData cols(const DataMatrix& x, Eigen::Index a, Eigen::Index b) {
    ProjectedData y;
    y.values.resize(x.n(), 2);
    y.values.col(0) = x.values.col(a);
    y.values.col(1) = x.values.col(b);
    return y;
}

} // namespace

TEST_CASE("generators: deterministic and standardized") {
    for (const char* fam : {"pipe", "sine", "spiral"}) {
        SimSpec s;
        s.family = fam;
        s.seed = 7;
        const DataMatrix a = generate(s);
        const DataMatrix b = generate(s);
        CHECK(a.values == b.values);
        a.validate();
        for (Eigen::Index j = 0; j < a.p(); ++j) {
            CHECK(std::abs(a.values.col(j).mean()) < 1e-10);
            const double sd =
                std::sqrt(a.values.col(j).squaredNorm() / static_cast<double>(a.n() - 1));
            CHECK(sd == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("gen_pipe: zero radial noise gives exact unit radii pre-standardization") {
    SimSpec s;
    s.family = "pipe";
    s.seed = 3;
    s.n = 200;
    s.radial_sd = 0.0;
    // reconstruct the raw structured pair: standardization is per-column
    // affine, so radii on the standardized scale stay on an ellipse; check
    // through the generator internals instead by regenerating raw draws
    Rng rng(3);
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < s.p - 2; ++j) rng.uniform(-1.0, 1.0);
    // the generator draws (theta, radius-noise) pairs after the nuisance block
    const DataMatrix x = gen_pipe(s);
    CHECK(x.n() == 200);
    // coefficient of variation of radii should be ~0 for radial_sd = 0
    ProjectedData y = cols(x, s.p - 2, s.p - 1);
    // undo per-column standardization up to scale: radius^2 = (a*u)^2+(b*v)^2;
    // with radial_sd=0 all points lie on one ellipse -> quadratic form constant
    Vector q(y.n());
    for (Eigen::Index i = 0; i < y.n(); ++i)
        q[i] = y.values(i, 0) * y.values(i, 0) / y.values.col(0).squaredNorm() +
               y.values(i, 1) * y.values(i, 1) / y.values.col(1).squaredNorm();
    const double mean = q.mean();
    for (Eigen::Index i = 0; i < q.size(); ++i) CHECK(q[i] == doctest::Approx(mean).epsilon(0.15));
}

TEST_CASE("gen_pipe: radius coefficient of variation bounded by noise level") {
    SimSpec s;
    s.family = "pipe";
    s.seed = 11;
    const DataMatrix x = gen_pipe(s);
    const ProjectedData y = cols(x, s.p - 2, s.p - 1);
    Vector r(y.n());
    for (Eigen::Index i = 0; i < y.n(); ++i) r[i] = y.values.row(i).norm();
    const double mean = r.mean();
    const double sd = std::sqrt((r.array() - mean).square().sum() / (r.size() - 1.0));
    CHECK(sd / mean <= 2.0 * s.radial_sd);
}

TEST_CASE("gen_pipe: nuisance columns look uniform (KS check over seeds)") {
    int pass = 0;
    const int seeds = 100;
    for (int t = 0; t < seeds; ++t) {
        SimSpec s;
        s.family = "pipe";
        s.seed = 1000 + t;
        s.n = 500;
        const DataMatrix x = gen_pipe(s);
        // first nuisance column, undo standardization to [-1,1] scale via minmax
        Vector c = x.values.col(0);
        const double lo = c.minCoeff(), hi = c.maxCoeff();
        std::vector<double> u(static_cast<std::size_t>(c.size()));
        for (Eigen::Index i = 0; i < c.size(); ++i) u[static_cast<std::size_t>(i)] = (c[i] - lo) / (hi - lo);
        std::sort(u.begin(), u.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double e = (i + 1.0) / u.size();
            ks = std::max(ks, std::abs(e - u[i]));
        }
        // 1% critical value for n=500 is ~1.63/sqrt(n) = 0.0727; the minmax
        // rescale inflates slightly, allow that margin
        if (ks < 0.0727 + 0.01) ++pass;
    }
    CHECK(pass >= 95);
}

TEST_CASE("gen_sine: zero jitter means exact functional dependence") {
    SimSpec s;
    s.family = "sine";
    s.seed = 5;
    s.n = 300;
    s.jitter_sd = 0.0;
    const DataMatrix x = gen_sine(s);
    // the structured pair standardizes sin(raw) against raw; recover the raw
    // x-column by inverting the z-score of column p-2 is impossible without the
    // stored moments, so check the functional relation via a rank argument:
    // sorting by column p-2 must make column p-1 equal to a function of it
    const ProjectedData y = cols(x, s.p - 2, s.p - 1);
    // same x value (no duplicates a.s.) -> unique y; spline captures it fully
    CHECK(idx_splines2d(y).value >= 0.999);
}

TEST_CASE("gen_sine: structured pair strong for splines2d, noise pair weak") {
    SimSpec s;
    s.family = "sine";
    s.seed = 21;
    const DataMatrix x = gen_sine(s);
    CHECK(idx_splines2d(cols(x, s.p - 2, s.p - 1)).value >= 0.95);
    CHECK(idx_splines2d(cols(x, 0, 1)).value <= 0.1);
}

TEST_CASE("gen_spiral: theta = 0 collapses to a point") {
    SimSpec s;
    s.family = "spiral";
    s.seed = 9;
    s.n = 50;
    s.theta_sd = 0.0;
    CHECK_THROWS_AS(gen_spiral(s), DegenerateColumn);  // zero-variance columns
}

TEST_CASE("gen_spiral: radius-angle relation exact pre-standardization") {
    // regenerate the raw draws with the same rng stream and verify r = a+b|th|
    SimSpec s;
    s.family = "spiral";
    s.seed = 31;
    s.n = 100;
    Rng rng(s.seed);
    Matrix raw(s.n, 2);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.p - 2; ++j) rng.normal();
    for (int i = 0; i < s.n; ++i) {
        const double th = std::abs(rng.normal(0.0, s.theta_sd));
        const double r = s.spiral_a + s.spiral_b * th;
        raw(i, 0) = r * std::cos(th);
        raw(i, 1) = r * std::sin(th);
        CHECK(std::hypot(raw(i, 0), raw(i, 1)) == doctest::Approx(s.spiral_a + s.spiral_b * th));
    }
    (void)raw;
}

TEST_CASE("gen_spiral: skinny sees the structured pair") {
    SimSpec s;
    s.family = "spiral";
    s.seed = 41;
    const DataMatrix x = gen_spiral(s);
    CHECK(idx_skinny(cols(x, s.p - 2, s.p - 1)).value >= 0.76);
}

TEST_CASE("standardize: idempotent and exact moments") {
    SimSpec s;
    s.family = "sine";
    s.seed = 2;
    const DataMatrix x = generate(s);
    const DataMatrix again = standardize(x);
    CHECK((again.values - x.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("standardize: affine copies collapse to the same matrix") {
    SimSpec s;
    s.family = "sine";
    s.seed = 3;
    s.n = 100;
    const DataMatrix x = generate(s);
    DataMatrix shifted = x;
    for (Eigen::Index j = 0; j < x.p(); ++j)
        shifted.values.col(j) = 3.5 * x.values.col(j)
            + Vector::Constant(x.n(), static_cast<double>(j) - 2.0);
    const DataMatrix back = standardize(shifted);
    CHECK((back.values - x.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("standardize: zero variance throws") {
    DataMatrix x;
    x.values = Matrix::Ones(10, 2);
    x.values.col(0) = Vector::LinSpaced(10, 0, 1);
    x.column_names = {"a", "b"};
    CHECK_THROWS_AS(standardize(x), DegenerateColumn);
}

TEST_CASE("minmax_scale: exact extremes, shift invariance, idempotence") {
    SimSpec s;
    s.family = "pipe";
    s.seed = 13;
    s.n = 200;
    const DataMatrix x = generate(s);
    const DataMatrix m = minmax_scale(x);
    for (Eigen::Index j = 0; j < m.p(); ++j) {
        CHECK(m.values.col(j).minCoeff() == 0.0);
        CHECK(m.values.col(j).maxCoeff() == 1.0);
    }
    DataMatrix shifted = x;
    shifted.values.array() += 17.0;
    CHECK((minmax_scale(shifted).values - m.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((minmax_scale(m).values - m.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sphere_pca: output has identity covariance and is invertible at full rank") {
    SimSpec s;
    s.family = "sine";
    s.seed = 4;
    s.n = 400;
    const DataMatrix x = generate(s);
    const DataMatrix sph = sphere_pca(x, static_cast<int>(x.p()));
    const Matrix cov =
        sph.values.transpose() * sph.values / static_cast<double>(sph.n() - 1);
    // columns are centered by construction
    CHECK((cov - Matrix::Identity(sph.p(), sph.p())).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sphere_pca: planted dominant direction lands in the first component") {
    Rng rng(77);
    const int n = 500;
    DataMatrix x;
    x.values.resize(n, 4);
    x.column_names = {"a", "b", "c", "d"};
    for (int i = 0; i < n; ++i) {
        const double t = rng.normal();
        x.values(i, 0) = 3.0 * t + 0.01 * rng.normal();
        x.values(i, 1) = 2.0 * t + 0.01 * rng.normal();
        x.values(i, 2) = 0.1 * rng.normal();
        x.values(i, 3) = 0.1 * rng.normal();
    }
    const DataMatrix sph = sphere_pca(x, 2);
    // the first pc must align with the planted combination: correlate pc1 with t-proxy
    Vector proxy = x.values.col(0) * 3.0 + x.values.col(1) * 2.0;
    proxy.array() -= proxy.mean();
    Vector pc1 = sph.values.col(0);
    const double cosine =
        std::abs(proxy.dot(pc1)) / (proxy.norm() * pc1.norm());
    CHECK(cosine >= 0.99);
}
