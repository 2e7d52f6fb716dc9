#include "pptour/simdata.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>

#include "pptour/errors.hpp"
#include "pptour/rng.hpp"

namespace pptour {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_spec(const SimSpec& s) {
    if (s.n < 10) throw InvalidParameter("sim spec needs n >= 10");
    if (s.p < 3) throw InvalidParameter("sim spec needs p >= 3");
}

std::vector<std::string> var_names(int p) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(p));
    for (int j = 1; j <= p; ++j) names.push_back("x" + std::to_string(j));
    return names;
}

DataMatrix finish(Matrix values, int p) {
    DataMatrix out{std::move(values), var_names(p)};
    out = standardize(out);
    out.validate();
    return out;
}

} // namespace

DataMatrix gen_pipe(const SimSpec& spec) {
    check_spec(spec);
    Rng rng(spec.seed);
    Matrix v(spec.n, spec.p);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.p - 2; ++j) v(i, j) = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < spec.n; ++i) {
        const double th = rng.uniform(0.0, kTwoPi);
        const double r = 1.0 + rng.normal(0.0, spec.radial_sd);
        v(i, spec.p - 2) = r * std::cos(th);
        v(i, spec.p - 1) = r * std::sin(th);
    }
    return finish(std::move(v), spec.p);
}

DataMatrix gen_sine(const SimSpec& spec) {
    check_spec(spec);
    Rng rng(spec.seed);
    Matrix v(spec.n, spec.p);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.p - 1; ++j) v(i, j) = rng.normal();
    for (int i = 0; i < spec.n; ++i)
        v(i, spec.p - 1) = std::sin(v(i, spec.p - 2)) + rng.normal(0.0, spec.jitter_sd);
    return finish(std::move(v), spec.p);
}

DataMatrix gen_spiral(const SimSpec& spec) {
    check_spec(spec);
    Rng rng(spec.seed);
    Matrix v(spec.n, spec.p);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.p - 2; ++j) v(i, j) = rng.normal();
    for (int i = 0; i < spec.n; ++i) {
        const double th = std::abs(rng.normal(0.0, spec.theta_sd));
        const double r = spec.spiral_a + spec.spiral_b * th;
        v(i, spec.p - 2) = r * std::cos(th);
        v(i, spec.p - 1) = r * std::sin(th);
    }
    return finish(std::move(v), spec.p);
}

DataMatrix generate(const SimSpec& spec) {
    if (spec.family == "pipe") return gen_pipe(spec);
    if (spec.family == "sine") return gen_sine(spec);
    if (spec.family == "spiral") return gen_spiral(spec);
    throw InvalidParameter("unknown simulation family: " + spec.family);
}

DataMatrix standardize(const DataMatrix& x) {
    DataMatrix out = x;
    const Eigen::Index n = out.values.rows();
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        const double m = out.values.col(j).mean();
        out.values.col(j).array() -= m;
        const double sd = std::sqrt(out.values.col(j).squaredNorm() / static_cast<double>(n - 1));
        if (sd <= 1e-300)
            throw DegenerateColumn("zero-variance column: " + out.column_names[static_cast<std::size_t>(j)]);
        out.values.col(j) /= sd;
    }
    return out;
}

DataMatrix minmax_scale(const DataMatrix& x) {
    DataMatrix out = x;
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        const double lo = out.values.col(j).minCoeff();
        const double hi = out.values.col(j).maxCoeff();
        if (hi - lo <= 0.0)
            throw DegenerateColumn("zero-range column: " + out.column_names[static_cast<std::size_t>(j)]);
        out.values.col(j) = (out.values.col(j).array() - lo) / (hi - lo);
    }
    return out;
}

DataMatrix sphere_pca(const DataMatrix& x, int keep) {
    if (keep < 1 || keep > x.p()) throw InvalidParameter("sphere_pca: keep out of range");
    const Eigen::Index n = x.n();
    Matrix centered = x.values;
    for (Eigen::Index j = 0; j < centered.cols(); ++j) centered.col(j).array() -= centered.col(j).mean();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    // eigenvalues ascending; take the top `keep`, largest first
    const double rank_tol = 1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff());
    int usable = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
        if (eig.eigenvalues()[i] > rank_tol) ++usable;
    if (usable < keep) {
        std::cerr << "sphere_pca: rank deficiency, reducing keep from " << keep << " to " << usable
                  << "\n";
        keep = usable;
    }
    if (keep < 1) throw DegenerateColumn("sphere_pca: data has rank 0");

    DataMatrix out;
    out.values.resize(n, keep);
    out.column_names.reserve(static_cast<std::size_t>(keep));
    const Eigen::Index pcols = eig.eigenvalues().size();
    for (int k = 0; k < keep; ++k) {
        const Eigen::Index src = pcols - 1 - k;
        const double sd = std::sqrt(eig.eigenvalues()[src]);
        out.values.col(k) = centered * eig.eigenvectors().col(src) / sd;
        out.column_names.push_back("pc" + std::to_string(k + 1));
    }
    return out;
}

} // namespace pptour
