#include "pptour/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace pptour {

void DataMatrix::validate() const {
    if (values.rows() < 3 || values.cols() < 2)
        throw ShapeError("DataMatrix needs n >= 3 rows and p >= 2 columns");
    if (static_cast<std::size_t>(values.cols()) != column_names.size())
        throw ShapeError("column count does not match label count");
    if (!values.allFinite()) throw DataError("DataMatrix contains non-finite entries");
}

void check_frame(const Frame& f, double tol) {
    if (f.basis.rows() < 2) throw ShapeError("frame needs p >= 2");
    const double n0 = f.basis.col(0).norm();
    const double n1 = f.basis.col(1).norm();
    const double dot = std::abs(f.basis.col(0).dot(f.basis.col(1)));
    if (std::abs(n0 - 1.0) > tol || std::abs(n1 - 1.0) > tol || dot > tol)
        throw DegeneratePlane("frame columns not orthonormal");
}

Frame orthonormalize(const MatrixN2& m) {
    if (m.rows() < 2) throw ShapeError("need p >= 2");
    MatrixN2 b = m;
    const double n0 = b.col(0).norm();
    if (n0 < 1e-12) throw DegeneratePlane("first column has zero norm");
    b.col(0) /= n0;
    // two Gram-Schmidt passes on the second column
    for (int pass = 0; pass < 2; ++pass) b.col(1) -= b.col(0).dot(b.col(1)) * b.col(0);
    const double n1 = b.col(1).norm();
    if (n1 < 1e-10) throw DegeneratePlane("columns are linearly dependent");
    b.col(1) /= n1;
    return Frame{std::move(b)};
}

ProjectedData project(const DataMatrix& x, const Frame& f) {
    if (x.values.cols() != f.basis.rows())
        throw ShapeError("frame row count does not match data dimension");
    return ProjectedData{x.values * f.basis};
}

double proj_dist(const Frame& fa, const Frame& fb) {
    if (fa.basis.rows() != fb.basis.rows()) throw ShapeError("frames have different p");
    // ||Pa - Pb||_F^2 = ||Fb - Fa Fa'Fb||^2 + ||Fa - Fb Fb'Fa||^2; the residual
    // form stays accurate near zero (no 2 - ||M||^2 cancellation) and the two
    // terms swap under argument exchange, so symmetry is exact
    auto term = [](const Frame& x, const Frame& y) {
        return (y.basis - x.basis * (x.basis.transpose() * y.basis)).squaredNorm();
    };
    return std::sqrt(std::max(0.0, term(fa, fb) + term(fb, fa)));
}

Geodesic::Geodesic(const Frame& from, const Frame& to) {
    if (from.basis.rows() != to.basis.rows()) throw ShapeError("frames have different p");
    const Matrix2 m = from.basis.transpose() * to.basis;
    Eigen::JacobiSVD<Matrix2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    start_ = from.basis * svd.matrixU();
    const MatrixN2 target = to.basis * svd.matrixV();
    complement_.resize(from.basis.rows(), 2);
    theta_max_ = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double c = std::min(1.0, std::max(-1.0, svd.singularValues()[i]));
        double theta = std::acos(c);
        Vector w = target.col(i) - c * start_.col(i);
        const double nw = w.norm();
        if (nw < 1e-9 || theta < 1e-9) {
            // shared direction: held fixed along the path
            theta = 0.0;
            complement_.col(i).setZero();
        } else {
            complement_.col(i) = w / nw;
        }
        theta_[i] = theta;
        theta_max_ = std::max(theta_max_, theta);
    }
}

Frame Geodesic::at(double t) const {
    MatrixN2 b(start_.rows(), 2);
    for (int i = 0; i < 2; ++i) {
        const double a = t * theta_[i];
        b.col(i) = std::cos(a) * start_.col(i) + std::sin(a) * complement_.col(i);
    }
    return orthonormalize(b);
}

Frame Geodesic::at_angle(double angle) const {
    if (degenerate()) return at(0.0);
    return at(angle / theta_max_);
}

std::vector<Frame> geodesic_path(const Frame& fa, const Frame& fb, int n_steps) {
    if (n_steps < 1) throw InvalidParameter("n_steps must be positive");
    check_frame(fa);
    check_frame(fb);
    const Geodesic geo(fa, fb);
    std::vector<Frame> path;
    path.reserve(static_cast<std::size_t>(n_steps));
    if (n_steps == 1) {
        path.push_back(geo.at(0.0));
        return path;
    }
    for (int k = 0; k < n_steps; ++k)
        path.push_back(geo.at(static_cast<double>(k) / (n_steps - 1)));
    return path;
}

Frame rotate_in_plane(const Frame& f, double angle) {
    Matrix2 r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return Frame{f.basis * r};
}

Frame random_frame(Eigen::Index p, Rng& rng) {
    if (p < 2) throw ShapeError("need p >= 2");
    MatrixN2 m(p, 2);
    for (Eigen::Index i = 0; i < p; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = rng.normal();
    return orthonormalize(m);
}

Frame axis_frame(Eigen::Index p, Eigen::Index i, Eigen::Index j) {
    if (i < 0 || j < 0 || i >= p || j >= p || i == j) throw ShapeError("bad axis pair");
    MatrixN2 m = MatrixN2::Zero(p, 2);
    m(i, 0) = 1.0;
    m(j, 1) = 1.0;
    return Frame{std::move(m)};
}

std::uint64_t fnv1a(const void* data, std::size_t nbytes, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < nbytes; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace pptour
