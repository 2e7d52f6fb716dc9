#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pptour/errors.hpp"

namespace pptour {

using Matrix = Eigen::MatrixXd;
using Matrix2 = Eigen::Matrix2d;
using MatrixN2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using Vector = Eigen::VectorXd;

/// n x p numeric table with column names; the object being explored.
struct DataMatrix {
    Matrix values;
    std::vector<std::string> column_names;

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index p() const { return values.cols(); }

    /// Enforces the type invariants (finite entries, name/column match, n>=3, p>=2).
    void validate() const;
};

/// p x 2 orthonormal basis defining a projection plane.
struct Frame {
    MatrixN2 basis;

    Eigen::Index p() const { return basis.rows(); }
};

/// n x 2 projection of a DataMatrix through a Frame.
struct ProjectedData {
    MatrixN2 values;

    Eigen::Index n() const { return values.rows(); }
};

} // namespace pptour
