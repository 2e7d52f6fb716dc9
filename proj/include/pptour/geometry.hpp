#pragma once

#include <vector>

#include "pptour/rng.hpp"
#include "pptour/types.hpp"

namespace pptour {

/// Tolerance used to validate frame orthonormality.
inline constexpr double kFrameTol = 1e-10;

/// Throws DegeneratePlane/ShapeError when f is not an orthonormal p x 2 basis.
void check_frame(const Frame& f, double tol = kFrameTol);

/// Gram-Schmidt with re-orthogonalization. The first column of the result is
/// m's first column normalized; the second spans the rest of m's plane.
Frame orthonormalize(const MatrixN2& m);

ProjectedData project(const DataMatrix& x, const Frame& f);

/// Frobenius distance between the planes spanned by two frames,
/// ||Fa Fa' - Fb Fb'||_F. Invariant to within-plane rotation, 0 iff equal
/// planes, maximum 2 for fully orthogonal planes.
double proj_dist(const Frame& fa, const Frame& fb);

/// Precomputed geodesic between two planes: principal directions of the
/// start plane paired with their orthogonal complements, rotated by the
/// principal angles. Frames along the path stay orthonormal.
class Geodesic {
  public:
    Geodesic(const Frame& from, const Frame& to);

    /// Frame at fraction t of the path (t=0 start plane, t=1 target plane).
    Frame at(double t) const;

    /// Frame after rotating by `angle` radians in the fastest-moving
    /// principal direction (angle = max principal angle reaches the target).
    Frame at_angle(double angle) const;

    /// Largest principal angle; the path length in at_angle units.
    double max_angle() const { return theta_max_; }

    bool degenerate() const { return theta_max_ <= 0.0; }

  private:
    MatrixN2 start_;       // principal directions in the start plane
    MatrixN2 complement_;  // matched orthogonal directions
    double theta_[2];
    double theta_max_;
};

/// n_steps frames equally spaced along the geodesic from fa's plane to fb's.
std::vector<Frame> geodesic_path(const Frame& fa, const Frame& fb, int n_steps);

/// Same plane, basis rotated by `angle` radians.
Frame rotate_in_plane(const Frame& f, double angle);

/// Orthonormalized standard-normal p x 2 draw (rotation invariant over planes).
Frame random_frame(Eigen::Index p, Rng& rng);

/// Frame spanning coordinate axes (i, j).
Frame axis_frame(Eigen::Index p, Eigen::Index i, Eigen::Index j);

} // namespace pptour
