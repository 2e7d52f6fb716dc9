#pragma once

// Test-only oracles, kept independent of the library implementations they
// check: explicit double-centering for dcor, Prufer-sequence spanning tree
// enumeration, brute-force partition search for the mutual information grid,
// geometric containment checks.

#include <vector>

#include "pptour/scaggeom.hpp"
#include "pptour/types.hpp"

namespace oracles {

using pptour::Matrix;
using pptour::MatrixN2;
using pptour::Vector;

/// Distance correlation via explicit n x n double-centered matrices.
double dcor_bruteforce(const Vector& x, const Vector& y);

/// Minimum spanning tree total length by enumerating all m^(m-2) labeled
/// trees through Prufer sequences (m <= 8).
double mst_bruteforce_total(const MatrixN2& pts);

/// Longest path in the tree by checking all vertex pairs.
double tree_diameter_allpairs(const pptour::SpanningTree& t);

/// True when no input point lies strictly inside any triangle circumcircle
/// (tolerance on the in-circle determinant).
bool delaunay_empty_circumcircle(const pptour::Triangulation& tri, double tol = 1e-9);

/// True when q is inside (or on) the convex polygon `loop` over pts.
bool point_in_convex_polygon(const MatrixN2& pts, const std::vector<int>& loop, double qx,
                             double qy, double tol = 1e-9);

/// Exhaustive maximum of normalized mutual information over all 2x2 grids
/// with the y-axis split fixed at the equipartition boundary and every
/// possible x cut; mirrors the estimator's y-partition convention.
double mi22_bruteforce(const Vector& x, const Vector& y);

/// Shoelace area of a polygon given as an ordered vertex loop.
double polygon_area(const MatrixN2& pts, const std::vector<int>& loop);

} // namespace oracles
