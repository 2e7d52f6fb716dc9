#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pptour/types.hpp"

namespace pptour {

/// Distinct point locations on the unit square with multiplicities.
struct BinnedPoints {
    MatrixN2 points;           // m x 2, coordinates in [0,1]
    std::vector<int> weights;  // per-point counts, summing to n
    int grid = 0;              // grid resolution actually used

    Eigen::Index m() const { return points.rows(); }
};

/// Min-max scales to [0,1] and aggregates into a bin_cap x bin_cap grid of
/// cell centroids. Following the scagnostics convention, the grid is halved
/// while more than max_cells cells are occupied, so downstream geometry runs
/// on a bounded point count.
BinnedPoints bin_points(const ProjectedData& y, int bin_cap = 40, int max_cells = 250);

struct Hull {
    std::vector<std::vector<int>> components;  // ordered vertex loops / chains
    double area = 0.0;
    double perimeter = 0.0;
};

/// Convex hull (monotone chain); throws CollinearInput when degenerate.
Hull convex_hull(const BinnedPoints& b);

struct Triangle {
    std::array<int, 3> v;
    double circumradius;
};

struct Triangulation {
    MatrixN2 points;
    std::vector<Triangle> triangles;
};

/// Delaunay triangulation via Bowyer-Watson insertion.
Triangulation delaunay(const BinnedPoints& b);

/// Alpha complex measures derived from the Delaunay triangulation. Area sums
/// the triangles with circumradius <= alpha. The perimeter walks the boundary
/// of those triangles plus singular edges (length <= 2*alpha, empty diametral
/// disk, not a face of any kept triangle), so thin curves report their length
/// with near-zero area.
Hull alpha_hull(const BinnedPoints& b, double alpha);
Hull alpha_hull(const Triangulation& tri, double alpha);

struct SpanningTree {
    struct Edge {
        int i, j;
        double length;
    };
    std::vector<Edge> edges;
    double total_length = 0.0;
    double diameter = 0.0;
    int n_vertices = 0;
};

/// Euclidean minimum spanning tree, Kruskal with lexicographic tie-breaks.
SpanningTree mst(const BinnedPoints& b);
SpanningTree mst(const MatrixN2& pts);

/// Longest path through the tree (sum of edge lengths), by double sweep.
double mst_diameter(const SpanningTree& t);

} // namespace pptour
