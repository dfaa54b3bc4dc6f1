#pragma once

#include <string>
#include <vector>

#include "adhesion/grid.hpp"

namespace adhesion {

// 1D: interval [lo, hi]. 2D: counterclockwise polygon, or a segment/point when degenerate.
struct SubgradientSet {
    enum class Shape { point, segment, polygon };

    int dim = 2;
    double lo = 0.0, hi = 0.0;
    std::vector<Vec2> vertices;
    Shape shape = Shape::point;

    static SubgradientSet interval(double a, double b);
    static SubgradientSet from_points(std::vector<Vec2> pts);

    bool degenerate() const { return shape != Shape::polygon; }
    double diameter() const;
    double area() const;
    Vec2 centroid() const;
    double distance(Vec2 p) const;
    bool contains(Vec2 p, double tol = 0.0) const { return distance(p) <= tol; }
    std::string to_json() const;
};

double hausdorff(const SubgradientSet& a, const SubgradientSet& b);

// Andrew's monotone chain; collinear points dropped, earlier point kept on ties.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

// Per-axis discrete slope range [min, max] of f.
std::vector<std::pair<double, double>> slope_range(const ScalarField& f);

// Dual grid covering the slope range padded by pad on each side, refine x the node count.
Grid auto_dual_grid(const ScalarField& f, double refine = 1.0, double pad = 0.05);
// Same coverage, but nodes sit on a power-of-two lattice anchored at 0, so a field and its
// convexification get nested dual lattices.
Grid lattice_dual_grid(const ScalarField& f, double refine = 4.0);

ScalarField legendre_1d(const ScalarField& f, const Grid& dual);
ScalarField legendre_2d(const ScalarField& f, const Grid& dual);
ScalarField legendre(const ScalarField& f, const Grid& dual);
// brute-force reference, O(N M)
ScalarField legendre_direct(const ScalarField& f, const Grid& dual);

// Median |second difference| / h^2 over all axes, floored to stay positive for affine data.
double curvature_scale(const ScalarField& f);

ScalarField convexify(const ScalarField& f);

// Supporting slopes of a convex grid field at x. 1D: one-sided slopes. 2D: hull of the
// gradients of the smooth pieces met within four cells of x.
class SubgradientEstimator {
public:
    explicit SubgradientEstimator(const ScalarField& f_convex);
    SubgradientSet at(Vec2 x) const;

private:
    ScalarField f_;
    double curv_;
    double collapse_;
};

SubgradientSet subgradient_at(const ScalarField& f_convex, Vec2 x);

using Mask = std::vector<char>;

// default tol (negative) is 10 h^2 times the curvature scale
Mask touching_set(const ScalarField& f, const ScalarField& f_cvx, double tol = -1.0);
// min eigenvalue of the symmetrized +-2 cell Jacobian of the centered gradient >= rel x curvature scale
Mask strict_convexity_set(const ScalarField& f_cvx, double rel = 0.5);

// Centered-difference gradient at every node, one-sided on the boundary.
std::vector<Vec2> grid_gradient(const ScalarField& f);

}  // namespace adhesion
