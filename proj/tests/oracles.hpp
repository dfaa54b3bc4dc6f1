#pragma once
// Independent reference computations used only by tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "adhesion/grid.hpp"

namespace oracle {

using adhesion::Vec2;

inline const std::array<Vec2, 3> reference{{{1.8, 0.0}, {2.5, 1.5}, {0.0, 0.0}}};

inline std::array<Vec2, 3> equilateral(double r = 1.0, Vec2 c = {0, 0}) {
    std::array<Vec2, 3> v;
    for (int i = 0; i < 3; ++i) {
        double a = M_PI / 2 + 2 * M_PI * i / 3;
        v[i] = {c.x + r * std::cos(a), c.y + r * std::sin(a)};
    }
    return v;
}

// circumcenter by Cramer's rule on the two equidistance equations
inline Vec2 circumcenter(const std::array<Vec2, 3>& v) {
    double a11 = 2 * (v[1].x - v[0].x), a12 = 2 * (v[1].y - v[0].y);
    double a21 = 2 * (v[2].x - v[0].x), a22 = 2 * (v[2].y - v[0].y);
    double r1 = adhesion::norm2(v[1]) - adhesion::norm2(v[0]);
    double r2 = adhesion::norm2(v[2]) - adhesion::norm2(v[0]);
    double det = a11 * a22 - a12 * a21;
    return {(r1 * a22 - a12 * r2) / det, (a11 * r2 - r1 * a21) / det};
}

inline double w_closed(const std::array<Vec2, 3>& v, Vec2 x, double t) {
    double m = -1e300;
    for (auto a : v) m = std::max(m, 0.5 * adhesion::norm2(x - t * a));
    return m;
}

inline double phi_min(const std::vector<Vec2>& v, Vec2 y) {
    double m = 1e300;
    for (auto a : v) m = std::min(m, adhesion::dot(a, y));
    return m;
}

// brute Hopf-Lax over a square lattice centred on x
template <class Phi>
double hopf_lax_brute(Phi phi, Vec2 x, double t, double R, int n) {
    double best = 1e300;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            Vec2 y{x.x - R + 2 * R * i / n, x.y - R + 2 * R * j / n};
            best = std::min(best, adhesion::norm2(x - y) / (2 * t) + phi(y));
        }
    return best;
}

inline bool in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c, double tol = 0) {
    double d1 = adhesion::cross(b - a, p - a), d2 = adhesion::cross(c - b, p - b), d3 = adhesion::cross(a - c, p - c);
    bool neg = d1 < -tol || d2 < -tol || d3 < -tol;
    bool pos = d1 > tol || d2 > tol || d3 > tol;
    return !(neg && pos);
}

// y touches iff free streaming y + t v_i ends where t v_i is the farthest of the t v_j,
// i.e. the particle has not been absorbed into a filament.
inline bool touching_exact(const std::array<Vec2, 3>& v, Vec2 y, double t) {
    for (int i = 0; i < 3; ++i) {
        Vec2 x = y + t * v[i];
        bool ok = true;
        for (int j = 0; j < 3; ++j)
            if (j != i && adhesion::norm2(x - t * v[j]) > adhesion::norm2(x - t * v[i])) ok = false;
        if (ok) return true;
    }
    return false;
}

// excess line density of rho on the outflow segment at arclength s from t v_ij
inline double outflow_excess(double s, double area, double dist_b_vij) {
    return 2 * s * area / (dist_b_vij * dist_b_vij);
}

}  // namespace oracle
