#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace adhesion {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
// rotation by +90 degrees
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

enum class Extension { affine, clamp, undefined };

// Uniform lattice in 1 or 2 dimensions. Node (i0, i1) sits at lo + i * spacing.
struct Grid {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 0.0};
    std::array<int, 2> n{2, 1};

    static Grid line(double lo, double hi, int n);
    static Grid box(Vec2 lo, Vec2 hi, int n0, int n1);
    static Grid box(Vec2 lo, Vec2 hi, int n) { return box(lo, hi, n, n); }

    void validate() const;
    double spacing(int axis) const { return (hi[axis] - lo[axis]) / (n[axis] - 1); }
    double coord(int axis, int i) const { return lo[axis] + i * spacing(axis); }
    std::size_t size() const { return dim == 1 ? std::size_t(n[0]) : std::size_t(n[0]) * n[1]; }
    std::size_t index(int i0, int i1 = 0) const { return dim == 1 ? std::size_t(i0) : std::size_t(i0) * n[1] + i1; }
    Vec2 point(std::size_t k) const;
    std::array<int, 2> multi(std::size_t k) const;
    double cell_volume() const { return dim == 1 ? spacing(0) : spacing(0) * spacing(1); }
    double max_spacing() const { return dim == 1 ? spacing(0) : std::max(spacing(0), spacing(1)); }
    bool contains(Vec2 p) const;
    bool interior(Vec2 p) const;
    bool same_as(const Grid& o) const;
};

struct ScalarField {
    Grid grid;
    std::vector<double> values;
    Extension extension = Extension::affine;

    ScalarField() = default;
    ScalarField(Grid g, std::vector<double> v, Extension e = Extension::affine);

    double& operator[](std::size_t k) { return values[k]; }
    double operator[](std::size_t k) const { return values[k]; }
    double at(int i0, int i1 = 0) const { return values[grid.index(i0, i1)]; }
    // multilinear interpolation with the declared extension outside the box
    double eval(Vec2 p) const;
};

template <class F>
ScalarField sample(const Grid& g, F&& f, Extension e = Extension::affine) {
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(g.point(k));
    return ScalarField(g, std::move(v), e);
}

std::string fmt17(double v);
void write_csv(std::ostream& os, const ScalarField& f);
ScalarField read_csv(std::istream& is);

}  // namespace adhesion
