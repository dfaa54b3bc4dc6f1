#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adhesion/convexkit.hpp"
#include "adhesion/measures.hpp"

namespace adhesion {

// Planar data phi(y) = min_i v_i . y with three non-collinear velocities.
// Pair p joins vertices p and p+1 (mod 3): p = 0, 1, 2 are (1,2), (2,3), (3,1).
struct ThreeSectorProblem {
    std::array<Vec2, 3> v;
    std::array<int, 3> source{0, 1, 2};  // input position of each vertex
    Vec2 b;
    double R = 0.0;
    double area = 0.0;  // |Delta|
    std::array<Vec2, 3> n, tau, mid;
    std::array<double, 3> xi{};
    bool sticky = true;
    int outflow = -1;  // pair with xi > 0, -1 when sticky

    static int first(int p) { return p; }
    static int second(int p) { return (p + 1) % 3; }
    static int third(int p) { return (p + 2) % 3; }
    static std::string pair_name(int p);
    int pair_of(int i, int j) const;  // pair index joining vertices i and j
    double K() const;
    double scale() const;
};

ThreeSectorProblem build(Vec2 v1, Vec2 v2, Vec2 v3);
ThreeSectorProblem build(const std::array<Vec2, 3>& v);
ThreeSectorProblem build(const PotentialSpec& s);

struct RegionTag {
    enum class Kind { sector, ray, triple };
    Kind kind = Kind::triple;
    int i = -1, j = -1;  // vertex indices
    int pair = -1;
    double s = 0.0;      // arclength from t b along the ray
    std::string to_string() const;
};

// tol: distance below which x counts as on a ray or at the triple point
RegionTag locate(const ThreeSectorProblem& p, Vec2 x, double t, double tol = 1e-12);

// subgradient of w_t and of u_t
SubgradientSet exact_subgradient(const ThreeSectorProblem& p, Vec2 x, double t);
SubgradientSet exact_du(const ThreeSectorProblem& p, Vec2 x, double t);

Vec2 exact_T(const ThreeSectorProblem& p, Vec2 y, double t);
Vec2 exact_V(const ThreeSectorProblem& p, Vec2 x, double t);
// first time y / t meets b - Delta, infinity when it never does
double t_star(const ThreeSectorProblem& p, Vec2 y);
Vec2 exact_X(const ThreeSectorProblem& p, Vec2 y, double t);

struct PreImage {
    enum class Kind { point, segments, triangle };
    Kind kind = Kind::point;
    std::vector<std::pair<Vec2, Vec2>> segs;  // a point is a segment with equal ends
    std::array<Vec2, 3> tri{};
    double distance(Vec2 y) const;
    double area() const;
    std::vector<Vec2> sample(int per_segment) const;
};

PreImage exact_X_inverse(const ThreeSectorProblem& p, Vec2 x, double t);

// excess mass on the outflow segment, measured by pushing a seed lattice forward
struct OutflowFit {
    double c0 = 0.0, c1 = 0.0;  // total line density c0 + c1 s, s = arclength from t b
    double length = 0.0;
    int n = 0, bins = 0;
    bool stable = false;
    std::vector<std::array<double, 3>> history;  // (n, c0, c1) per resolution
};

struct OracleOptions {
    int n = 4096;
    int bins = 2048;
    int max_doublings = 2;
    double rel_tol = 1e-3;
};

OutflowFit outflow_oracle(const ThreeSectorProblem& p, double t, const OracleOptions& opt = {});

struct ExactMeasures {
    MeasureRepr rho, nu;
    OutflowFit fit;  // empty when sticky
};

// ac part on an n x n cell grid over w; run_oracle = false uses the fit passed in
ExactMeasures exact_measures(const ThreeSectorProblem& p, double t, const Window& w, int n = 64,
                             const OracleOptions& opt = {});
ExactMeasures exact_measures(const ThreeSectorProblem& p, double t, const Window& w, int n, const OutflowFit& fit);

struct MonotoneReport {
    double violation = 0.0;  // min over pairs of (X(y) - X(z)).(y - z) / |y - z|^2
    bool monotone = true;
    int pairs = 0;
    bool certified = false;
    Vec2 cert_y, cert_z;
    double cert_value = 0.0;
};

MonotoneReport monotone_reconstruction_check(const ThreeSectorProblem& p, double t, int samples = 2000,
                                             std::uint64_t seed = 1, double tol = 1e-12);

struct Riemann3Report {
    ThreeSectorProblem problem;
    double t = 0.0;
    double atom_nu = 0.0, atom_rho = 0.0;
    MonotoneReport mono;
    OutflowFit fit;
    std::string to_json() const;
};

Riemann3Report riemann3_report(const ThreeSectorProblem& p, double t, const OracleOptions* oracle = nullptr,
                               int samples = 2000, std::uint64_t seed = 1);

// Figures: Lagrangian plane split by the cases of T_t, Eulerian plane with sectors and filaments,
// and pre-images X_s^{-1}(x), X_t^{-1}(x) of a point on the outflow ray.
std::string svg_lagrangian(const ThreeSectorProblem& p, double t);
std::string svg_eulerian(const ThreeSectorProblem& p, double t);
std::string svg_preimages(const ThreeSectorProblem& p, double s, double t);

}  // namespace adhesion
