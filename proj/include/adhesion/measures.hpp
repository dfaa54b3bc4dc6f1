#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adhesion/convexkit.hpp"
#include "adhesion/flow.hpp"

namespace adhesion {

struct Window {
    int dim = 2;
    Vec2 lo, hi;

    static Window box(Vec2 lo, Vec2 hi) { return {2, lo, hi}; }
    static Window line(double lo, double hi) { return {1, {lo, 0.0}, {hi, 0.0}}; }
    bool contains(Vec2 p) const;
    double volume() const;
};

// Node (i, j) is the centre of cell (i, j) of an n0 x n1 partition of w.
Grid cell_grid(const Window& w, int n0, int n1 = 1);
Window window_of_cells(const Grid& cells);

struct Atom {
    Vec2 p;
    double m = 0.0;
};

// density c0 + c1 s along arclength s from a
struct LineSegment {
    Vec2 a, b;
    double c0 = 0.0, c1 = 0.0;
    double length() const { return norm(b - a); }
    double mass() const { return length() * (c0 + 0.5 * c1 * length()); }
};

struct MeasureRepr {
    Window window;
    std::optional<ScalarField> ac;  // cell averages on a cell_grid
    std::vector<Atom> atoms;
    std::vector<LineSegment> segments;

    double ac_mass() const;
    double atom_mass() const;
    double segment_mass() const;
    double total_mass() const { return ac_mass() + atom_mass() + segment_mass(); }
    double integrate(const std::function<double(Vec2)>& g) const;
    void validate() const;
    std::string to_json() const;
};

MeasureRepr lebesgue(const Window& w, int n0, int n1 = 1);

// Histogram of the positions at time t, seed_volume per seed. Positions outside the cells are dropped.
MeasureRepr pushforward_histogram(const PathBundle& b, double t, const Grid& cells);
MeasureRepr histogram(const std::vector<Vec2>& pts, double mass_each, const Grid& cells);

struct AtomRule {
    double median_factor = 25.0;
    double max_spread = 0.1;  // RMS spread of the landing points, in cell widths
};

// Moves cells passing the atom rule out of the ac part. pts are the landing points behind m.
void extract_atoms(MeasureRepr& m, const std::vector<Vec2>& pts, const AtomRule& rule = {});

struct DensityResult {
    MeasureRepr measure;
    int near_singular = 0;  // seeds with det below 1e-12
    int empty_cells = 0;
};

DensityResult viscous_density(const PotentialSpec& s, const ViscousParams& vp, const Grid& cells, double t,
                              const Grid& seed_grid, const IntegratorOptions& opt = {});

// Exact table for three-sector data and 1D min-of-linear data, otherwise the pushforward of
// Lebesgue under the gradient of the grid convexification of psi_t on seed_grid.
MeasureRepr monge_ampere_measure(const PotentialSpec& s, double t, const Grid& cells, const Grid& seed_grid,
                                 bool allow_exact = true);

struct SmoothedMA {
    MeasureRepr measure;
    double min_eig_margin = 0.0;  // min Hessian eigenvalue of w-eps minus beta_t
};

SmoothedMA smoothed_MA_density(const PotentialSpec& s, const ViscousParams& vp, const Grid& cells, double t);

struct SingularSets {
    Grid seeds;
    Mask in, sg, nd;
    int count(const Mask& m) const;
};

struct LebesgueThresholds {
    double det_sg = -1.0;       // negative picks sqrt(seed spacing)
    double nd_jump = 0.5;       // forward/backward Jacobian mismatch marking S_nd
};

struct Decomposition {
    MeasureRepr ac, sg;
    SingularSets sets;
    double sg_image_area = 0.0;  // area of the cells hit by S_sg seeds
};

// bundle must be a limit flow on a seed lattice (seed count = product of seed_grid sizes)
Decomposition lebesgue_decomposition(const PathBundle& b, const Grid& seed_grid, double t, const Grid& cells,
                                     const LebesgueThresholds& th = {});

// tent dictionary: 16 x 16 centres at 3 radii
struct FlatDictionary {
    int dim = 2;
    std::vector<Vec2> centres;
    std::vector<double> radii;
    static FlatDictionary make(const Window& w, int n = 16);
    double best_value_at(Vec2 p) const;  // largest tent value at p
};

double flat_metric(const MeasureRepr& a, const MeasureRepr& b, const Window& w);
double flat_metric(const MeasureRepr& a, const MeasureRepr& b, const FlatDictionary& d);

struct AcAgreement {
    double max_rel_rho = 0.0;   // |rho - ref| / ref off the mask
    double max_rel_nu = 0.0;
    double max_rel_between = 0.0;
    int cells = 0;
};

// mask marks cells to skip; reference density ref (1 for the three-sector family)
AcAgreement ac_agreement_check(const MeasureRepr& rho, const MeasureRepr& nu, const Mask& mask, double ref = 1.0);

// cells within dilate cells of any atom or segment of m
Mask singular_support_mask(const MeasureRepr& m, const Grid& cells, int dilate = 1);

// det of the discrete Hessian of w at the cell centres
ScalarField alexandrov_density(const ScalarField& w);

}  // namespace adhesion
