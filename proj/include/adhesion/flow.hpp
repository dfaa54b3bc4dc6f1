#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "adhesion/fields.hpp"

namespace adhesion {

// Paths of a cloud of Lagrangian labels sampled at common times. eps = 0 marks a limit flow.
struct PathBundle {
    int dim = 2;
    std::vector<Vec2> seeds;
    std::vector<double> times;
    std::vector<Vec2> positions;  // seed-major
    double eps = 0.0;
    double seed_volume = 0.0;     // Lebesgue mass per seed, 0 when the seeds are not a lattice
    bool converged = true;
    std::vector<double> decrements;  // ladder sup-norm gaps, limit flows only
    double rung_eps = 0.0;           // ladder rung a limit flow was taken from, 0 for closed forms

    std::size_t n_seeds() const { return seeds.size(); }
    std::size_t n_times() const { return times.size(); }
    Vec2 at(std::size_t s, std::size_t k) const { return positions[s * times.size() + k]; }
    Vec2& at(std::size_t s, std::size_t k) { return positions[s * times.size() + k]; }
    // index of a sampled time, throws when t was not sampled
    std::size_t time_index(double t) const;
    std::vector<Vec2> snapshot(double t) const;
    void validate() const;
    void write_csv(std::ostream& os) const;
};

// seeds at the nodes of g, with the lattice cell volume recorded
std::vector<Vec2> grid_seeds(const Grid& g);
PathBundle make_bundle(const Grid& seed_grid, std::vector<double> times);

struct IntegratorOptions {
    double tol = 1e-7;     // per-step error from step doubling
    double h0 = 1e-2;
    double h_min = 1e-9;
    long max_steps = 1000000;
    double K_slack = 1e-6;  // allowed excess of |velocity| over K
};

PathBundle integrate_viscous(const PotentialSpec& s, const std::vector<Vec2>& seeds, const std::vector<double>& times,
                             const ViscousParams& vp, const IntegratorOptions& opt = {});

struct LadderOptions {
    double tol = 0.02;  // sup-norm Cauchy gap accepted between successive rungs
    IntegratorOptions integ;
    ViscousParams base;
    bool fast_path = true;
};

std::vector<double> default_eps_ladder();

// exact limit path where a closed form is known: three-sector planar data, its lambda
// rescaling, 1D min-of-linear data
bool has_exact_flow(const PotentialSpec& s);
Vec2 exact_flow(const PotentialSpec& s, Vec2 y, double t);
// T_t = grad psi_t** for the same family
Vec2 exact_transport(const PotentialSpec& s, Vec2 y, double t);
// velocity of the viscous flow, with the lambda rescaling used for quadratic perturbations of min forms
Vec2 viscous_velocity(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp);

PathBundle limit_flow(const PotentialSpec& s, const std::vector<Vec2>& seeds, const std::vector<double>& times,
                      const std::vector<double>& eps_ladder, const LadderOptions& opt = {});

struct InclusionReport {
    double max_residual = 0.0;
    std::vector<double> residuals;  // per seed and interior time, seed-major
    int samples = 0;
    int one_sided = 0;  // samples where a kink forced a one-sided stencil
};

InclusionReport inclusion_residual(const PathBundle& b, const PotentialSpec& s);

struct PairViolation {
    std::size_t y = 0, z = 0;
    double s = 0.0, t = 0.0, excess = 0.0;
};

struct ContractionReport {
    long pairs = 0;
    std::vector<PairViolation> contraction;
    std::vector<PairViolation> sticking;
    double delta_stick = 0.0;
    bool ok() const { return contraction.empty() && sticking.empty(); }
};

// delta_stick < 0 picks 2 (tol + eps d)
ContractionReport contraction_check(const PathBundle& b, double lambda, double tol = 1e-6, double delta_stick = -1.0);

struct SemiflowReport {
    double s = 0.0, r = 0.0, t = 0.0;
    double assoc_error = 0.0;  // |X_{t,r}(X_{r,s}(z)) - X_{t,s}(z)|, max over the cloud
    double lipschitz = 0.0;    // largest difference quotient of X_{t,s}
    double lipschitz_bound = 0.0;
    int points = 0;
};

// X_{t,s} on the seed cloud is the map X_s(y) -> X_t(y); pairs whose sources coincide are skipped.
SemiflowReport semiflow_map(const PathBundle& b, double s, double r, double t, double lambda, double merge_tol = 1e-9);

struct CollisionFreeResult {
    PathBundle bundle;
    ScalarField phi_breve;     // grid path only
    double max_gap_T = 0.0;    // max |X_breve_{t*} - T_{t*}| over the seeds
    std::vector<double> min_det;  // per requested time, discrete Jacobian determinant in seed space
    bool closed_form = false;
};

// Straight-line flow reaching T_{t*} at t*. Closed form for potentials with an exact flow,
// otherwise from the grid convexification of psi_{t*} on seed_grid.
CollisionFreeResult collision_free_flow(const PotentialSpec& s, double t_star, const Grid& seed_grid,
                                        const std::vector<double>& times, bool allow_closed_form = true);

// discrete det of the seed-space Jacobian of the map sampled on g (centred, one-sided at the edge)
std::vector<double> jacobian_det(const Grid& g, const std::vector<Vec2>& image);

}  // namespace adhesion
