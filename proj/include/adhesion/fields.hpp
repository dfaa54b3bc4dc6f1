#pragma once

#include <memory>
#include <string>
#include <vector>

#include "adhesion/grid.hpp"

namespace adhesion {

enum class PotentialKind { zero, linear, piecewise_linear_min, quadratic_perturbation, sampled };

// Initial velocity potential phi.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::zero;
    int dim = 2;
    std::vector<Vec2> vectors;  // linear: one vector; min form: phi(y) = min_i v_i . y
    double lambda = 0.0;        // semi-concavity constant
    double K = 0.0;             // Lipschitz constant (on the working window for quadratic_perturbation)
    std::shared_ptr<const PotentialSpec> base;
    std::shared_ptr<const ScalarField> field;

    static PotentialSpec zero(int dim = 2);
    static PotentialSpec linear(Vec2 v, int dim = 2);
    static PotentialSpec min_of(std::vector<Vec2> v, int dim = 2);
    // phi = base + lambda |y|^2 / 2, K declared for |y| <= radius
    static PotentialSpec quadratic(const PotentialSpec& base, double lambda, double radius = 4.0);
    static PotentialSpec sampled(ScalarField f);

    bool is_three_sector() const { return kind == PotentialKind::piecewise_linear_min && dim == 2 && vectors.size() == 3; }
    std::string to_json() const;
    static PotentialSpec from_json(const std::string& text);
};

struct GradResult {
    bool differentiable = true;
    Vec2 grad;
    std::vector<int> active;  // active indices of a min form
};

struct TimeConstants {
    double t = 0.0, lambda_t = 0.0, beta_t = 1.0;
    static TimeConstants make(double lambda, double t);
};

struct ViscousParams {
    double eps = 0.1;
    double quad_halfwidth = 8.0;  // window margin in units of sqrt(eps t)
    int quad_points = 0;          // nodes per axis, 0 picks 16 per sqrt(eps t)
    void validate() const;
};

double eval_phi(const PotentialSpec& s, Vec2 y);
GradResult eval_phi_grad(const PotentialSpec& s, Vec2 y, double tie_tol = 0.0);

double hopf_lax_u(const PotentialSpec& s, Vec2 x, double t);
double hopf_lax_w(const PotentialSpec& s, Vec2 x, double t);
inline double w_from_u(double u, Vec2 x, double t) { return 0.5 * norm2(x) - t * u; }
inline double u_from_w(double w, Vec2 x, double t) { return (0.5 * norm2(x) - w) / t; }

struct ViscousValue {
    double u = 0.0;
    Vec2 grad;
};

// Cole-Hopf value and Gibbs-average gradient. Closed form for min potentials, quadrature otherwise.
ViscousValue cole_hopf(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp);
ViscousValue cole_hopf_quadrature(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp);
double cole_hopf_u(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp);
Vec2 cole_hopf_grad(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp);

double soft_legendre_w(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp);
// the log-integral of exp((x.y - psi_t(y)) / eps t) evaluated directly
double soft_legendre_w_direct(const PotentialSpec& s, Vec2 x, double t, const ViscousParams& vp);

double psi(const PotentialSpec& s, Vec2 y, double t);

ScalarField sample_phi(const PotentialSpec& s, const Grid& g);
ScalarField sample_psi(const PotentialSpec& s, const Grid& g, double t);
ScalarField sample_u(const PotentialSpec& s, const Grid& g, double t);
ScalarField sample_w(const PotentialSpec& s, const Grid& g, double t);
ScalarField sample_u_viscous(const PotentialSpec& s, const Grid& g, double t, const ViscousParams& vp);
ScalarField sample_w_viscous(const PotentialSpec& s, const Grid& g, double t, const ViscousParams& vp);

PotentialSpec galilean_transform(const PotentialSpec& s, Vec2 c);

struct SymmetryReport {
    double inviscid = 0.0;  // max |lhs - rhs| for u
    double w = 0.0;         // max |lhs - rhs| for w (Galilean only)
    double viscous = 0.0;   // max |lhs - rhs| for u^eps, 0 when not requested
    int points = 0;
};

SymmetryReport galilean_check(const PotentialSpec& s, Vec2 c, double t, const Grid& g, const ViscousParams* vp = nullptr);

// Hat time for physical time t; throws if the hat time is not below 1/lambda.
double rescale_hat_time(double lambda, double t);
SymmetryReport lambda_rescale_check(const PotentialSpec& hat, double lambda, double t, const Grid& g,
                                    const ViscousParams* vp = nullptr);

struct FieldChecks {
    double max_grad_u = 0.0;        // inviscid, discrete
    double max_grad_u_eps = 0.0;    // viscous, discrete
    double min_concavity = 0.0;     // min eigenvalue of lambda_t I - Hess u^eps
    double min_w_eps_eig = 0.0;     // min eigenvalue of Hess w^eps minus beta_t
    double K = 0.0;
};

FieldChecks check_fields(const PotentialSpec& s, double t, const Grid& g, const ViscousParams& vp);

// P(X < h, Y < k) for standard bivariate normal with correlation r
double bvn_cdf(double h, double k, double r);
double norm_cdf(double x);

}  // namespace adhesion
