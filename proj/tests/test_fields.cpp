#include <doctest.h>

#include <cmath>

#include "adhesion/convexkit.hpp"
#include "adhesion/fields.hpp"
#include "oracles.hpp"

using namespace adhesion;

namespace {
PotentialSpec reference_spec() { return PotentialSpec::min_of({oracle::reference.begin(), oracle::reference.end()}); }
}  // namespace

TEST_CASE("bivariate normal cdf against frozen reference values") {
    // values from an independent implementation (scipy multivariate_normal.cdf)
    CHECK(bvn_cdf(0.3, -0.2, 0.5) == doctest::Approx(0.3361984370155187).epsilon(1e-13));
    CHECK(bvn_cdf(0, 0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
    // orthant probability 1/4 + asin(r)/(2 pi)
    for (double r : {-0.99, -0.6, 0.2, 0.8, 0.97})
        CHECK(bvn_cdf(0, 0, r) == doctest::Approx(0.25 + std::asin(r) / (2 * M_PI)).epsilon(1e-13));
}

TEST_CASE("eval_phi closed forms and ridge reporting") {
    auto z = PotentialSpec::zero();
    CHECK(eval_phi(z, {3, 4}) == 0.0);
    auto s = reference_spec();
    CHECK(eval_phi(s, {-1, 0}) == doctest::Approx(-2.5));
    auto g = eval_phi_grad(s, {-1, 0});
    CHECK(g.differentiable);
    CHECK(g.grad == Vec2{2.5, 1.5});
    auto l = PotentialSpec::linear({0.5, -2});
    CHECK(eval_phi(l, {2, 1}) == doctest::Approx(-1.0));
    // on the ray between v1 and v2 both are active
    Vec2 tau = perp(oracle::reference[1] - oracle::reference[0]);
    auto r = eval_phi_grad(s, tau, 1e-12);
    CHECK_FALSE(r.differentiable);
    CHECK(r.active == std::vector<int>{0, 1});
    CHECK(s.K == doctest::Approx(std::hypot(2.5, 1.5)));
}

TEST_CASE("Hopf-Lax closed forms match brute-force minimization") {
    double t = 0.3;
    CHECK(hopf_lax_u(PotentialSpec::zero(), {1, 2}, t) == 0.0);
    auto l = PotentialSpec::linear({1, -2});
    CHECK(hopf_lax_u(l, {0.4, 0.1}, t) == doctest::Approx(0.4 - 0.2 - 0.5 * t * 5));
    std::vector<Vec2> v(oracle::reference.begin(), oracle::reference.end());
    auto s = reference_spec();
    for (Vec2 x : {Vec2{0.6, 0.2}, Vec2{0.27, 0.4}, Vec2{-0.5, 0.9}}) {
        double brute = oracle::hopf_lax_brute([&](Vec2 y) { return oracle::phi_min(v, y); }, x, t, 1.2, 1200);
        CHECK(hopf_lax_u(s, x, t) == doctest::Approx(brute).epsilon(1e-5));
    }
    CHECK_THROWS(hopf_lax_u(s, {0, 0}, 0.0));
}

TEST_CASE("w and u relation") {
    CHECK(w_from_u(0, {1, 1}, 0.7) == 1.0);
    Vec2 x{0.3, -0.4};
    double t = 0.25;
    CHECK(u_from_w(w_from_u(0.123, x, t), x, t) == doctest::Approx(0.123).epsilon(1e-15));
    auto s = reference_spec();
    for (Vec2 p : {Vec2{0.6, 0.2}, Vec2{-1, 2}})
        CHECK(hopf_lax_w(s, p, t) == doctest::Approx(oracle::w_closed(oracle::reference, p, t)).epsilon(1e-14));
}

TEST_CASE("Cole-Hopf exact cases") {
    ViscousParams vp{0.05};
    CHECK(cole_hopf_u(PotentialSpec::zero(), {0.2, 0.3}, 0.4, vp) == 0.0);
    auto l = PotentialSpec::linear({1.5, -0.5});
    for (double eps : {0.5, 0.05, 0.001}) {
        ViscousParams p{eps};
        auto r = cole_hopf(l, {0.2, 0.3}, 0.4, p);
        CHECK(r.u == doctest::Approx(0.3 - 0.15 - 0.2 * 2.5).epsilon(1e-13));
        CHECK(norm(r.grad - Vec2{1.5, -0.5}) <= 1e-13);
    }
    // the tensor quadrature path agrees on the linear case too
    auto q = cole_hopf_quadrature(l, {0.2, 0.3}, 0.4, ViscousParams{0.1});
    CHECK(q.u == doctest::Approx(0.3 - 0.15 - 0.2 * 2.5).epsilon(1e-10));
    CHECK_THROWS(cole_hopf_u(l, {0, 0}, 0.4, ViscousParams{0.1, 5.0}));
    CHECK_THROWS(cole_hopf_u(l, {0, 0}, 0.4, ViscousParams{0.0}));
}

TEST_CASE("closed-form Cole-Hopf agrees with tensor quadrature on the three-sector potential") {
    auto s = reference_spec();
    ViscousParams fine{0.2, 8.0, 1600};
    for (Vec2 x : {Vec2{0.6, 0.2}, Vec2{0.27, 0.4}, Vec2{-0.3, 0.5}}) {
        auto a = cole_hopf(s, x, 0.3, fine);
        auto b = cole_hopf_quadrature(s, x, 0.3, fine);
        CHECK(std::abs(a.u - b.u) <= 1e-5);
        CHECK(norm(a.grad - b.grad) <= 1e-4);
    }
    // 1D min form
    auto one = PotentialSpec::min_of({{1, 0}, {-1, 0}}, 1);
    auto a = cole_hopf(one, {0.3, 0}, 0.7, fine);
    auto b = cole_hopf_quadrature(one, {0.3, 0}, 0.7, fine);
    CHECK(std::abs(a.u - b.u) <= 1e-6);
    CHECK(std::abs(a.grad.x - b.grad.x) <= 1e-5);
}

TEST_CASE("vanishing viscosity trend for u") {
    auto s = reference_spec();
    double t = 0.3;
    for (Vec2 x : {Vec2{0.6, 0.2}, Vec2{0.27, 0.4}}) {
        double u = hopf_lax_u(s, x, t), prev = 1e300;
        for (double eps : {0.2, 0.1, 0.05}) {
            double gap = std::abs(cole_hopf_u(s, x, t, ViscousParams{eps}) - u);
            CHECK(gap < prev);
            CHECK(gap <= 3 * eps * std::log(1 / eps));
            prev = gap;
        }
    }
}

TEST_CASE("viscous velocity approaches the sector velocity") {
    auto s = reference_spec();
    double t = 0.3;
    Vec2 b = oracle::circumcenter(oracle::reference);
    // deep inside each Eulerian sector: farthest t v_i
    for (int i = 0; i < 3; ++i) {
        Vec2 dir = t * b - t * oracle::reference[i];
        Vec2 x = t * b + 0.6 * dir / norm(dir);
        auto g = cole_hopf_grad(s, x, t, ViscousParams{0.01});
        CHECK(norm(g - oracle::reference[i]) <= 1e-3);
        CHECK(norm(g) <= s.K + 1e-12);
    }
}

TEST_CASE("soft Legendre transform") {
    ViscousParams vp{0.1};
    CHECK(soft_legendre_w(PotentialSpec::zero(), {0.3, 0.4}, 0.5, vp) == doctest::Approx(0.125).epsilon(1e-15));
    auto s = reference_spec();
    double t = 0.3;
    for (Vec2 x : {Vec2{0.6, 0.2}, Vec2{0.27, 0.4}, Vec2{-2, 1}})
        for (double eps : {0.2, 0.02, 0.002})
            CHECK(std::abs(soft_legendre_w(s, x, t, ViscousParams{eps}) -
                           soft_legendre_w_direct(s, x, t, ViscousParams{eps})) <= 1e-8);
    // quadrature route for a non-min potential
    auto q = PotentialSpec::quadratic(s, 0.5);
    ViscousParams fine{0.1, 8.0, 800};
    CHECK(std::abs(soft_legendre_w(q, {0.2, 0.1}, 0.4, fine) - soft_legendre_w_direct(q, {0.2, 0.1}, 0.4, fine)) <= 1e-5);

    // eps -> 0 limit against the grid conjugate of psi_t
    Grid g = Grid::box({-3, -3}, {3, 3}, 241);
    auto psi = sample_psi(s, g, t);
    auto w = legendre_2d(psi, auto_dual_grid(psi));
    double h = g.spacing(0);
    for (Vec2 x : {Vec2{0.6, 0.2}, Vec2{0.27, 0.4}}) {
        double wg = w.eval(x);
        for (double eps : {0.1, 0.03, 0.01})
            CHECK(std::abs(soft_legendre_w(s, x, t, ViscousParams{eps}) - wg) <= 3 * eps * std::log(1 / eps) + h * h);
    }
}

TEST_CASE("Galilean transformation") {
    auto l = galilean_transform(PotentialSpec::linear({1, 2}), {0.5, 0.5});
    CHECK(l.kind == PotentialKind::linear);
    CHECK(l.vectors[0] == Vec2{0.5, 1.5});
    auto s = reference_spec();
    auto h = galilean_transform(s, oracle::reference[2]);
    CHECK(h.vectors[2] == Vec2{0, 0});
    Grid g = Grid::box({-1, -1}, {1, 1}, 11);
    ViscousParams vp{0.05};
    auto r = galilean_check(s, {0.4, -1.1}, 0.3, g, &vp);
    CHECK(r.inviscid <= 1e-10);
    CHECK(r.w <= 1e-10);
    CHECK(r.viscous <= 1e-10);
}

TEST_CASE("lambda rescaling") {
    auto s = reference_spec();
    Grid g = Grid::box({-1, -1}, {1, 1}, 9);
    auto id = lambda_rescale_check(s, 0.0, 0.4, g);
    CHECK(id.inviscid <= 1e-15);
    auto r = lambda_rescale_check(s, 0.5, 0.4, g);
    CHECK(r.inviscid <= 1e-8);
    ViscousParams vp{0.1, 8.0, 800};
    Grid small = Grid::box({-0.5, -0.5}, {0.5, 0.5}, 3);
    auto v = lambda_rescale_check(s, 0.5, 0.4, small, &vp);
    CHECK(v.viscous <= 1e-5);
    CHECK_THROWS(rescale_hat_time(0.5, -1.0));
}

TEST_CASE("Lipschitz, semi-concavity and w-eps convexity bounds") {
    Grid g = Grid::box({-1, -1}, {1, 1}, 21);
    auto s = reference_spec();
    double tol = 1e-6;
    for (double t : {0.1, 0.3}) {
        auto c = check_fields(s, t, g, ViscousParams{0.05});
        CHECK(c.max_grad_u <= s.K + tol);
        CHECK(c.max_grad_u_eps <= s.K + tol);
        CHECK(c.min_concavity >= -tol);
        CHECK(c.min_w_eps_eig >= -tol);
    }
}

TEST_CASE("Hopf-Lax semigroup on samples") {
    auto s = reference_spec();
    double t = 0.3, r = 0.1;
    Grid g = Grid::box({-2, -2}, {2, 2}, 201);
    auto us = PotentialSpec::sampled(sample_u(s, g, r));
    double h = g.spacing(0), err = 0;
    for (Vec2 x : {Vec2{0.6, 0.2}, Vec2{0.27, 0.4}, Vec2{-0.5, 0.3}, Vec2{0, 0}})
        err = std::max(err, std::abs(hopf_lax_u(us, x, t - r) - hopf_lax_u(s, x, t)));
    CHECK(err <= h * h / (t - r));
}

TEST_CASE("potential json round trip") {
    auto s = PotentialSpec::from_json(R"({"kind":"piecewise_linear_min","vectors":[[1.8,0],[2.5,1.5],[0,0]]})");
    CHECK(s.is_three_sector());
    CHECK(s.vectors[1] == Vec2{2.5, 1.5});
    auto t = PotentialSpec::from_json(s.to_json());
    CHECK(t.vectors == s.vectors);
    CHECK_THROWS(PotentialSpec::from_json(R"({"kind":"bogus"})"));
}
