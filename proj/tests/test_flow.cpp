#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "adhesion/flow.hpp"
#include "adhesion/riemann3.hpp"
#include "oracles.hpp"

using namespace adhesion;

namespace {

PotentialSpec reference_spec() { return PotentialSpec::min_of({oracle::reference.begin(), oracle::reference.end()}); }

std::vector<Vec2> cloud(int n, double lo, double hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Vec2> out(n);
    for (auto& p : out) p = {u(rng), u(rng)};
    return out;
}

}  // namespace

TEST_CASE("path bundle bookkeeping and csv") {
    Grid g = Grid::box({0, 0}, {1, 1}, 3);
    auto b = make_bundle(g, {0.0, 0.5});
    CHECK(b.n_seeds() == 9);
    CHECK(b.seed_volume == doctest::Approx(0.25));
    for (std::size_t s = 0; s < 9; ++s) b.at(s, 0) = b.seeds[s], b.at(s, 1) = b.seeds[s] + Vec2{0.1, 0};
    b.validate();
    CHECK(b.time_index(0.5) == 1);
    CHECK_THROWS(b.time_index(0.4));
    std::ostringstream os;
    b.write_csv(os);
    std::string line;
    std::istringstream is(os.str());
    std::getline(is, line);
    CHECK(line == "seed_index,t,x1,x2");
    std::getline(is, line);
    std::getline(is, line);
    CHECK(line == "0,0.5,0.10000000000000001,0");
    b.times = {0.1, 0.5};
    CHECK_THROWS(b.validate());
}

TEST_CASE("viscous paths for affine data are straight lines") {
    auto seeds = cloud(20, -1, 1, 1);
    std::vector<double> times{0.0, 0.25, 1.0};
    ViscousParams vp;
    vp.eps = 0.1;
    auto z = integrate_viscous(PotentialSpec::zero(), seeds, times, vp);
    auto l = integrate_viscous(PotentialSpec::linear({0.5, -1.0}), seeds, times, vp);
    for (std::size_t s = 0; s < seeds.size(); ++s)
        for (std::size_t k = 0; k < times.size(); ++k) {
            CHECK(norm(z.at(s, k) - seeds[s]) < 1e-12);
            CHECK(norm(l.at(s, k) - (seeds[s] + times[k] * Vec2{0.5, -1.0})) < 1e-9);
        }
}

TEST_CASE("viscous velocity obeys the lambda rescaling") {
    auto base = reference_spec();
    double lambda = 0.5;
    auto s = PotentialSpec::quadratic(base, lambda);
    ViscousParams vp;
    vp.eps = 0.05;
    for (Vec2 x : {Vec2{0.1, 0.2}, Vec2{-0.5, 0.4}, Vec2{0.8, -0.3}})
        for (double t : {0.1, 0.3}) {
            double q = 1 + lambda * t;
            Vec2 expect = cole_hopf_grad(base, x / q, t / q, vp) / q + (lambda / q) * x;
            CHECK(norm(viscous_velocity(s, x, t, vp) - expect) < 1e-14);
        }
}

TEST_CASE("closed-form flows") {
    SUBCASE("convex quadratic data never collides") {
        // phi = v.y + lambda |y|^2 / 2: X_t = y + t grad phi
        Vec2 v{0.3, -0.2};
        auto s = PotentialSpec::quadratic(PotentialSpec::linear(v), 0.5);
        REQUIRE(has_exact_flow(s));
        for (Vec2 y : cloud(50, -1, 1, 2)) CHECK(norm(exact_flow(s, y, 0.7) - (y + 0.7 * (v + 0.5 * y))) < 1e-14);
    }
    SUBCASE("1D min of slopes: particles inside the shock interval sit on the shock") {
        auto s = PotentialSpec::min_of({{1, 0}, {-1, 0}}, 1);
        REQUIRE(has_exact_flow(s));
        double t = 2;
        for (double y : {-3.0, -2.0, -1.0, 0.0, 0.5, 2.0, 4.0}) {
            double expect = y < -2 ? y + 2 : (y > 2 ? y - 2 : 0.0);
            CHECK(exact_flow(s, {y, 0}, t).x == doctest::Approx(expect));
        }
    }
    SUBCASE("three-sector data delegates to the oracle") {
        auto s = reference_spec();
        auto p = build(s);
        for (Vec2 y : cloud(50, -1, 1, 3)) {
            CHECK(exact_flow(s, y, 0.3) == exact_X(p, y, 0.3));
            CHECK(exact_transport(s, y, 0.3) == exact_T(p, y, 0.3));
        }
    }
    CHECK_FALSE(has_exact_flow(PotentialSpec::min_of({{1, 0}, {0, 1}, {-1, 0}, {0, -1}})));
}

TEST_CASE("limit flow: fast path and the epsilon ladder") {
    auto s = reference_spec();
    auto seeds = cloud(6, -0.5, 0.5, 4);
    std::vector<double> times{0.0, 0.15, 0.3};
    auto fast = limit_flow(s, seeds, times, default_eps_ladder());
    CHECK(fast.eps == 0.0);
    CHECK(fast.rung_eps == 0.0);
    for (std::size_t k = 0; k < seeds.size(); ++k) CHECK(fast.at(k, 2) == exact_X(build(s), seeds[k], 0.3));

    LadderOptions opt;
    opt.fast_path = false;
    opt.tol = 0.05;
    auto lad = limit_flow(s, seeds, times, {0.04, 0.02, 0.01, 0.005}, opt);
    CHECK(lad.eps == 0.0);
    CHECK(lad.rung_eps > 0.0);
    CHECK_FALSE(lad.decrements.empty());
    CHECK(lad.converged);
    double gap = 0;
    for (std::size_t k = 0; k < seeds.size(); ++k) gap = std::max(gap, norm(lad.at(k, 2) - fast.at(k, 2)));
    CHECK(gap < 0.05);
    CHECK_THROWS_AS(limit_flow(s, seeds, times, {0.1, 0.2, 0.05}, opt), std::invalid_argument);
    CHECK_THROWS_AS(limit_flow(s, seeds, times, {0.1, 0.05}, opt), std::invalid_argument);
}

TEST_CASE("limit paths solve the differential inclusion") {
    auto s = reference_spec();
    std::vector<double> times;
    for (int k = 0; k <= 30; ++k) times.push_back(0.01 * k);
    auto b = limit_flow(s, cloud(200, -0.6, 0.6, 5), times, default_eps_ladder());
    auto r = inclusion_residual(b, s);
    CHECK(r.samples == 200 * 29);
    CHECK(r.max_residual < 1e-9);

    auto q = PotentialSpec::quadratic(s, 0.5);
    auto bq = limit_flow(q, cloud(100, -0.6, 0.6, 6), times, default_eps_ladder());
    CHECK(inclusion_residual(bq, q).max_residual < 1e-9);
}

TEST_CASE("contraction and sticking") {
    auto s = reference_spec();
    std::vector<double> times{0.0, 0.1, 0.2, 0.3, 0.6};
    auto b = limit_flow(s, cloud(150, -0.8, 0.8, 7), times, default_eps_ladder());
    auto r = contraction_check(b, 0.0);
    CHECK(r.pairs == 150 * 149 / 2);
    CHECK(r.ok());

    auto q = PotentialSpec::quadratic(s, 0.5);
    auto bq = limit_flow(q, cloud(150, -0.8, 0.8, 8), times, default_eps_ladder());
    CHECK(contraction_check(bq, 0.5).ok());

    // two paths that separate after meeting
    PathBundle bad;
    bad.seeds = {{0, 0}, {1, 0}};
    bad.times = {0.0, 1.0, 2.0};
    bad.positions = {{0, 0}, {0.5, 0}, {0, 0}, {1, 0}, {0.5, 0}, {2, 0}};
    auto rb = contraction_check(bad, 0.0);
    CHECK(rb.contraction.size() == 1);
    CHECK(rb.sticking.size() == 1);
    CHECK(rb.contraction[0].excess == doctest::Approx(2.0));
}

TEST_CASE("semiflow of the limit flow") {
    auto s = reference_spec();
    Grid g = Grid::box({-0.6, -0.6}, {0.6, 0.6}, 21);
    std::vector<double> times{0.0, 0.1, 0.2, 0.3};
    auto b = limit_flow(s, grid_seeds(g), times, default_eps_ladder());
    auto r = semiflow_map(b, 0.1, 0.2, 0.3, 0.0);
    CHECK(r.assoc_error < 1e-12);
    CHECK(r.lipschitz <= r.lipschitz_bound + 1e-9);
    CHECK(r.lipschitz_bound == 1.0);
    CHECK_THROWS(semiflow_map(b, 0.2, 0.1, 0.3, 0.0));
}

TEST_CASE("jacobian determinant of an affine map") {
    Grid g = Grid::box({0, 0}, {1, 1}, 5);
    std::vector<Vec2> img;
    for (auto y : grid_seeds(g)) img.push_back({2 * y.x + y.y, -y.x + 3 * y.y});
    for (double d : jacobian_det(g, img)) CHECK(d == doctest::Approx(7.0));
}

TEST_CASE("collision-free modification reaches the transport map") {
    auto s = reference_spec();
    double ts = 0.3;
    Grid g = Grid::box({-0.5, -0.5}, {0.5, 0.5}, 41);
    std::vector<double> times{0.0, 0.1, 0.2, 0.29, 0.3};
    auto cf = collision_free_flow(s, ts, g, times);
    CHECK(cf.closed_form);
    CHECK(cf.max_gap_T <= 1e-8);
    for (std::size_t k = 0; k + 1 < times.size(); ++k) CHECK(cf.min_det[k] > 0);

    auto gp = collision_free_flow(s, ts, g, times, false);
    CHECK_FALSE(gp.closed_form);
    CHECK(gp.max_gap_T <= 2 * g.spacing(0));
    // near t* the margin (1 - s/t*)^2 is below the Hessian noise of the grid convexification
    for (std::size_t k = 0; k < 3; ++k) CHECK(gp.min_det[k] > 0);
    CHECK_THROWS(collision_free_flow(s, ts, g, {0.0, 0.4}));
}
