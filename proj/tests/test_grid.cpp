#include <doctest.h>

#include <sstream>

#include "adhesion/grid.hpp"

using namespace adhesion;

TEST_CASE("grid coordinates are reproducible from the index") {
    Grid g = Grid::box({-1, -2}, {1, 2}, 5, 9);
    CHECK(g.size() == 45);
    CHECK(g.spacing(0) == doctest::Approx(0.5));
    CHECK(g.point(g.index(4, 8)).x == 1.0);
    CHECK(g.point(g.index(4, 8)).y == 2.0);
    CHECK(g.multi(g.index(3, 7))[1] == 7);
    CHECK_THROWS(Grid::line(0, 1, 1));
    CHECK_THROWS(Grid::line(1, 0, 5));
}

TEST_CASE("affine extension extrapolates the boundary cell") {
    Grid g = Grid::line(0, 1, 11);
    auto f = sample(g, [](Vec2 p) { return 2 * p.x + 1; });
    CHECK(f.eval({1.5, 0}) == doctest::Approx(4.0));
    CHECK(f.eval({-0.5, 0}) == doctest::Approx(0.0));
    f.extension = Extension::clamp;
    CHECK(f.eval({1.5, 0}) == doctest::Approx(3.0));
    f.extension = Extension::undefined;
    CHECK_THROWS(f.eval({1.5, 0}));
}

TEST_CASE("bilinear interpolation reproduces bilinear data") {
    Grid g = Grid::box({0, 0}, {1, 1}, 4, 6);
    auto f = sample(g, [](Vec2 p) { return 1 + p.x - 2 * p.y + 3 * p.x * p.y; });
    Vec2 q{0.37, 0.81};
    CHECK(f.eval(q) == doctest::Approx(1 + q.x - 2 * q.y + 3 * q.x * q.y).epsilon(1e-13));
}

TEST_CASE("csv round trip is exact") {
    Grid g = Grid::box({-1, 0}, {1, 0.3}, 3, 4);
    auto f = sample(g, [](Vec2 p) { return p.x / 3 + p.y * 1e-7; });
    std::stringstream ss;
    write_csv(ss, f);
    auto h = read_csv(ss);
    CHECK(h.grid.same_as(g));
    CHECK(h.values == f.values);
}
