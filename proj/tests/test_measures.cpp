#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "adhesion/measures.hpp"
#include "adhesion/riemann3.hpp"
#include "oracles.hpp"

using namespace adhesion;

namespace {
PotentialSpec reference_spec() { return PotentialSpec::min_of({oracle::reference.begin(), oracle::reference.end()}); }
}  // namespace

TEST_CASE("cell grids put nodes at cell centres") {
    Window w = Window::box({0, 0}, {1, 2});
    Grid g = cell_grid(w, 4, 8);
    CHECK(g.lo[0] == doctest::Approx(0.125));
    CHECK(g.hi[1] == doctest::Approx(1.875));
    CHECK(g.cell_volume() == doctest::Approx(1.0 / 16));
    Window back = window_of_cells(g);
    CHECK(norm(back.lo - w.lo) < 1e-15);
    CHECK(norm(back.hi - w.hi) < 1e-15);
    CHECK(w.volume() == 2.0);
    CHECK(w.contains({1, 2}));
    CHECK_FALSE(w.contains({1.01, 0}));
    CHECK(Window::line(-1, 3).volume() == 4.0);
}

TEST_CASE("measure masses and integrals") {
    Window w = Window::box({0, 0}, {2, 1});
    auto m = lebesgue(w, 8, 4);
    CHECK(m.total_mass() == doctest::Approx(2.0));
    // midpoint cells integrate affine functions exactly
    CHECK(m.integrate([](Vec2 p) { return p.x + 2 * p.y; }) == doctest::Approx(4.0));
    m.atoms.push_back({{0.5, 0.5}, 0.25});
    LineSegment s{{0, 0}, {1, 0}, 2.0, -1.0};
    CHECK(s.mass() == doctest::Approx(1.5));
    m.segments.push_back(s);
    CHECK(m.total_mass() == doctest::Approx(3.75));
    // int_0^1 x (2 - x) dx = 2/3
    m.ac.reset();
    m.atoms.clear();
    CHECK(m.integrate([](Vec2 p) { return p.x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    m.validate();
    m.segments[0].c0 = -3;
    CHECK_THROWS(m.validate());
}

TEST_CASE("json layout of a measure") {
    Window w = Window::box({0, 0}, {1, 1});
    auto m = lebesgue(w, 2, 2);
    m.atoms.push_back({{0.5, 0.25}, 0.1});
    m.segments.push_back({{0, 0}, {1, 1}, 1.0, 0.5});
    auto j = nlohmann::json::parse(m.to_json());
    CHECK(j["ac"]["values"].size() == 4);
    CHECK(j["atoms"][0]["m"].get<double>() == 0.1);
    CHECK(j["segments"][0]["c1"].get<double>() == 0.5);
    CHECK(j["window"]["hi"][1].get<double>() == 1.0);
}

TEST_CASE("histograms count points per cell and drop outsiders") {
    Grid cells = cell_grid(Window::box({0, 0}, {1, 1}), 2, 2);
    auto m = histogram({{0.1, 0.1}, {0.2, 0.3}, {0.9, 0.9}, {1.5, 0.5}}, 0.5, cells);
    CHECK(m.ac->at(0, 0) == doctest::Approx(4.0));
    CHECK(m.ac->at(1, 1) == doctest::Approx(2.0));
    CHECK(m.total_mass() == doctest::Approx(1.5));
}

TEST_CASE("atom extraction moves a point mass out of the density") {
    Grid cells = cell_grid(Window::box({0, 0}, {1, 1}), 20, 20);
    std::vector<Vec2> pts;
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j) pts.push_back({(i + 0.5) / 200, (j + 0.5) / 200});
    double each = 1.0 / pts.size();
    for (int k = 0; k < 8000; ++k) pts.push_back({0.4321, 0.6543});
    auto m = histogram(pts, each, cells);
    extract_atoms(m, pts);
    REQUIRE(m.atoms.size() == 1);
    CHECK(m.atoms[0].m == doctest::Approx(8000 * each).epsilon(1e-12));
    // the reported position is the mean landing point of the cell
    CHECK(norm(m.atoms[0].p - Vec2{0.4321, 0.6543}) < 1e-3);
    CHECK(m.ac_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flat metric") {
    Window w = Window::box({0, 0}, {1, 1});
    auto a = lebesgue(w, 8, 8);
    CHECK(flat_metric(a, a, w) == 0.0);
    auto b = a, c = a;
    b.atoms.push_back({{0.5, 0.5}, 0.2});
    c.atoms.push_back({{0.52, 0.5}, 0.2});
    // tests are 1-Lipschitz and bounded by their radius
    double d = flat_metric(b, c, w);
    CHECK(d > 0);
    CHECK(d <= 0.2 * 0.02 + 1e-15);
    auto dict = FlatDictionary::make(w);
    CHECK(dict.centres.size() == 256);
    CHECK(dict.radii.size() == 3);
    CHECK(flat_metric(a, b, dict) == doctest::Approx(0.2 * dict.best_value_at({0.5, 0.5})).epsilon(1e-12));
}

TEST_CASE("Monge-Ampere measure of the 1D shock") {
    auto s = PotentialSpec::min_of({{1, 0}, {-1, 0}}, 1);
    double t = 2;
    Grid cells = cell_grid(Window::line(-6, 6), 120);
    Grid seeds = Grid::line(-8, 8, 3201);
    auto exact = monge_ampere_measure(s, t, cells, seeds);
    REQUIRE(exact.atoms.size() == 1);
    CHECK(exact.atoms[0].m == 4.0);
    CHECK(exact.atoms[0].p.x == 0.0);
    auto grid = monge_ampere_measure(s, t, cells, seeds, false);
    REQUIRE(grid.atoms.size() == 1);
    CHECK(grid.atoms[0].m == doctest::Approx(4.0).epsilon(0.02));
    CHECK(std::abs(grid.atoms[0].p.x) < 0.05);
}

TEST_CASE("Monge-Ampere measure of three-sector data is the exact table") {
    auto s = reference_spec();
    double t = 0.3;
    Grid cells = cell_grid(Window::box({-1, -1}, {1, 1}), 16, 16);
    auto nu = monge_ampere_measure(s, t, cells, Grid::box({-1, -1}, {1, 1}, 5));
    REQUIRE(nu.atoms.size() == 1);
    CHECK(nu.atoms[0].m == doctest::Approx(0.1215).epsilon(1e-14));
    CHECK(nu.segments.size() == 3);
    for (double v : nu.ac->values) CHECK(v == 1.0);
}

TEST_CASE("smooth data gives unit densities") {
    Grid cells = cell_grid(Window::box({-0.5, -0.5}, {0.5, 0.5}), 10, 10);
    ViscousParams vp;
    vp.eps = 0.1;
    auto z = PotentialSpec::zero();
    auto vd = viscous_density(z, vp, cells, 0.3, Grid::box({-0.475, -0.475}, {0.475, 0.475}, 20));
    for (double v : vd.measure.ac->values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vd.near_singular == 0);
    auto ma = smoothed_MA_density(z, vp, cells, 0.3);
    for (double v : ma.measure.ac->values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(ma.min_eig_margin) < 1e-9);
    Grid g = Grid::box({-1, -1}, {1, 1}, 21);
    auto w = sample(g, [](Vec2 x) { return 0.5 * norm2(x) + 0.3 * x.x * x.y; });
    for (double v : alexandrov_density(w).values) CHECK(v == doctest::Approx(1 - 0.09).epsilon(1e-9));
}

TEST_CASE("Lebesgue decomposition of the three-sector limit flow") {
    auto p = build(oracle::equilateral());
    auto s = PotentialSpec::min_of({p.v.begin(), p.v.end()});
    double t = 0.3;
    Grid seeds = Grid::box({-0.995, -0.995}, {0.995, 0.995}, 200);
    auto b = limit_flow(s, grid_seeds(seeds), {0.0, t}, default_eps_ladder());
    b.seed_volume = seeds.cell_volume();
    Grid cells = cell_grid(Window::box({-2, -2}, {2, 2}), 40, 40);
    auto d = lebesgue_decomposition(b, seeds, t, cells);
    int total = d.sets.count(d.sets.in) + d.sets.count(d.sets.sg) + d.sets.count(d.sets.nd);
    CHECK(total == int(seeds.size()));
    // deep inside the absorbed triangle: singular; far in a sector: regular
    auto at = [&](Vec2 y) {
        std::size_t best = 0;
        for (std::size_t k = 0; k < seeds.size(); ++k)
            if (norm(seeds.point(k) - y) < norm(seeds.point(best) - y)) best = k;
        return best;
    };
    CHECK(d.sets.sg[at(t * p.b - (t / 3) * (p.v[0] + p.v[1] + p.v[2]))]);
    CHECK(d.sets.in[at({0.0, -0.9})]);
    CHECK(d.ac.total_mass() + d.sg.total_mass() == doctest::Approx(seeds.size() * seeds.cell_volume()));
    // singular seeds crowd onto the filaments: far fewer cells than seeds
    CHECK(d.sg_image_area < 0.25 * d.sg.total_mass() / seeds.cell_volume() * cells.cell_volume());
}

TEST_CASE("singular support mask and ac agreement") {
    auto p = build(oracle::reference);
    double t = 0.3;
    Window w = Window::box({-1, -1}, {1, 1});
    auto m = exact_measures(p, t, w, 20, OutflowFit{0, 0, 0.1});
    Grid cells = m.nu.ac->grid;
    auto mask = singular_support_mask(m.nu, cells, 1);
    long k = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) k += mask[c];
    CHECK(k > 0);
    CHECK(k < long(cells.size()) / 2);
    CHECK(mask[cells.index(int((t * p.b.x + 1) / 0.1), int((t * p.b.y + 1) / 0.1))]);
    auto r = ac_agreement_check(m.rho, m.nu, mask);
    CHECK(r.max_rel_between == 0.0);
    CHECK(r.cells == long(cells.size()) - k);
}
