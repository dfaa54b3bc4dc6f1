#include "adhesion/grid.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace adhesion {

Grid Grid::line(double lo, double hi, int n) {
    Grid g;
    g.dim = 1;
    g.lo = {lo, 0.0};
    g.hi = {hi, 0.0};
    g.n = {n, 1};
    g.validate();
    return g;
}

Grid Grid::box(Vec2 lo, Vec2 hi, int n0, int n1) {
    Grid g;
    g.dim = 2;
    g.lo = {lo.x, lo.y};
    g.hi = {hi.x, hi.y};
    g.n = {n0, n1};
    g.validate();
    return g;
}

void Grid::validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
        if (n[a] < 2) throw std::invalid_argument("grid: need at least 2 nodes per axis");
        if (!(hi[a] > lo[a])) throw std::invalid_argument("grid: hi must exceed lo");
    }
}

Vec2 Grid::point(std::size_t k) const {
    if (dim == 1) return {coord(0, int(k)), 0.0};
    return {coord(0, int(k / n[1])), coord(1, int(k % n[1]))};
}

std::array<int, 2> Grid::multi(std::size_t k) const {
    if (dim == 1) return {int(k), 0};
    return {int(k / n[1]), int(k % n[1])};
}

bool Grid::contains(Vec2 p) const {
    if (p.x < lo[0] || p.x > hi[0]) return false;
    return dim == 1 || (p.y >= lo[1] && p.y <= hi[1]);
}

bool Grid::interior(Vec2 p) const {
    if (p.x <= lo[0] || p.x >= hi[0]) return false;
    return dim == 1 || (p.y > lo[1] && p.y < hi[1]);
}

bool Grid::same_as(const Grid& o) const {
    if (dim != o.dim) return false;
    for (int a = 0; a < dim; ++a)
        if (lo[a] != o.lo[a] || hi[a] != o.hi[a] || n[a] != o.n[a]) return false;
    return true;
}

ScalarField::ScalarField(Grid g, std::vector<double> v, Extension e)
    : grid(g), values(std::move(v)), extension(e) {
    grid.validate();
    if (values.size() != grid.size()) throw std::invalid_argument("field: value count does not match grid");
}

namespace {

// cell index and local coordinate, local coordinate may leave [0,1] when extrapolating
void locate_axis(const Grid& g, int a, double p, int& i, double& s) {
    double h = g.spacing(a);
    double r = (p - g.lo[a]) / h;
    i = int(std::floor(r));
    i = std::clamp(i, 0, g.n[a] - 2);
    s = r - i;
}

}  // namespace

double ScalarField::eval(Vec2 p) const {
    if (extension == Extension::undefined && !grid.contains(p))
        throw std::out_of_range("field: query outside grid with undefined extension");
    if (extension == Extension::clamp) {
        p.x = std::clamp(p.x, grid.lo[0], grid.hi[0]);
        if (grid.dim == 2) p.y = std::clamp(p.y, grid.lo[1], grid.hi[1]);
    }
    int i, j;
    double s, r;
    locate_axis(grid, 0, p.x, i, s);
    if (grid.dim == 1) return (1 - s) * values[i] + s * values[i + 1];
    locate_axis(grid, 1, p.y, j, r);
    double f00 = at(i, j), f01 = at(i, j + 1), f10 = at(i + 1, j), f11 = at(i + 1, j + 1);
    return (1 - s) * ((1 - r) * f00 + r * f01) + s * ((1 - r) * f10 + r * f11);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const ScalarField& f) {
    const Grid& g = f.grid;
    os << "# grid ";
    if (g.dim == 1)
        os << fmt17(g.lo[0]) << ' ' << fmt17(g.hi[0]) << ' ' << g.n[0];
    else
        os << fmt17(g.lo[0]) << ',' << fmt17(g.lo[1]) << ' ' << fmt17(g.hi[0]) << ',' << fmt17(g.hi[1]) << ' '
           << g.n[0] << ',' << g.n[1];
    os << ' ' << g.dim << '\n';
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto m = g.multi(k);
        os << m[0];
        if (g.dim == 2) os << ',' << m[1];
        os << ',' << fmt17(f.values[k]) << '\n';
    }
}

ScalarField read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# grid ", 0) != 0)
        throw std::runtime_error("csv: missing '# grid' header");
    std::istringstream hs(line.substr(7));
    std::string lo, hi, n;
    int dim = 0;
    hs >> lo >> hi >> n >> dim;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(tok);
        return out;
    };
    auto l = split(lo), h = split(hi), c = split(n);
    Grid g;
    if (dim == 1)
        g = Grid::line(std::stod(l.at(0)), std::stod(h.at(0)), std::stoi(c.at(0)));
    else if (dim == 2)
        g = Grid::box({std::stod(l.at(0)), std::stod(l.at(1))}, {std::stod(h.at(0)), std::stod(h.at(1))},
                      std::stoi(c.at(0)), std::stoi(c.at(1)));
    else
        throw std::runtime_error("csv: bad dim in header");
    std::vector<double> v(g.size(), 0.0);
    std::vector<char> seen(g.size(), 0);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto tok = split(line);
        if (int(tok.size()) != dim + 1) throw std::runtime_error("csv: bad row '" + line + "'");
        int i0 = std::stoi(tok[0]);
        int i1 = dim == 2 ? std::stoi(tok[1]) : 0;
        if (i0 < 0 || i0 >= g.n[0] || (dim == 2 && (i1 < 0 || i1 >= g.n[1])))
            throw std::runtime_error("csv: index out of range");
        std::size_t k = g.index(i0, i1);
        v[k] = std::stod(tok.back());
        seen[k] = 1;
    }
    for (char s : seen)
        if (!s) throw std::runtime_error("csv: missing nodes");
    return ScalarField(g, std::move(v));
}

}  // namespace adhesion
