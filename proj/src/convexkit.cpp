#include "adhesion/convexkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace adhesion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seg_dist(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double L = norm2(d);
    double s = L > 0 ? std::clamp(dot(p - a, d) / L, 0.0, 1.0) : 0.0;
    return norm(p - (a + s * d));
}

// Discrete conjugate of one line of samples. Lower hull sweep, then a monotone pointer over
// increasing dual coordinates.
void conj_line(const std::vector<double>& y, const std::vector<double>& f, const std::vector<double>& x,
               std::vector<double>& out) {
    const int n = int(y.size());
    std::vector<int> hull;
    hull.reserve(n);
    for (int k = 0; k < n; ++k) {
        while (hull.size() >= 2) {
            int a = hull[hull.size() - 2], b = hull.back();
            double c = (y[b] - y[a]) * (f[k] - f[a]) - (f[b] - f[a]) * (y[k] - y[a]);
            if (c < 0) hull.pop_back();
            else break;
        }
        hull.push_back(k);
    }
    out.resize(x.size());
    std::size_t p = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double xv = x[j];
        double best = xv * y[hull[p]] - f[hull[p]];
        while (p + 1 < hull.size()) {
            double nxt = xv * y[hull[p + 1]] - f[hull[p + 1]];
            if (nxt > best) { best = nxt; ++p; }
            else break;
        }
        out[j] = best;
    }
}

std::vector<double> axis_coords(const Grid& g, int a) {
    std::vector<double> c(g.n[a]);
    for (int i = 0; i < g.n[a]; ++i) c[i] = g.coord(a, i);
    return c;
}

void check_dual(const ScalarField& f, const Grid& dual) {
    if (dual.dim != f.grid.dim) throw std::invalid_argument("legendre: dual grid dimension mismatch");
    auto r = slope_range(f);
    for (int a = 0; a < f.grid.dim; ++a) {
        double slack = 1e-12 * (1.0 + std::max(std::abs(r[a].first), std::abs(r[a].second)));
        if (dual.lo[a] > r[a].first + slack || dual.hi[a] < r[a].second - slack) {
            std::ostringstream os;
            os << "legendre: dual grid [" << dual.lo[a] << ", " << dual.hi[a] << "] on axis " << a
               << " does not cover slope range [" << r[a].first << ", " << r[a].second << "]";
            throw std::invalid_argument(os.str());
        }
    }
}

ScalarField conj1(const ScalarField& f, const Grid& dual) {
    std::vector<double> out;
    conj_line(axis_coords(f.grid, 0), f.values, axis_coords(dual, 0), out);
    return ScalarField(dual, std::move(out), f.extension);
}

ScalarField conj2(const ScalarField& f, const Grid& dual) {
    const Grid& g = f.grid;
    const int n0 = g.n[0], n1 = g.n[1], m0 = dual.n[0], m1 = dual.n[1];
    auto y0 = axis_coords(g, 0), y1 = axis_coords(g, 1);
    auto x0 = axis_coords(dual, 0), x1 = axis_coords(dual, 1);
    // pass along axis 2: mid(i0, j1) = max_i1 x1*y1 - f
    std::vector<double> mid(std::size_t(n0) * m1);
    std::vector<double> row(n1), tmp;
    for (int i0 = 0; i0 < n0; ++i0) {
        for (int i1 = 0; i1 < n1; ++i1) row[i1] = f.at(i0, i1);
        conj_line(y1, row, x1, tmp);
        std::copy(tmp.begin(), tmp.end(), mid.begin() + std::size_t(i0) * m1);
    }
    // pass along axis 1 on h = -mid
    std::vector<double> out(std::size_t(m0) * m1);
    std::vector<double> col(n0);
    for (int j1 = 0; j1 < m1; ++j1) {
        for (int i0 = 0; i0 < n0; ++i0) col[i0] = -mid[std::size_t(i0) * m1 + j1];
        conj_line(y0, col, x0, tmp);
        for (int j0 = 0; j0 < m0; ++j0) out[std::size_t(j0) * m1 + j1] = tmp[j0];
    }
    return ScalarField(dual, std::move(out), f.extension);
}

}  // namespace

SubgradientSet SubgradientSet::interval(double a, double b) {
    if (a > b) throw std::invalid_argument("subgradient interval with lo > hi");
    SubgradientSet s;
    s.dim = 1;
    s.lo = a;
    s.hi = b;
    s.shape = a == b ? Shape::point : Shape::segment;
    s.vertices = {{a, 0.0}, {b, 0.0}};
    if (a == b) s.vertices.resize(1);
    return s;
}

SubgradientSet SubgradientSet::from_points(std::vector<Vec2> pts) {
    if (pts.empty()) throw std::invalid_argument("subgradient set from no points");
    SubgradientSet s;
    s.dim = 2;
    s.vertices = convex_hull(std::move(pts));
    s.shape = s.vertices.size() == 1 ? Shape::point : s.vertices.size() == 2 ? Shape::segment : Shape::polygon;
    return s;
}

double SubgradientSet::diameter() const {
    if (dim == 1) return hi - lo;
    double d = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j) d = std::max(d, norm(vertices[i] - vertices[j]));
    return d;
}

double SubgradientSet::area() const {
    if (shape != Shape::polygon) return 0.0;
    double a = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        a += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
    return 0.5 * a;
}

Vec2 SubgradientSet::centroid() const {
    if (dim == 1) return {0.5 * (lo + hi), 0.0};
    if (shape != Shape::polygon) {
        Vec2 c;
        for (auto v : vertices) c += v;
        return c / double(vertices.size());
    }
    double A = 0;
    Vec2 c;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        Vec2 p = vertices[i], q = vertices[(i + 1) % vertices.size()];
        double w = cross(p, q);
        A += w;
        c += w * (p + q);
    }
    return c / (3.0 * A);
}

double SubgradientSet::distance(Vec2 p) const {
    if (dim == 1) {
        if (p.x < lo) return lo - p.x;
        if (p.x > hi) return p.x - hi;
        return 0.0;
    }
    if (shape == Shape::point) return norm(p - vertices[0]);
    if (shape == Shape::segment) return seg_dist(p, vertices[0], vertices[1]);
    bool inside = true;
    double d = kInf;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        Vec2 a = vertices[i], b = vertices[(i + 1) % vertices.size()];
        if (cross(b - a, p - a) < 0) inside = false;
        d = std::min(d, seg_dist(p, a, b));
    }
    return inside ? 0.0 : d;
}

std::string SubgradientSet::to_json() const {
    std::ostringstream os;
    os << "{\"dim\":" << dim << ",\"vertices\":[";
    if (dim == 1) {
        os << "[" << fmt17(lo) << "],[" << fmt17(hi) << "]";
    } else {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            os << (i ? "," : "") << "[" << fmt17(vertices[i].x) << "," << fmt17(vertices[i].y) << "]";
    }
    os << "]}";
    return os.str();
}

double hausdorff(const SubgradientSet& a, const SubgradientSet& b) {
    if (a.dim == 1 && b.dim == 1) return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
    double d = 0;
    for (auto v : a.vertices) d = std::max(d, b.distance(v));
    for (auto v : b.vertices) d = std::max(d, a.distance(v));
    return d;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return h;
}

std::vector<std::pair<double, double>> slope_range(const ScalarField& f) {
    const Grid& g = f.grid;
    std::vector<std::pair<double, double>> r(g.dim, {kInf, -kInf});
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto m = g.multi(k);
        for (int a = 0; a < g.dim; ++a) {
            if (m[a] + 1 >= g.n[a]) continue;
            std::size_t k2 = a == 0 ? g.index(m[0] + 1, m[1]) : g.index(m[0], m[1] + 1);
            double s = (f.values[k2] - f.values[k]) / g.spacing(a);
            r[a].first = std::min(r[a].first, s);
            r[a].second = std::max(r[a].second, s);
        }
    }
    return r;
}

Grid auto_dual_grid(const ScalarField& f, double refine, double pad) {
    auto r = slope_range(f);
    const Grid& g = f.grid;
    std::array<double, 2> lo{}, hi{};
    std::array<int, 2> n{1, 1};
    for (int a = 0; a < g.dim; ++a) {
        double w = r[a].second - r[a].first;
        double p = pad * std::max(w, 1e-6 * (1.0 + std::abs(r[a].first) + std::abs(r[a].second)));
        lo[a] = r[a].first - p;
        hi[a] = r[a].second + p;
        n[a] = std::max(3, int(std::ceil(refine * g.n[a])));
    }
    if (g.dim == 1) return Grid::line(lo[0], hi[0], n[0]);
    return Grid::box({lo[0], lo[1]}, {hi[0], hi[1]}, n[0], n[1]);
}

Grid lattice_dual_grid(const ScalarField& f, double refine) {
    auto r = slope_range(f);
    const Grid& g = f.grid;
    std::array<double, 2> lo{}, hi{};
    std::array<int, 2> n{1, 1};
    for (int a = 0; a < g.dim; ++a) {
        double w = std::max(r[a].second - r[a].first, 1e-6 * (1.0 + std::abs(r[a].first) + std::abs(r[a].second)));
        double hd = std::exp2(std::floor(std::log2(w / (refine * (g.n[a] - 1)))));
        double i0 = std::floor(r[a].first / hd) - 2, i1 = std::ceil(r[a].second / hd) + 2;
        lo[a] = i0 * hd;
        hi[a] = i1 * hd;
        n[a] = int(i1 - i0) + 1;
    }
    if (g.dim == 1) return Grid::line(lo[0], hi[0], n[0]);
    return Grid::box({lo[0], lo[1]}, {hi[0], hi[1]}, n[0], n[1]);
}

ScalarField legendre_1d(const ScalarField& f, const Grid& dual) {
    if (f.grid.dim != 1) throw std::invalid_argument("legendre_1d: field is not 1D");
    check_dual(f, dual);
    return conj1(f, dual);
}

ScalarField legendre_2d(const ScalarField& f, const Grid& dual) {
    if (f.grid.dim != 2) throw std::invalid_argument("legendre_2d: field is not 2D");
    check_dual(f, dual);
    return conj2(f, dual);
}

ScalarField legendre(const ScalarField& f, const Grid& dual) {
    return f.grid.dim == 1 ? legendre_1d(f, dual) : legendre_2d(f, dual);
}

ScalarField legendre_direct(const ScalarField& f, const Grid& dual) {
    const Grid& g = f.grid;
    std::vector<double> out(dual.size(), -kInf);
    for (std::size_t j = 0; j < dual.size(); ++j) {
        Vec2 x = dual.point(j);
        double best = -kInf;
        for (std::size_t k = 0; k < g.size(); ++k) {
            Vec2 y = g.point(k);
            double v = g.dim == 1 ? x.x * y.x - f.values[k] : x.x * y.x + (x.y * y.y - f.values[k]);
            best = std::max(best, v);
        }
        out[j] = best;
    }
    return ScalarField(dual, std::move(out), f.extension);
}

double curvature_scale(const ScalarField& f) {
    const Grid& g = f.grid;
    std::vector<double> c;
    c.reserve(g.size() * g.dim);
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto m = g.multi(k);
        for (int a = 0; a < g.dim; ++a) {
            if (m[a] == 0 || m[a] + 1 >= g.n[a]) continue;
            std::size_t kp = a == 0 ? g.index(m[0] + 1, m[1]) : g.index(m[0], m[1] + 1);
            std::size_t km = a == 0 ? g.index(m[0] - 1, m[1]) : g.index(m[0], m[1] - 1);
            double h = g.spacing(a);
            c.push_back(std::abs(f.values[kp] - 2 * f.values[k] + f.values[km]) / (h * h));
        }
    }
    double med = 0;
    if (!c.empty()) {
        auto mid = c.begin() + c.size() / 2;
        std::nth_element(c.begin(), mid, c.end());
        med = *mid;
    }
    auto r = slope_range(f);
    double unit = 0;
    for (int a = 0; a < g.dim; ++a) unit = std::max(unit, (r[a].second - r[a].first) / (g.hi[a] - g.lo[a]));
    return std::max({med, 1e-6 * unit, 1e-12});
}

ScalarField convexify(const ScalarField& f) {
    const Grid& g = f.grid;
    std::vector<double> v(g.size());
    if (g.dim == 1) {
        // exact discrete biconjugate: lower hull interpolant
        const int n = g.n[0];
        std::vector<int> hull;
        for (int k = 0; k < n; ++k) {
            while (hull.size() >= 2) {
                int a = hull[hull.size() - 2], b = hull.back();
                double c = double(b - a) * (f.values[k] - f.values[a]) - (f.values[b] - f.values[a]) * double(k - a);
                if (c < 0) hull.pop_back();
                else break;
            }
            hull.push_back(k);
        }
        for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
            int a = hull[s], b = hull[s + 1];
            v[a] = f.values[a];
            for (int k = a + 1; k < b; ++k)
                v[k] = f.values[a] + (f.values[b] - f.values[a]) * double(k - a) / double(b - a);
        }
        v[hull.back()] = f.values[hull.back()];
    } else {
        ScalarField fs = conj2(f, lattice_dual_grid(f));
        v = conj2(fs, g).values;
    }
    double h = g.max_spacing();
    double tau = h * h * curvature_scale(f);
    double gap = 0;
    for (std::size_t k = 0; k < v.size(); ++k) gap = std::max(gap, f.values[k] - v[k]);
    if (gap <= tau) return f;
    return ScalarField(g, std::move(v), f.extension);
}

SubgradientEstimator::SubgradientEstimator(const ScalarField& f_convex) : f_(f_convex) {
    curv_ = curvature_scale(f_);
    double h = f_.grid.max_spacing();
    collapse_ = 3.0 * h * curv_;
}

SubgradientSet SubgradientEstimator::at(Vec2 x) const {
    const Grid& g = f_.grid;
    if (!g.interior(x)) throw std::out_of_range("subgradient_at: point outside grid interior");
    if (g.dim == 1) {
        double h = g.spacing(0);
        double r = (x.x - g.lo[0]) / h;
        int k = int(std::lround(r));
        if (std::abs(r - k) <= 1e-9 && k > 0 && k + 1 < g.n[0]) {
            double a = (f_.values[k] - f_.values[k - 1]) / h;
            double b = (f_.values[k + 1] - f_.values[k]) / h;
            if (a > b) std::swap(a, b);
            if (b - a <= collapse_) return SubgradientSet::interval(0.5 * (a + b), 0.5 * (a + b));
            return SubgradientSet::interval(a, b);
        }
        int i = std::clamp(int(std::floor(r)), 0, g.n[0] - 2);
        double s = (f_.values[i + 1] - f_.values[i]) / h;
        return SubgradientSet::interval(s, s);
    }
    const double h0 = g.spacing(0), h1 = g.spacing(1);
    // nodes within four cells whose 3x3 block has small second differences; blocks cut by
    // a kink are skipped, so each smooth piece nearby contributes its gradient, carried
    // to x with the local Hessian
    const double rad = 4.0 * std::max(h0, h1);
    const double lim = 4.0 * h0 * h1 * curv_;
    auto smooth = [&](int i, int j) {
        for (int a = -1; a <= 1; ++a) {
            if (std::abs(f_.at(i + a, j + 1) - 2 * f_.at(i + a, j) + f_.at(i + a, j - 1)) > lim) return false;
            if (std::abs(f_.at(i + 1, j + a) - 2 * f_.at(i, j + a) + f_.at(i - 1, j + a)) > lim) return false;
        }
        for (int a : {-1, 0})
            for (int b : {-1, 0})
                if (std::abs(f_.at(i + a + 1, j + b + 1) - f_.at(i + a + 1, j + b) - f_.at(i + a, j + b + 1) +
                             f_.at(i + a, j + b)) > lim)
                    return false;
        return true;
    };
    auto grad = [&](int i, int j) {
        return Vec2{(f_.at(i + 1, j) - f_.at(i - 1, j)) / (2 * h0), (f_.at(i, j + 1) - f_.at(i, j - 1)) / (2 * h1)};
    };
    auto carried = [&](int i, int j) {
        Vec2 d = x - g.point(g.index(i, j));
        double fxx = (f_.at(i + 1, j) - 2 * f_.at(i, j) + f_.at(i - 1, j)) / (h0 * h0);
        double fyy = (f_.at(i, j + 1) - 2 * f_.at(i, j) + f_.at(i, j - 1)) / (h1 * h1);
        double fxy = (f_.at(i + 1, j + 1) - f_.at(i + 1, j - 1) - f_.at(i - 1, j + 1) + f_.at(i - 1, j - 1)) / (4 * h0 * h1);
        return grad(i, j) + Vec2{fxx * d.x + fxy * d.y, fxy * d.x + fyy * d.y};
    };
    std::vector<Vec2> sel, all;
    int i0 = std::max(1, int(std::floor((x.x - rad - g.lo[0]) / h0)));
    int i1 = std::min(g.n[0] - 2, int(std::ceil((x.x + rad - g.lo[0]) / h0)));
    int j0 = std::max(1, int(std::floor((x.y - rad - g.lo[1]) / h1)));
    int j1 = std::min(g.n[1] - 2, int(std::ceil((x.y + rad - g.lo[1]) / h1)));
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) {
            if (norm(g.point(g.index(i, j)) - x) > rad * (1 + 1e-12)) continue;
            all.push_back(grad(i, j));
            if (smooth(i, j)) sel.push_back(carried(i, j));
        }
    if (sel.empty()) sel = all;
    if (sel.empty()) {
        int i = std::clamp(int(std::lround((x.x - g.lo[0]) / h0)), 1, g.n[0] - 2);
        int j = std::clamp(int(std::lround((x.y - g.lo[1]) / h1)), 1, g.n[1] - 2);
        sel.push_back(grad(i, j));
    }
    const double collapse = collapse_;
    Vec2 mean;
    for (auto p : sel) mean += p;
    mean = mean / double(sel.size());
    SubgradientSet s = SubgradientSet::from_points(sel);
    if (s.diameter() <= collapse) return SubgradientSet::from_points({mean});
    if (s.shape == SubgradientSet::Shape::polygon) {
        // thin hull: report the centre line as a segment
        Vec2 a = s.vertices[0], b = s.vertices[0];
        double dmax = 0;
        for (auto p : s.vertices)
            for (auto q : s.vertices)
                if (norm(p - q) > dmax) { dmax = norm(p - q); a = p; b = q; }
        Vec2 u = (b - a) / dmax;
        double width = 0, smin = kInf, smax = -kInf;
        for (auto p : s.vertices) {
            width = std::max(width, std::abs(cross(u, p - mean)));
            smin = std::min(smin, dot(u, p - mean));
            smax = std::max(smax, dot(u, p - mean));
        }
        if (2 * width <= collapse) return SubgradientSet::from_points({mean + smin * u, mean + smax * u});
    }
    return s;
}

SubgradientSet subgradient_at(const ScalarField& f_convex, Vec2 x) {
    return SubgradientEstimator(f_convex).at(x);
}

Mask touching_set(const ScalarField& f, const ScalarField& f_cvx, double tol) {
    if (!f.grid.same_as(f_cvx.grid)) throw std::invalid_argument("touching_set: grids differ");
    if (tol < 0) {
        double h = f.grid.max_spacing();
        tol = 10.0 * h * h * curvature_scale(f);
    }
    Mask m(f.values.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = f.values[k] - f_cvx.values[k] <= tol;
    return m;
}

std::vector<Vec2> grid_gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    std::vector<Vec2> out(g.size());
    auto diff = [&](std::size_t k, int a) {
        auto m = g.multi(k);
        int i = m[a];
        auto idx = [&](int j) { return a == 0 ? g.index(j, m[1]) : g.index(m[0], j); };
        double h = g.spacing(a);
        if (i == 0) return (f.values[idx(1)] - f.values[idx(0)]) / h;
        if (i + 1 == g.n[a]) return (f.values[idx(i)] - f.values[idx(i - 1)]) / h;
        return (f.values[idx(i + 1)] - f.values[idx(i - 1)]) / (2 * h);
    };
    for (std::size_t k = 0; k < g.size(); ++k) {
        out[k].x = diff(k, 0);
        if (g.dim == 2) out[k].y = diff(k, 1);
    }
    return out;
}

Mask strict_convexity_set(const ScalarField& f_cvx, double rel) {
    const Grid& g = f_cvx.grid;
    auto G = grid_gradient(f_cvx);
    double thr = rel * curvature_scale(f_cvx);
    Mask m(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto c = g.multi(k);
        if (c[0] < 2 || c[0] + 2 >= g.n[0]) continue;
        double h0 = g.spacing(0);
        if (g.dim == 1) {
            m[k] = (G[k + 2].x - G[k - 2].x) / (4 * h0) >= thr;
            continue;
        }
        if (c[1] < 2 || c[1] + 2 >= g.n[1]) continue;
        double h1 = g.spacing(1);
        Vec2 dx = (G[g.index(c[0] + 2, c[1])] - G[g.index(c[0] - 2, c[1])]) / (4 * h0);
        Vec2 dy = (G[g.index(c[0], c[1] + 2)] - G[g.index(c[0], c[1] - 2)]) / (4 * h1);
        double a = dx.x, d = dy.y, b = 0.5 * (dx.y + dy.x);
        double lmin = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
        m[k] = lmin >= thr;
    }
    return m;
}

}  // namespace adhesion
