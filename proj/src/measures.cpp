#include "adhesion/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "adhesion/riemann3.hpp"

namespace adhesion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 3-point Gauss on [-1, 1]
const double kGx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
const double kGw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

nlohmann::json jpoint(Vec2 p, int dim) {
    return dim == 1 ? nlohmann::json::array({p.x}) : nlohmann::json::array({p.x, p.y});
}

// cell index of p, -1 when outside
long cell_of(const Grid& cells, Vec2 p) {
    auto axis = [&](int a, double x) {
        double h = cells.spacing(a);
        double lo = cells.lo[a] - 0.5 * h;
        double f = (x - lo) / h;
        if (f < 0 || f > cells.n[a]) return -1;
        return std::min(cells.n[a] - 1, int(f));
    };
    int i = axis(0, p.x);
    if (i < 0) return -1;
    if (cells.dim == 1) return i;
    int j = axis(1, p.y);
    if (j < 0) return -1;
    return long(cells.index(i, j));
}

double tent(Vec2 x, Vec2 c, double r, int dim) {
    double d = dim == 1 ? std::abs(x.x - c.x) : norm(x - c);
    return std::max(0.0, r - d);
}

// integral of a tent against m, touching only cells near the support
double tent_integral(const MeasureRepr& m, Vec2 c, double r) {
    int dim = m.window.dim;
    double sum = 0;
    if (m.ac) {
        const Grid& g = m.ac->grid;
        double h0 = g.spacing(0), h1 = dim == 2 ? g.spacing(1) : 1.0;
        int i0 = std::max(0, int(std::floor((c.x - r - g.lo[0]) / h0)) - 1);
        int i1 = std::min(g.n[0] - 1, int(std::ceil((c.x + r - g.lo[0]) / h0)) + 1);
        int j0 = 0, j1 = 0;
        if (dim == 2) {
            j0 = std::max(0, int(std::floor((c.y - r - g.lo[1]) / h1)) - 1);
            j1 = std::min(g.n[1] - 1, int(std::ceil((c.y + r - g.lo[1]) / h1)) + 1);
        }
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j) {
                double rho = m.ac->at(i, j);
                if (rho == 0) continue;
                Vec2 ctr{g.coord(0, i), dim == 2 ? g.coord(1, j) : 0.0};
                double acc = 0;
                if (dim == 1) {
                    for (int a = 0; a < 3; ++a) acc += kGw[a] * tent(ctr + Vec2{0.5 * h0 * kGx[a], 0}, c, r, 1);
                    acc *= 0.5 * h0;
                } else {
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            acc += kGw[a] * kGw[b] * tent(ctr + Vec2{0.5 * h0 * kGx[a], 0.5 * h1 * kGx[b]}, c, r, 2);
                    acc *= 0.25 * h0 * h1;
                }
                sum += rho * acc;
            }
    }
    for (auto& a : m.atoms) sum += a.m * tent(a.p, c, r, dim);
    for (auto& s : m.segments) {
        double L = s.length();
        if (L == 0) continue;
        Vec2 u = (s.b - s.a) / L;
        // skip segments missing the support
        double along = std::clamp(dot(c - s.a, u), 0.0, L);
        if (norm(s.a + along * u - c) >= r) continue;
        int panels = 64;
        double hp = L / panels;
        for (int p = 0; p < panels; ++p)
            for (int a = 0; a < 3; ++a) {
                double sa = (p + 0.5) * hp + 0.5 * hp * kGx[a];
                sum += 0.5 * hp * kGw[a] * (s.c0 + s.c1 * sa) * tent(s.a + sa * u, c, r, dim);
            }
    }
    return sum;
}

}  // namespace

bool Window::contains(Vec2 p) const {
    if (p.x < lo.x || p.x > hi.x) return false;
    return dim == 1 || (p.y >= lo.y && p.y <= hi.y);
}

double Window::volume() const { return dim == 1 ? hi.x - lo.x : (hi.x - lo.x) * (hi.y - lo.y); }

Grid cell_grid(const Window& w, int n0, int n1) {
    double h0 = (w.hi.x - w.lo.x) / n0;
    if (w.dim == 1) return Grid::line(w.lo.x + 0.5 * h0, w.hi.x - 0.5 * h0, n0);
    double h1 = (w.hi.y - w.lo.y) / n1;
    return Grid::box({w.lo.x + 0.5 * h0, w.lo.y + 0.5 * h1}, {w.hi.x - 0.5 * h0, w.hi.y - 0.5 * h1}, n0, n1);
}

Window window_of_cells(const Grid& cells) {
    double h0 = cells.spacing(0);
    if (cells.dim == 1) return Window::line(cells.lo[0] - 0.5 * h0, cells.hi[0] + 0.5 * h0);
    double h1 = cells.spacing(1);
    return Window::box({cells.lo[0] - 0.5 * h0, cells.lo[1] - 0.5 * h1}, {cells.hi[0] + 0.5 * h0, cells.hi[1] + 0.5 * h1});
}

double MeasureRepr::ac_mass() const {
    if (!ac) return 0.0;
    double s = 0;
    for (double v : ac->values) s += v;
    return s * ac->grid.cell_volume();
}

double MeasureRepr::atom_mass() const {
    double s = 0;
    for (auto& a : atoms) s += a.m;
    return s;
}

double MeasureRepr::segment_mass() const {
    double s = 0;
    for (auto& g : segments) s += g.mass();
    return s;
}

double MeasureRepr::integrate(const std::function<double(Vec2)>& g) const {
    int dim = window.dim;
    double sum = 0;
    if (ac) {
        const Grid& gr = ac->grid;
        double h0 = gr.spacing(0), h1 = dim == 2 ? gr.spacing(1) : 1.0;
        for (std::size_t k = 0; k < gr.size(); ++k) {
            double rho = ac->values[k];
            if (rho == 0) continue;
            Vec2 c = gr.point(k);
            double acc = 0;
            if (dim == 1) {
                for (int a = 0; a < 3; ++a) acc += kGw[a] * g(c + Vec2{0.5 * h0 * kGx[a], 0});
                acc *= 0.5 * h0;
            } else {
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) acc += kGw[a] * kGw[b] * g(c + Vec2{0.5 * h0 * kGx[a], 0.5 * h1 * kGx[b]});
                acc *= 0.25 * h0 * h1;
            }
            sum += rho * acc;
        }
    }
    for (auto& a : atoms) sum += a.m * g(a.p);
    for (auto& s : segments) {
        double L = s.length();
        if (L == 0) continue;
        Vec2 u = (s.b - s.a) / L;
        int panels = 64;
        double hp = L / panels;
        for (int p = 0; p < panels; ++p)
            for (int a = 0; a < 3; ++a) {
                double sa = (p + 0.5) * hp + 0.5 * hp * kGx[a];
                sum += 0.5 * hp * kGw[a] * (s.c0 + s.c1 * sa) * g(s.a + sa * u);
            }
    }
    return sum;
}

void MeasureRepr::validate() const {
    const double tol = -1e-12;
    if (ac)
        for (double v : ac->values)
            if (!(v >= tol)) throw std::invalid_argument("measure: negative ac density");
    for (auto& a : atoms)
        if (!(a.m >= tol)) throw std::invalid_argument("measure: negative atom");
    for (auto& s : segments)
        if (!(s.c0 >= tol && s.c0 + s.c1 * s.length() >= tol)) throw std::invalid_argument("measure: negative line density");
}

std::string MeasureRepr::to_json() const {
    int dim = window.dim;
    nlohmann::json j;
    j["window"] = {{"lo", jpoint(window.lo, dim)}, {"hi", jpoint(window.hi, dim)}};
    if (ac) {
        const Grid& g = ac->grid;
        nlohmann::json grid{{"dim", g.dim}};
        if (dim == 1) {
            grid["lo"] = {g.lo[0]};
            grid["hi"] = {g.hi[0]};
            grid["n"] = {g.n[0]};
        } else {
            grid["lo"] = {g.lo[0], g.lo[1]};
            grid["hi"] = {g.hi[0], g.hi[1]};
            grid["n"] = {g.n[0], g.n[1]};
        }
        j["ac"] = {{"grid", grid}, {"values", ac->values}};
    } else {
        j["ac"] = nullptr;
    }
    auto atoms_j = nlohmann::json::array();
    for (auto& a : atoms) atoms_j.push_back({{"p", jpoint(a.p, dim)}, {"m", a.m}});
    j["atoms"] = atoms_j;
    auto seg_j = nlohmann::json::array();
    for (auto& s : segments) seg_j.push_back({{"a", jpoint(s.a, dim)}, {"b", jpoint(s.b, dim)}, {"c0", s.c0}, {"c1", s.c1}});
    j["segments"] = seg_j;
    return j.dump();
}

MeasureRepr lebesgue(const Window& w, int n0, int n1) {
    MeasureRepr m;
    m.window = w;
    Grid g = cell_grid(w, n0, n1);
    m.ac = ScalarField(g, std::vector<double>(g.size(), 1.0));
    return m;
}

MeasureRepr histogram(const std::vector<Vec2>& pts, double mass_each, const Grid& cells) {
    MeasureRepr m;
    m.window = window_of_cells(cells);
    std::vector<double> v(cells.size(), 0.0);
    for (auto p : pts) {
        long k = cell_of(cells, p);
        if (k >= 0) v[k] += mass_each;
    }
    double vol = cells.cell_volume();
    for (double& x : v) x /= vol;
    m.ac = ScalarField(cells, std::move(v));
    return m;
}

MeasureRepr pushforward_histogram(const PathBundle& b, double t, const Grid& cells) {
    if (!(b.seed_volume > 0)) throw std::invalid_argument("pushforward_histogram: seeds carry no cell volume");
    return histogram(b.snapshot(t), b.seed_volume, cells);
}

void extract_atoms(MeasureRepr& m, const std::vector<Vec2>& pts, const AtomRule& rule) {
    if (!m.ac) return;
    ScalarField& f = *m.ac;
    const Grid& g = f.grid;
    std::size_t N = g.size();
    std::vector<double> cnt(N, 0), sx(N, 0), sy(N, 0), sxx(N, 0);
    for (auto p : pts) {
        long k = cell_of(g, p);
        if (k < 0) continue;
        cnt[k] += 1;
        sx[k] += p.x;
        sy[k] += p.y;
        sxx[k] += norm2(p);
    }
    std::vector<double> sorted = f.values;
    std::sort(sorted.begin(), sorted.end());
    double med = sorted[sorted.size() / 2];
    if (med <= 0) {
        std::vector<double> nz;
        for (double v : sorted)
            if (v > 0) nz.push_back(v);
        if (nz.empty()) return;
        med = nz[nz.size() / 2];
    }
    double vol = g.cell_volume(), width = g.max_spacing();
    std::vector<char> is_atom(N, 0);
    for (std::size_t k = 0; k < N; ++k) {
        if (cnt[k] < 2 || f.values[k] <= rule.median_factor * med) continue;
        Vec2 mean{sx[k] / cnt[k], sy[k] / cnt[k]};
        double var = std::max(0.0, sxx[k] / cnt[k] - norm2(mean));
        if (std::sqrt(var) < rule.max_spread * width) is_atom[k] = 1;
    }
    for (std::size_t k = 0; k < N; ++k) {
        if (!is_atom[k]) continue;
        // ac level from the non-atom neighbours
        auto mk = g.multi(k);
        double acc = 0;
        int c = 0;
        for (int di = -1; di <= 1; ++di)
            for (int dj = (g.dim == 2 ? -1 : 0); dj <= (g.dim == 2 ? 1 : 0); ++dj) {
                int i = mk[0] + di, j = mk[1] + dj;
                if ((di == 0 && dj == 0) || i < 0 || i >= g.n[0] || j < 0 || j >= g.n[1]) continue;
                std::size_t kk = g.index(i, j);
                if (is_atom[kk]) continue;
                acc += f.values[kk];
                ++c;
            }
        double level = c ? acc / c : 0.0;
        level = std::min(level, f.values[k]);
        Vec2 mean{sx[k] / cnt[k], sy[k] / cnt[k]};
        m.atoms.push_back({mean, (f.values[k] - level) * vol});
        f.values[k] = level;
    }
}

DensityResult viscous_density(const PotentialSpec& s, const ViscousParams& vp, const Grid& cells, double t,
                              const Grid& seed_grid, const IntegratorOptions& opt) {
    if (!(vp.eps > 0)) throw std::invalid_argument("viscous_density: eps must be positive");
    PathBundle b = integrate_viscous(s, grid_seeds(seed_grid), {0.0, t}, vp, opt);
    std::vector<Vec2> img = b.snapshot(t);
    std::vector<double> det = jacobian_det(seed_grid, img);
    DensityResult r;
    r.measure.window = window_of_cells(cells);
    std::vector<double> sum(cells.size(), 0.0), cnt(cells.size(), 0.0);
    for (std::size_t k = 0; k < img.size(); ++k) {
        if (det[k] < 1e-12) {
            ++r.near_singular;
            continue;
        }
        long c = cell_of(cells, img[k]);
        if (c < 0) continue;
        sum[c] += 1.0 / det[k];
        cnt[c] += 1;
    }
    for (std::size_t c = 0; c < sum.size(); ++c) {
        if (cnt[c] > 0)
            sum[c] /= cnt[c];
        else
            ++r.empty_cells;
    }
    r.measure.ac = ScalarField(cells, std::move(sum));
    return r;
}

MeasureRepr monge_ampere_measure(const PotentialSpec& s, double t, const Grid& cells, const Grid& seed_grid,
                                 bool allow_exact) {
    if (!(t > 0)) throw std::invalid_argument("monge_ampere_measure: t must be positive");
    Window w = window_of_cells(cells);
    if (allow_exact && s.is_three_sector()) {
        ThreeSectorProblem p = build(s);
        MeasureRepr nu = exact_measures(p, t, w, 2, OutflowFit{}).nu;
        nu.ac = lebesgue(w, cells.n[0], cells.n[1]).ac;
        return nu;
    }
    if (allow_exact && s.dim == 1 && (s.kind == PotentialKind::piecewise_linear_min || s.kind == PotentialKind::linear)) {
        // only the extreme slopes are active in 1D
        double amin = kInf, amax = -kInf;
        for (auto v : s.vectors) amin = std::min(amin, v.x), amax = std::max(amax, v.x);
        MeasureRepr nu = lebesgue(w, cells.n[0]);
        Vec2 at{0.5 * t * (amin + amax), 0.0};
        if (amax > amin && w.contains(at)) nu.atoms.push_back({at, t * (amax - amin)});
        return nu;
    }
    ScalarField f = convexify(sample_psi(s, seed_grid, t));
    std::vector<Vec2> T = grid_gradient(f);
    MeasureRepr m = histogram(T, seed_grid.cell_volume(), cells);
    extract_atoms(m, T);
    return m;
}

namespace {

struct Hess {
    double xx = 0, yy = 0, xy = 0;
};

Hess hessian_at(const ScalarField& f, int i, int j) {
    const Grid& g = f.grid;
    Hess h;
    double h0 = g.spacing(0);
    h.xx = (f.at(i + 1, j) - 2 * f.at(i, j) + f.at(i - 1, j)) / (h0 * h0);
    if (g.dim == 2) {
        double h1 = g.spacing(1);
        h.yy = (f.at(i, j + 1) - 2 * f.at(i, j) + f.at(i, j - 1)) / (h1 * h1);
        h.xy = (f.at(i + 1, j + 1) - f.at(i + 1, j - 1) - f.at(i - 1, j + 1) + f.at(i - 1, j - 1)) / (4 * h0 * h1);
    }
    return h;
}

}  // namespace

ScalarField alexandrov_density(const ScalarField& w) {
    const Grid& g = w.grid;
    std::vector<double> out(g.size(), 0.0);
    int n1 = g.dim == 2 ? g.n[1] : 1;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < n1; ++j) {
            int ii = std::clamp(i, 1, g.n[0] - 2);
            int jj = g.dim == 2 ? std::clamp(j, 1, g.n[1] - 2) : 0;
            Hess h = hessian_at(w, ii, jj);
            out[g.index(i, j)] = g.dim == 1 ? h.xx : h.xx * h.yy - h.xy * h.xy;
        }
    return ScalarField(g, std::move(out));
}

SmoothedMA smoothed_MA_density(const PotentialSpec& s, const ViscousParams& vp, const Grid& cells, double t) {
    if (!(vp.eps > 0)) throw std::invalid_argument("smoothed_MA_density: eps must be positive");
    // one extra node on every side so each cell centre has a full stencil
    Grid ext = cells;
    for (int a = 0; a < cells.dim; ++a) {
        double h = cells.spacing(a);
        ext.lo[a] -= h;
        ext.hi[a] += h;
        ext.n[a] += 2;
    }
    ScalarField w = sample_w_viscous(s, ext, t, vp);
    double beta = TimeConstants::make(s.lambda, t).beta_t;
    SmoothedMA r;
    r.measure.window = window_of_cells(cells);
    std::vector<double> dens(cells.size(), 0.0);
    double margin = kInf;
    int n1 = cells.dim == 2 ? cells.n[1] : 1;
    for (int i = 0; i < cells.n[0]; ++i)
        for (int j = 0; j < n1; ++j) {
            Hess h = hessian_at(w, i + 1, cells.dim == 2 ? j + 1 : 0);
            double lmin;
            if (cells.dim == 1) {
                dens[cells.index(i, j)] = h.xx;
                lmin = h.xx;
            } else {
                dens[cells.index(i, j)] = h.xx * h.yy - h.xy * h.xy;
                lmin = 0.5 * (h.xx + h.yy) - std::sqrt(0.25 * (h.xx - h.yy) * (h.xx - h.yy) + h.xy * h.xy);
            }
            margin = std::min(margin, lmin - beta);
        }
    r.measure.ac = ScalarField(cells, std::move(dens));
    r.min_eig_margin = margin;
    return r;
}

int SingularSets::count(const Mask& m) const {
    int c = 0;
    for (char x : m) c += x != 0;
    return c;
}

Decomposition lebesgue_decomposition(const PathBundle& b, const Grid& seed_grid, double t, const Grid& cells,
                                     const LebesgueThresholds& th) {
    if (b.eps != 0.0) throw std::invalid_argument("lebesgue_decomposition: needs a limit-flow bundle");
    if (b.n_seeds() != seed_grid.size()) throw std::invalid_argument("lebesgue_decomposition: seeds do not match the grid");
    std::vector<Vec2> X = b.snapshot(t);
    const Grid& g = seed_grid;
    double h = g.max_spacing();
    double thr = th.det_sg >= 0 ? th.det_sg : std::sqrt(h);
    Decomposition d;
    d.sets.seeds = g;
    std::size_t N = g.size();
    d.sets.in.assign(N, 0);
    d.sets.sg.assign(N, 0);
    d.sets.nd.assign(N, 0);
    std::vector<double> dc = jacobian_det(g, X);
    std::vector<Vec2> ac_pts, sg_pts;
    int n1 = g.dim == 2 ? g.n[1] : 1;
    for (std::size_t k = 0; k < N; ++k) {
        auto m = g.multi(k);
        int i = m[0], j = m[1];
        bool edge = i == 0 || i + 1 == g.n[0] || (g.dim == 2 && (j == 0 || j + 1 == n1));
        double det = dc[k];
        bool nd = false;
        double fdet = det;
        if (!edge) {
            // forward and backward difference Jacobians
            double h0 = g.spacing(0);
            Vec2 fx = (X[g.index(i + 1, j)] - X[k]) / h0, bx = (X[k] - X[g.index(i - 1, j)]) / h0;
            double jump = std::max(std::abs(fx.x - bx.x), std::abs(fx.y - bx.y));
            if (g.dim == 2) {
                double h1 = g.spacing(1);
                Vec2 fy = (X[g.index(i, j + 1)] - X[k]) / h1, by = (X[k] - X[g.index(i, j - 1)]) / h1;
                jump = std::max({jump, std::abs(fy.x - by.x), std::abs(fy.y - by.y)});
                fdet = fx.x * fy.y - fx.y * fy.x;
            } else {
                fdet = fx.x;
            }
            nd = jump > th.nd_jump;
        }
        if (nd) {
            d.sets.nd[k] = 1;
            det = fdet;
        } else if (det < thr) {
            d.sets.sg[k] = 1;
        } else {
            d.sets.in[k] = 1;
        }
        (det < thr ? sg_pts : ac_pts).push_back(X[k]);
    }
    double vol = g.cell_volume();
    d.ac = histogram(ac_pts, vol, cells);
    d.sg = histogram(sg_pts, vol, cells);
    std::set<long> hit;
    for (std::size_t k = 0; k < N; ++k)
        if (d.sets.sg[k]) {
            long c = cell_of(cells, X[k]);
            if (c >= 0) hit.insert(c);
        }
    d.sg_image_area = double(hit.size()) * cells.cell_volume();
    return d;
}

FlatDictionary FlatDictionary::make(const Window& w, int n) {
    FlatDictionary d;
    d.dim = w.dim;
    double Lx = w.hi.x - w.lo.x, Ly = w.dim == 2 ? w.hi.y - w.lo.y : 0.0;
    double hc = std::max(Lx, Ly) / n;
    for (int i = 0; i < n; ++i) {
        double cx = w.lo.x + (i + 0.5) * Lx / n;
        if (w.dim == 1) {
            d.centres.push_back({cx, 0.0});
            continue;
        }
        for (int j = 0; j < n; ++j) d.centres.push_back({cx, w.lo.y + (j + 0.5) * Ly / n});
    }
    d.radii = {hc, 2 * hc, 4 * hc};
    return d;
}

double FlatDictionary::best_value_at(Vec2 p) const {
    double best = 0;
    for (auto c : centres)
        for (double r : radii) best = std::max(best, tent(p, c, r, dim));
    return best;
}

double flat_metric(const MeasureRepr& a, const MeasureRepr& b, const FlatDictionary& d) {
    double best = 0;
    for (auto c : d.centres)
        for (double r : d.radii) best = std::max(best, std::abs(tent_integral(a, c, r) - tent_integral(b, c, r)));
    return best;
}

double flat_metric(const MeasureRepr& a, const MeasureRepr& b, const Window& w) {
    return flat_metric(a, b, FlatDictionary::make(w));
}

AcAgreement ac_agreement_check(const MeasureRepr& rho, const MeasureRepr& nu, const Mask& mask, double ref) {
    if (!rho.ac || !nu.ac || !rho.ac->grid.same_as(nu.ac->grid))
        throw std::invalid_argument("ac_agreement_check: measures need ac parts on a common grid");
    AcAgreement r;
    for (std::size_t k = 0; k < rho.ac->values.size(); ++k) {
        if (!mask.empty() && mask[k]) continue;
        double a = rho.ac->values[k], b = nu.ac->values[k];
        r.max_rel_rho = std::max(r.max_rel_rho, std::abs(a - ref) / ref);
        r.max_rel_nu = std::max(r.max_rel_nu, std::abs(b - ref) / ref);
        r.max_rel_between = std::max(r.max_rel_between, std::abs(a - b) / ref);
        ++r.cells;
    }
    return r;
}

Mask singular_support_mask(const MeasureRepr& m, const Grid& cells, int dilate) {
    Mask core(cells.size(), 0);
    for (auto& a : m.atoms) {
        long k = cell_of(cells, a.p);
        if (k >= 0) core[k] = 1;
    }
    double step = 0.25 * std::min(cells.spacing(0), cells.dim == 2 ? cells.spacing(1) : kInf);
    for (auto& s : m.segments) {
        double L = s.length();
        int n = std::max(1, int(std::ceil(L / step)));
        for (int q = 0; q <= n; ++q) {
            long k = cell_of(cells, s.a + (double(q) / n) * (s.b - s.a));
            if (k >= 0) core[k] = 1;
        }
    }
    Mask out = core;
    int n1 = cells.dim == 2 ? cells.n[1] : 1;
    for (std::size_t k = 0; k < core.size(); ++k) {
        if (!core[k]) continue;
        auto mk = cells.multi(k);
        for (int di = -dilate; di <= dilate; ++di)
            for (int dj = (cells.dim == 2 ? -dilate : 0); dj <= (cells.dim == 2 ? dilate : 0); ++dj) {
                int i = mk[0] + di, j = mk[1] + dj;
                if (i < 0 || i >= cells.n[0] || j < 0 || j >= n1) continue;
                out[cells.index(i, j)] = 1;
            }
    }
    return out;
}

}  // namespace adhesion
