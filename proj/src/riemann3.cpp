#include "adhesion/riemann3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "adhesion/svg.hpp"

namespace adhesion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seg_dist(Vec2 y, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double L2 = norm2(d);
    double s = L2 > 0 ? std::clamp(dot(y - a, d) / L2, 0.0, 1.0) : 0.0;
    return norm(y - (a + s * d));
}

// barycentric membership of q in the ccw triangle v, with slack
bool in_ccw_triangle(const std::array<Vec2, 3>& v, Vec2 q, double slack = 0.0) {
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3;
        if (cross(v[j] - v[i], q - v[i]) < -slack) return false;
    }
    return true;
}

nlohmann::json jvec(Vec2 a) { return nlohmann::json::array({a.x, a.y}); }

}  // namespace

std::string ThreeSectorProblem::pair_name(int p) {
    static const char* names[3] = {"12", "23", "31"};
    return names[p];
}

int ThreeSectorProblem::pair_of(int i, int j) const {
    for (int p = 0; p < 3; ++p)
        if ((first(p) == i && second(p) == j) || (first(p) == j && second(p) == i)) return p;
    throw std::invalid_argument("riemann3: no pair joins equal vertices");
}

double ThreeSectorProblem::K() const {
    double k = 0;
    for (auto a : v) k = std::max(k, norm(a));
    return k;
}

double ThreeSectorProblem::scale() const {
    double s = 0;
    for (int p = 0; p < 3; ++p) s = std::max(s, norm(n[p]));
    return s;
}

ThreeSectorProblem build(Vec2 v1, Vec2 v2, Vec2 v3) {
    ThreeSectorProblem p;
    p.v = {v1, v2, v3};
    double scale = std::max({norm(v2 - v1), norm(v3 - v2), norm(v1 - v3)});
    double c = cross(v2 - v1, v3 - v1);
    if (scale == 0.0 || std::abs(c) < 1e-9 * scale * scale)
        throw std::invalid_argument("riemann3: velocities are collinear or repeated");
    if (c < 0) {
        std::swap(p.v[1], p.v[2]);
        std::swap(p.source[1], p.source[2]);
        c = -c;
    }
    // circumcentre relative to v1
    Vec2 a = p.v[1] - p.v[0], d = p.v[2] - p.v[0];
    double den = 2 * cross(a, d);
    Vec2 u{(d.y * norm2(a) - a.y * norm2(d)) / den, (a.x * norm2(d) - d.x * norm2(a)) / den};
    p.b = p.v[0] + u;
    p.R = (norm(p.v[0] - p.b) + norm(p.v[1] - p.b) + norm(p.v[2] - p.b)) / 3;
    p.area = 0.5 * c;
    for (int q = 0; q < 3; ++q) {
        Vec2 vi = p.v[ThreeSectorProblem::first(q)], vj = p.v[ThreeSectorProblem::second(q)];
        p.n[q] = vi - vj;
        p.tau[q] = perp(vj - vi);
        p.mid[q] = 0.5 * (vi + vj);
        p.xi[q] = dot(p.mid[q] - p.b, p.tau[q]);
    }
    p.sticky = in_ccw_triangle(p.v, p.b);
    if (!p.sticky) p.outflow = int(std::max_element(p.xi.begin(), p.xi.end()) - p.xi.begin());
    return p;
}

ThreeSectorProblem build(const std::array<Vec2, 3>& v) { return build(v[0], v[1], v[2]); }

ThreeSectorProblem build(const PotentialSpec& s) {
    if (!s.is_three_sector()) throw std::invalid_argument("riemann3: potential is not a planar three-vector min form");
    return build(s.vectors[0], s.vectors[1], s.vectors[2]);
}

std::string RegionTag::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::sector: os << "Sector(" << i + 1 << ")"; break;
        case Kind::ray: os << "Ray(" << i + 1 << "," << j + 1 << "," << fmt17(s) << ")"; break;
        case Kind::triple: os << "TriplePoint"; break;
    }
    return os.str();
}

RegionTag locate(const ThreeSectorProblem& p, Vec2 x, double t, double tol) {
    if (!(t > 0)) throw std::invalid_argument("riemann3: locate needs t > 0");
    double eps = tol * std::max({1.0, norm(x), t * p.K()});
    Vec2 z = x - t * p.b;
    RegionTag tag;
    if (norm(z) <= eps) return tag;
    for (int q = 0; q < 3; ++q) {
        Vec2 th = p.tau[q] / norm(p.tau[q]);
        double along = dot(z, th);
        double off = std::abs(cross(th, z));
        if (along > 0 && off <= eps) {
            tag.kind = RegionTag::Kind::ray;
            tag.pair = q;
            tag.i = ThreeSectorProblem::first(q);
            tag.j = ThreeSectorProblem::second(q);
            tag.s = along;
            return tag;
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (dot(p.v[i], z) < dot(p.v[best], z)) best = i;
    tag.kind = RegionTag::Kind::sector;
    tag.i = best;
    return tag;
}

SubgradientSet exact_subgradient(const ThreeSectorProblem& p, Vec2 x, double t) {
    RegionTag r = locate(p, x, t);
    switch (r.kind) {
        case RegionTag::Kind::sector: return SubgradientSet::from_points({x - t * p.v[r.i]});
        case RegionTag::Kind::ray: return SubgradientSet::from_points({x - t * p.v[r.i], x - t * p.v[r.j]});
        default: return SubgradientSet::from_points({x - t * p.v[0], x - t * p.v[1], x - t * p.v[2]});
    }
}

SubgradientSet exact_du(const ThreeSectorProblem& p, Vec2 x, double t) {
    RegionTag r = locate(p, x, t);
    switch (r.kind) {
        case RegionTag::Kind::sector: return SubgradientSet::from_points({p.v[r.i]});
        case RegionTag::Kind::ray: return SubgradientSet::from_points({p.v[r.i], p.v[r.j]});
        default: return SubgradientSet::from_points({p.v[0], p.v[1], p.v[2]});
    }
}

Vec2 exact_V(const ThreeSectorProblem& p, Vec2 x, double t) {
    RegionTag r = locate(p, x, t);
    switch (r.kind) {
        case RegionTag::Kind::sector: return p.v[r.i];
        case RegionTag::Kind::ray: return p.mid[r.pair];
        default: return p.b;
    }
}

Vec2 exact_T(const ThreeSectorProblem& p, Vec2 y, double t) {
    if (!(t > 0)) return y;
    Vec2 zt = y / t;
    if (in_ccw_triangle(p.v, p.b - zt)) return t * p.b;
    Vec2 z = zt - p.b;
    for (int q = 0; q < 3; ++q) {
        int i = ThreeSectorProblem::first(q), j = ThreeSectorProblem::second(q);
        Vec2 e = p.v[j] - p.v[i], w = z + p.v[i];
        double th = -dot(w, e) / norm2(e);
        double sg = dot(w, p.tau[q]) / norm2(p.tau[q]);
        if (th >= 0 && th <= 1 && sg >= 0) return t * (p.b + sg * p.tau[q]);
    }
    for (int i = 0; i < 3; ++i) {
        Vec2 w = z + p.v[i];
        double a = dot(p.v[i], w);
        if (a <= dot(p.v[(i + 1) % 3], w) && a <= dot(p.v[(i + 2) % 3], w)) return y + t * p.v[i];
    }
    // rounding left y on no piece: T minimises w_t(x) - x.y, so take the best clamped candidate
    auto F = [&](Vec2 x) {
        double m = 0;
        for (auto a : p.v) m = std::max(m, 0.5 * norm2(x - t * a));
        return m - dot(x, y);
    };
    Vec2 best = t * p.b;
    double fb = F(best);
    auto offer = [&](Vec2 x) {
        double f = F(x);
        if (f < fb) fb = f, best = x;
    };
    for (int i = 0; i < 3; ++i) offer(y + t * p.v[i]);
    for (int q = 0; q < 3; ++q) {
        double sg = std::max(0.0, dot(z + p.v[q], p.tau[q]) / norm2(p.tau[q]));
        offer(t * (p.b + sg * p.tau[q]));
    }
    return best;
}

double t_star(const ThreeSectorProblem& p, Vec2 y) {
    // lambda y in b - Delta  <=>  alpha_e - lambda beta_e >= 0 on each edge
    double lo = 0.0, hi = kInf;
    for (int q = 0; q < 3; ++q) {
        int i = ThreeSectorProblem::first(q), j = ThreeSectorProblem::second(q);
        Vec2 e = p.v[j] - p.v[i];
        double alpha = cross(e, p.b - p.v[i]);
        double beta = cross(e, y);
        if (beta > 0)
            hi = std::min(hi, alpha / beta);
        else if (beta < 0)
            lo = std::max(lo, alpha / beta);
        else if (alpha < 0)
            return kInf;
    }
    if (!(lo <= hi) || hi <= 0) return kInf;
    return 1.0 / hi;
}

Vec2 exact_X(const ThreeSectorProblem& p, Vec2 y, double t) {
    if (!(t > 0)) return y;
    if (p.sticky) return exact_T(p, y, t);
    double ts = t_star(p, y);
    if (t <= ts) return exact_T(p, y, t);
    return ts * p.b + (t - ts) * p.mid[p.outflow];
}

double PreImage::distance(Vec2 y) const {
    double d = kInf;
    if (kind == Kind::triangle) {
        if (in_ccw_triangle(tri, y)) return 0.0;
        for (int i = 0; i < 3; ++i) d = std::min(d, seg_dist(y, tri[i], tri[(i + 1) % 3]));
        return d;
    }
    for (auto& s : segs) d = std::min(d, seg_dist(y, s.first, s.second));
    return d;
}

double PreImage::area() const {
    if (kind != Kind::triangle) return 0.0;
    return 0.5 * std::abs(cross(tri[1] - tri[0], tri[2] - tri[0]));
}

std::vector<Vec2> PreImage::sample(int per_segment) const {
    std::vector<Vec2> out;
    auto along = [&](Vec2 a, Vec2 b) {
        for (int k = 0; k <= per_segment; ++k) out.push_back(a + (double(k) / per_segment) * (b - a));
    };
    if (kind == Kind::triangle) {
        for (int i = 0; i < 3; ++i) along(tri[i], tri[(i + 1) % 3]);
        Vec2 c = (tri[0] + tri[1] + tri[2]) / 3.0;
        for (int i = 0; i < 3; ++i) along(c, tri[i]);
        return out;
    }
    for (auto& s : segs) {
        if (s.first == s.second)
            out.push_back(s.first);
        else
            along(s.first, s.second);
    }
    return out;
}

PreImage exact_X_inverse(const ThreeSectorProblem& p, Vec2 x, double t) {
    RegionTag r = locate(p, x, t);
    PreImage pre;
    if (r.kind == RegionTag::Kind::sector) {
        Vec2 y = x - t * p.v[r.i];
        pre.segs = {{y, y}};
        return pre;
    }
    pre.kind = PreImage::Kind::segments;
    if (r.kind == RegionTag::Kind::triple) {
        if (p.sticky) {
            pre.kind = PreImage::Kind::triangle;
            for (int k = 0; k < 3; ++k) pre.tri[k] = x - t * p.v[k];
            return pre;
        }
        int q = p.outflow;
        int i = ThreeSectorProblem::first(q), j = ThreeSectorProblem::second(q), k = ThreeSectorProblem::third(q);
        pre.segs = {{x - t * p.v[j], x - t * p.v[k]}, {x - t * p.v[k], x - t * p.v[i]}};
        return pre;
    }
    int i = r.i, j = r.j;
    if (r.pair == p.outflow) {
        double d = norm(p.mid[r.pair] - p.b);
        if (r.s < t * d) {
            int k = ThreeSectorProblem::third(r.pair);
            double s = r.s / d, ts = t - s;
            pre.segs = {{x - t * p.v[i], ts * (p.b - p.v[i])},
                        {x - t * p.v[j], ts * (p.b - p.v[j])},
                        {ts * (p.b - p.v[j]), ts * (p.b - p.v[k])},
                        {ts * (p.b - p.v[k]), ts * (p.b - p.v[i])}};
            return pre;
        }
    }
    pre.segs = {{x - t * p.v[i], x - t * p.v[j]}};
    return pre;
}

OutflowFit outflow_oracle(const ThreeSectorProblem& p, double t, const OracleOptions& opt) {
    OutflowFit fit;
    if (p.sticky || !(t > 0)) return fit;
    int q = p.outflow;
    int i = ThreeSectorProblem::first(q), j = ThreeSectorProblem::second(q);
    double d = norm(p.mid[q] - p.b);
    fit.length = t * d;
    fit.bins = opt.bins;
    Vec2 th = p.tau[q] / norm(p.tau[q]), eh = perp(th);
    Vec2 tb = t * p.b;

    // pre-image of the segment: conv{0, t(b - Delta)} plus the transverse pieces
    std::vector<Vec2> hull{{0, 0}, t * (p.mid[q] - p.v[i]), t * (p.mid[q] - p.v[j])};
    for (auto a : p.v) hull.push_back(t * (p.b - a));
    Vec2 lo = hull[0], hi = hull[0];
    for (auto a : hull) {
        lo = {std::min(lo.x, a.x), std::min(lo.y, a.y)};
        hi = {std::max(hi.x, a.x), std::max(hi.y, a.y)};
    }
    double pad = 0.01 * std::max(hi.x - lo.x, hi.y - lo.y);
    lo -= Vec2{pad, pad};
    hi += Vec2{pad, pad};
    double on_tol = 1e-12 * std::max(1.0, t * p.K());

    int n = opt.n;
    for (int round = 0; round <= opt.max_doublings; ++round, n *= 2) {
        std::vector<double> count(opt.bins, 0.0);
        double hx = (hi.x - lo.x) / n, hy = (hi.y - lo.y) / n;
        double binw = fit.length / opt.bins;
        for (int a = 0; a < n; ++a) {
            double yx = lo.x + (a + 0.5) * hx;
            for (int c = 0; c < n; ++c) {
                Vec2 y{yx, lo.y + (c + 0.5) * hy};
                double ts = t_star(p, y);
                double s;
                if (ts < t) {
                    s = (t - ts) * d;
                } else {
                    Vec2 z = exact_T(p, y, t) - tb;
                    if (std::abs(dot(z, eh)) > on_tol) continue;
                    s = dot(z, th);
                    if (s <= 0 || s >= fit.length) continue;
                }
                int k = std::min(opt.bins - 1, int(s / binw));
                count[k] += 1.0;
            }
        }
        // least squares line through the bin densities
        double cell = hx * hy;
        double S0 = 0, S1 = 0, S2 = 0, Sy = 0, Sxy = 0;
        for (int k = 0; k < opt.bins; ++k) {
            double s = (k + 0.5) * binw, rho = count[k] * cell / binw;
            S0 += 1;
            S1 += s;
            S2 += s * s;
            Sy += rho;
            Sxy += s * rho;
        }
        double det = S0 * S2 - S1 * S1;
        double c0 = (S2 * Sy - S1 * Sxy) / det, c1 = (S0 * Sxy - S1 * Sy) / det;
        if (round > 0) {
            double ref1 = std::max(std::abs(c1), std::abs(c0) / fit.length);
            fit.stable = std::abs(c0 - fit.c0) <= opt.rel_tol * std::abs(c0) && std::abs(c1 - fit.c1) <= opt.rel_tol * ref1;
        }
        fit.c0 = c0;
        fit.c1 = c1;
        fit.n = n;
        fit.history.push_back({double(n), c0, c1});
        if (fit.stable) break;
    }
    return fit;
}

namespace {

void add_ray_piece(MeasureRepr& m, Vec2 o, Vec2 dir, double s_from, double s_to, double c0, double c1) {
    double s0 = s_from, s1 = s_to;
    if (!clip_line(o, dir, m.window.lo, m.window.hi, s0, s1) || s1 <= s0) return;
    LineSegment seg;
    seg.a = o + s0 * dir;
    seg.b = o + s1 * dir;
    seg.c0 = c0 + c1 * (s0 - s_from);
    seg.c1 = c1;
    m.segments.push_back(seg);
}

}  // namespace

ExactMeasures exact_measures(const ThreeSectorProblem& p, double t, const Window& w, int n, const OutflowFit& fit) {
    if (!(t > 0)) throw std::invalid_argument("riemann3: exact_measures needs t > 0");
    ExactMeasures out;
    out.nu = lebesgue(w, n, n);
    Vec2 tb = t * p.b;
    if (w.contains(tb)) out.nu.atoms.push_back({tb, t * t * p.area});
    out.rho = out.nu;
    out.rho.atoms.clear();
    out.rho.segments.clear();
    for (int q = 0; q < 3; ++q) {
        Vec2 th = p.tau[q] / norm(p.tau[q]);
        double dens = t * norm(p.n[q]);
        add_ray_piece(out.nu, tb, th, 0.0, kInf, dens, 0.0);
        if (q != p.outflow) {
            add_ray_piece(out.rho, tb, th, 0.0, kInf, dens, 0.0);
            continue;
        }
        add_ray_piece(out.rho, tb, th, 0.0, fit.length, fit.c0, fit.c1);
        add_ray_piece(out.rho, tb, th, fit.length, kInf, dens, 0.0);
    }
    if (p.sticky) out.rho = out.nu;
    else out.fit = fit;
    return out;
}

ExactMeasures exact_measures(const ThreeSectorProblem& p, double t, const Window& w, int n, const OracleOptions& opt) {
    OutflowFit fit;
    if (!p.sticky) fit = outflow_oracle(p, t, opt);
    return exact_measures(p, t, w, n, fit);
}

MonotoneReport monotone_reconstruction_check(const ThreeSectorProblem& p, double t, int samples, std::uint64_t seed,
                                             double tol) {
    if (!(t > 0)) throw std::invalid_argument("riemann3: monotone check needs t > 0");
    MonotoneReport rep;
    std::array<Vec2, 3> tri;
    for (int k = 0; k < 3; ++k) tri[k] = t * (p.b - p.v[k]);
    Vec2 lo = tri[0], hi = tri[0];
    for (auto a : tri) {
        lo = {std::min(lo.x, a.x), std::min(lo.y, a.y)};
        hi = {std::max(hi.x, a.x), std::max(hi.y, a.y)};
    }
    double diam = std::max(hi.x - lo.x, hi.y - lo.y);
    lo -= Vec2{0.25 * diam, 0.25 * diam};
    hi += Vec2{0.25 * diam, 0.25 * diam};

    auto ratio = [&](Vec2 y, Vec2 z) {
        Vec2 dy = y - z;
        return dot(exact_X(p, y, t) - exact_X(p, z, t), dy) / norm2(dy);
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
    double worst = kInf;
    for (int k = 0; k < samples; ++k) {
        Vec2 y{ux(rng), uy(rng)}, z{ux(rng), uy(rng)};
        if (norm(y - z) < 1e-3 * diam) continue;
        worst = std::min(worst, ratio(y, z));
        ++rep.pairs;
    }

    if (!p.sticky) {
        // interior point y of the triangle is carried off t b; some vertex y_j sees it on the wrong side
        Vec2 y = (tri[0] + tri[1] + tri[2]) / 3.0;
        Vec2 x = exact_X(p, y, t), tb = t * p.b;
        int jbest = -1;
        double vbest = 0;
        for (int j = 0; j < 3; ++j) {
            double val = dot(x - tb, y - tri[j]);
            if (val < vbest) vbest = val, jbest = j;
        }
        if (jbest >= 0) {
            int j = jbest, k = (j + 1) % 3, l = (j + 2) % 3;
            Vec2 u = -1.0 * ((p.v[j] - p.v[k]) / norm(p.v[j] - p.v[k]) + (p.v[j] - p.v[l]) / norm(p.v[j] - p.v[l]));
            u = u / norm(u);
            for (double delta = 1e-6 * diam; delta > 1e-14 * diam; delta *= 0.1) {
                Vec2 xj = tb + delta * u, yj = xj - t * p.v[j];
                if (norm(exact_X(p, yj, t) - xj) > 1e-12 * std::max(1.0, norm(xj))) continue;
                double val = dot(x - xj, y - yj) / norm2(y - yj);
                if (val < 0) {
                    rep.certified = true;
                    rep.cert_y = y;
                    rep.cert_z = yj;
                    rep.cert_value = val;
                    worst = std::min(worst, val);
                    break;
                }
            }
        }
    }
    rep.violation = std::isfinite(worst) ? worst : 0.0;
    rep.monotone = rep.violation >= -tol;
    return rep;
}

std::string Riemann3Report::to_json() const {
    const auto& p = problem;
    nlohmann::json j;
    j["t"] = t;
    j["v"] = {jvec(p.v[0]), jvec(p.v[1]), jvec(p.v[2])};
    j["b"] = jvec(p.b);
    j["R"] = p.R;
    j["area"] = p.area;
    j["sticky"] = p.sticky;
    j["xi"] = {{"12", p.xi[0]}, {"23", p.xi[1]}, {"31", p.xi[2]}};
    if (p.sticky)
        j["outflow_pair"] = nullptr;
    else
    {
        // labels as given on input
        int a = p.source[ThreeSectorProblem::first(p.outflow)] + 1, c = p.source[ThreeSectorProblem::second(p.outflow)] + 1;
        j["outflow_pair"] = {std::min(a, c), std::max(a, c)};
    }
    j["atom_mass_nu"] = atom_nu;
    j["atom_mass_rho"] = atom_rho;
    j["monotone_violation"] = mono.violation;
    j["monotone"] = mono.monotone;
    j["monotone_pairs"] = mono.pairs;
    if (mono.certified)
        j["certified_pair"] = {{"y", jvec(mono.cert_y)}, {"z", jvec(mono.cert_z)}, {"value", mono.cert_value}};
    if (!p.sticky && fit.n > 0) {
        nlohmann::json f;
        f["source"] = "particle_oracle";
        f["segment"] = {jvec(t * p.b), jvec(t * p.mid[p.outflow])};
        f["c0"] = fit.c0;
        f["c1"] = fit.c1;
        f["seeds_per_axis"] = fit.n;
        f["bins"] = fit.bins;
        f["stable"] = fit.stable;
        auto h = nlohmann::json::array();
        for (auto& r : fit.history) h.push_back({r[0], r[1], r[2]});
        f["history"] = h;
        j["outflow_density"] = f;
    }
    return j.dump(2);
}

Riemann3Report riemann3_report(const ThreeSectorProblem& p, double t, const OracleOptions* oracle, int samples,
                               std::uint64_t seed) {
    Riemann3Report r;
    r.problem = p;
    r.t = t;
    // nu charges tb with the area of the subgradient there, rho with the area of its pre-image
    r.atom_nu = exact_subgradient(p, t * p.b, t).area();
    r.atom_rho = exact_X_inverse(p, t * p.b, t).area();
    r.mono = monotone_reconstruction_check(p, t, samples, seed);
    if (oracle && !p.sticky) r.fit = outflow_oracle(p, t, *oracle);
    return r;
}

namespace {

const char* kSectorFill[3] = {"#dbe8f6", "#e3f2dc", "#f8ecd4"};

void frame(std::vector<Vec2> pts, Vec2& lo, Vec2& hi, double pad) {
    lo = hi = pts[0];
    for (auto a : pts) {
        lo = {std::min(lo.x, a.x), std::min(lo.y, a.y)};
        hi = {std::max(hi.x, a.x), std::max(hi.y, a.y)};
    }
    double w = std::max(hi.x - lo.x, hi.y - lo.y);
    Vec2 c = 0.5 * (lo + hi);
    double h = 0.5 * w * (1 + pad);
    lo = c - Vec2{h, h};
    hi = c + Vec2{h, h};
}

// wedge between rays a + s d1 and a + s d2 (d1 to d2 counterclockwise), as a polygon reaching far
std::vector<Vec2> wedge(Vec2 a, Vec2 d1, Vec2 d2, double far) {
    std::vector<Vec2> w{a, a + far * d1};
    double a1 = std::atan2(d1.y, d1.x), a2 = std::atan2(d2.y, d2.x);
    while (a2 <= a1) a2 += 2 * M_PI;
    for (int k = 1; k < 16; ++k) {
        double ang = a1 + (a2 - a1) * k / 16;
        w.push_back(a + far * Vec2{std::cos(ang), std::sin(ang)});
    }
    w.push_back(a + far * d2);
    return w;
}

Vec2 unit(Vec2 a) { return a / norm(a); }

}  // namespace

std::string svg_lagrangian(const ThreeSectorProblem& p, double t) {
    std::array<Vec2, 3> tri;
    for (int k = 0; k < 3; ++k) tri[k] = t * (p.b - p.v[k]);
    Vec2 lo, hi;
    frame({tri[0], tri[1], tri[2], {0, 0}}, lo, hi, 1.6);
    Svg svg(lo, hi);
    double far = 10 * (hi.x - lo.x);
    // sector pieces: vertex t(b - v_i) plus the sector cone of v_i, between tau_{ki} and tau_{ij}
    for (int i = 0; i < 3; ++i) {
        int qin = (i + 2) % 3, qout = i;
        svg.polygon(wedge(tri[i], unit(p.tau[qin]), unit(p.tau[qout]), far), kSectorFill[i], "none");
    }
    for (int q = 0; q < 3; ++q) {
        int i = ThreeSectorProblem::first(q), j = ThreeSectorProblem::second(q);
        Vec2 d = unit(p.tau[q]);
        svg.polygon({tri[i], tri[j], tri[j] + far * d, tri[i] + far * d}, "#f2f2f2", "none");
        svg.ray(tri[i], d, "#555", 1.0);
        svg.ray(tri[j], d, "#555", 1.0);
    }
    svg.polygon({tri[0], tri[1], tri[2]}, "#f4c7c3", "#a33");
    // arrows y -> X_t(y) on a coarse lattice
    int m = 9;
    for (int a = 0; a < m; ++a)
        for (int c = 0; c < m; ++c) {
            Vec2 y{lo.x + (a + 0.5) * (hi.x - lo.x) / m, lo.y + (c + 0.5) * (hi.y - lo.y) / m};
            svg.arrow(y, exact_X(p, y, t), "#333", 0.8);
        }
    for (int k = 0; k < 3; ++k) svg.text(tri[k], "t(b-v" + std::to_string(k + 1) + ")", 11, "#333");
    svg.circle({0, 0}, 2.5, "#000");
    return svg.str();
}

std::string svg_eulerian(const ThreeSectorProblem& p, double t) {
    Vec2 tb = t * p.b;
    std::vector<Vec2> pts{tb};
    for (int k = 0; k < 3; ++k) pts.push_back(t * p.v[k]), pts.push_back(t * p.mid[k]);
    Vec2 lo, hi;
    frame(pts, lo, hi, 1.0);
    Svg svg(lo, hi);
    double far = 10 * (hi.x - lo.x);
    for (int i = 0; i < 3; ++i) {
        int qin = (i + 2) % 3, qout = i;
        // A_i^t lies between R_{ki} and R_{ij}
        svg.polygon(wedge(tb, unit(p.tau[qin]), unit(p.tau[qout]), far), kSectorFill[i], "none");
    }
    for (int q = 0; q < 3; ++q) {
        double w = 1.0 + 2.0 * t * norm(p.n[q]);
        svg.ray(tb, unit(p.tau[q]), "#222", w);
        // component of b along the filament, relative to the filament velocity
        Vec2 d = unit(p.tau[q]);
        double comp = dot(p.mid[q] - p.b, d);
        Vec2 at = tb + 0.5 * (hi.x - lo.x) * 0.25 * d;
        svg.arrow(at, at + (0.25 * t * comp) * d, "#c00", 2.0);
    }
    if (!p.sticky) svg.line(tb, t * p.mid[p.outflow], "#c00", 3.0);
    for (int k = 0; k < 3; ++k) {
        svg.circle(t * p.v[k], 2.5, "#246");
        svg.text(t * p.v[k], "tv" + std::to_string(k + 1), 11, "#246");
    }
    svg.circle(tb, 4.0, p.sticky ? "#000" : "#c00");
    svg.text(tb, "tb", 11);
    return svg.str();
}

std::string svg_preimages(const ThreeSectorProblem& p, double s, double t) {
    int q = p.sticky ? 0 : p.outflow;
    Vec2 xs = s * p.mid[q];
    Vec2 xt = (t - s) * p.b + s * p.mid[q];
    PreImage a = exact_X_inverse(p, xs, s), c = exact_X_inverse(p, xt, t);
    std::vector<Vec2> pts{xs, xt, {0, 0}};
    for (auto& e : a.sample(1)) pts.push_back(e);
    for (auto& e : c.sample(1)) pts.push_back(e);
    for (int k = 0; k < 3; ++k) pts.push_back(t * (p.b - p.v[k]));
    Vec2 lo, hi;
    frame(pts, lo, hi, 0.4);
    Svg svg(lo, hi);
    std::array<Vec2, 3> tri;
    for (int k = 0; k < 3; ++k) tri[k] = t * (p.b - p.v[k]);
    svg.polygon({tri[0], tri[1], tri[2]}, "#f7f7f7", "#bbb");
    auto draw = [&](const PreImage& pre, const std::string& col) {
        if (pre.kind == PreImage::Kind::triangle) {
            svg.polygon({pre.tri[0], pre.tri[1], pre.tri[2]}, col, col, 0.3);
            return;
        }
        for (auto& e : pre.segs) {
            if (e.first == e.second)
                svg.circle(e.first, 2.5, col);
            else
                svg.line(e.first, e.second, col, 2.0);
        }
    };
    draw(a, "#000");
    draw(c, "#1f5fbf");
    svg.circle(xs, 3.0, "#000");
    svg.circle(xt, 3.0, "#1f5fbf");
    svg.text(xs, "x at s", 11);
    svg.text(xt, "x at t", 11, "#1f5fbf");
    return svg.str();
}

}  // namespace adhesion
